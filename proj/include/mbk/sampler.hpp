#pragma once

#include <cstdint>
#include <map>
#include <random>

#include "mbk/bases.hpp"
#include "mbk/chordal.hpp"
#include "mbk/model.hpp"

namespace mbk {

struct ChainConfig {
    std::int64_t steps = 100000;
    std::int64_t burnin = 1000;
    std::int64_t thin = 1;
    std::uint64_t seed = 0;
};

/// One lazy Metropolis-Hastings step targeting the conditional
/// P(n) proportional to 1/prod n(i)!: uniform (move, sign) proposal,
/// acceptance by the factorial ratio over the move support, staying put on
/// rejection or inapplicability. Throws EmptyBasis.
Table mh_step(const Table& t, const MarkovBasis& basis, std::mt19937_64& rng);

struct FitResult {
    std::map<Cell, double> fitted; // cells with positive fitted mean
    double chi2 = 0.0;
};

/// Closed-form decomposable MLE: product of clique marginals over product
/// of edge separator marginals (the empty separator contributing the grand
/// total), with the Pearson chi-square of the observed table.
FitResult fit_decomposable(const ModelSpec& model, const Table& t, const CliqueTree& tree);

struct ExactTestResult {
    double p_value = 0.0;
    double se = 0.0;
    double chi2_observed = 0.0;
    std::int64_t steps = 0;
};

/// Monte Carlo exact test: fraction of post-burn-in samples with
/// chi-square >= observed, standard error via batch means.
ExactTestResult exact_test(const ModelSpec& model, const Table& observed,
                           const MarkovBasis& basis, const ChainConfig& cfg);

/// Derives a fresh stream seed (SplitMix64), for reproducible sub-chains.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace mbk
