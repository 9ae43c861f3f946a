#include "mbk/sampler.hpp"

#include <algorithm>
#include <cmath>

namespace mbk {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Table mh_step(const Table& t, const MarkovBasis& basis, std::mt19937_64& rng) {
    if (basis.moves.empty()) fail(Errc::EmptyBasis, "sampler needs a nonempty basis");
    std::uniform_int_distribution<std::size_t> pick(0, basis.moves.size() - 1);
    const Move& z = basis.moves[pick(rng)];
    int sign = (rng() & 1u) ? 1 : -1;

    auto proposed = try_apply_move(t, z, sign);
    if (!proposed) return t;

    // log pi(n')/pi(n) = sum over the move support of log n! - log n'!.
    double log_ratio = 0.0;
    auto add_cells = [&](const Table& part) {
        for (const auto& [c, cnt] : part.cells()) {
            (void)cnt;
            log_ratio += std::lgamma(static_cast<double>(t.at(c)) + 1.0) -
                         std::lgamma(static_cast<double>(proposed->at(c)) + 1.0);
        }
    };
    add_cells(z.pos());
    add_cells(z.neg());

    if (log_ratio >= 0.0) return *proposed;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    return std::log(unif(rng)) < log_ratio ? *proposed : t;
}

FitResult fit_decomposable(const ModelSpec& model, const Table& t, const CliqueTree& tree) {
    if (!is_chordal(independence_graph(model)))
        fail(Errc::NotDecomposable, "fit needs a decomposable model");

    const double n = static_cast<double>(t.total());
    FitResult out;
    if (t.empty()) return out;

    std::vector<std::map<Cell, Count>> clique_marg, sep_marg;
    for (const auto& c : tree.cliques) clique_marg.push_back(marginalize(model, t, c));
    for (const auto& s : tree.separators) sep_marg.push_back(marginalize(model, t, s));

    const std::size_t cells = model.num_cells();
    if (cells > 1'000'000) fail(Errc::TooLarge, "fit enumerates the full cell lattice");

    for (std::size_t idx = 0; idx < cells; ++idx) {
        Cell cell = cell_from_index(model, idx);
        double mean = 1.0;
        bool zero = false;
        for (std::size_t j = 0; j < tree.cliques.size() && !zero; ++j) {
            Cell key(tree.cliques[j].size());
            for (std::size_t k = 0; k < key.size(); ++k) key[k] = cell[tree.cliques[j][k]];
            auto it = clique_marg[j].find(key);
            if (it == clique_marg[j].end()) zero = true;
            else mean *= static_cast<double>(it->second);
        }
        if (zero) continue;
        for (std::size_t e = 0; e < tree.separators.size(); ++e) {
            if (tree.separators[e].empty()) {
                mean /= n;
                continue;
            }
            Cell key(tree.separators[e].size());
            for (std::size_t k = 0; k < key.size(); ++k) key[k] = cell[tree.separators[e][k]];
            mean /= static_cast<double>(sep_marg[e].at(key));
        }
        out.fitted.emplace(std::move(cell), mean);
    }

    for (const auto& [c, mean] : out.fitted) {
        double obs = static_cast<double>(t.at(c));
        out.chi2 += (obs - mean) * (obs - mean) / mean;
    }
    return out;
}

namespace {

double chi2_of(const Table& t, const std::map<Cell, double>& fitted) {
    double chi2 = 0.0;
    for (const auto& [c, mean] : fitted) {
        double obs = static_cast<double>(t.at(c));
        chi2 += (obs - mean) * (obs - mean) / mean;
    }
    return chi2;
}

} // namespace

ExactTestResult exact_test(const ModelSpec& model, const Table& observed,
                           const MarkovBasis& basis, const ChainConfig& cfg) {
    if (cfg.steps <= cfg.burnin || cfg.burnin < 0 || cfg.thin < 1)
        fail(Errc::ModelInvalid, "need steps > burnin >= 0 and thin >= 1");

    Graph g = independence_graph(model);
    FitResult fit = fit_decomposable(model, observed, clique_tree(g));

    ExactTestResult out;
    out.chi2_observed = fit.chi2;
    out.steps = cfg.steps;

    // Fitted means are shared along the chain: every state has the same b.
    const double threshold = fit.chi2 - 1e-9;

    std::mt19937_64 rng(derive_seed(cfg.seed, 0));
    Table state = observed;
    std::vector<double> samples;
    for (std::int64_t step = 0; step < cfg.steps; ++step) {
        state = mh_step(state, basis, rng);
        if (step >= cfg.burnin && (step - cfg.burnin) % cfg.thin == 0)
            samples.push_back(chi2_of(state, fit.fitted) >= threshold ? 1.0 : 0.0);
    }

    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    out.p_value = mean;

    // Batch-means standard error.
    const std::size_t batches = std::min<std::size_t>(50, std::max<std::size_t>(1, samples.size() / 20));
    const std::size_t per = samples.size() / batches;
    if (per >= 2 && batches >= 2) {
        std::vector<double> bm(batches, 0.0);
        for (std::size_t b = 0; b < batches; ++b) {
            for (std::size_t k = 0; k < per; ++k) bm[b] += samples[b * per + k];
            bm[b] /= static_cast<double>(per);
        }
        double mb = 0.0;
        for (double v : bm) mb += v;
        mb /= static_cast<double>(batches);
        double var = 0.0;
        for (double v : bm) var += (v - mb) * (v - mb);
        var /= static_cast<double>(batches - 1);
        out.se = std::sqrt(var / static_cast<double>(batches));
    }
    return out;
}

} // namespace mbk
