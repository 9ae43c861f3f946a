#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mbk/chordal.hpp"
#include "mbk/fiber2.hpp"
#include "mbk/model.hpp"
#include "mbk/oracle.hpp"

namespace mbk {

enum class Provenance {
    MinimalStar,
    MinimalPath,
    MinimalRandom,
    Dobra,
    Invariant,
    Doubling,
    Groebner,
};

const char* provenance_name(Provenance p);

/// Deduplicated canonical move set, optionally annotated per move with the
/// index of its fiber key.
struct MarkovBasis {
    std::vector<Move> moves;            // sorted, unique up to sign
    Provenance provenance = Provenance::MinimalStar;
    std::vector<int> move_fiber;        // parallel to moves; -1 when unknown
    std::vector<MarginalVector> fibers; // referenced fiber keys
    bool degree2_only = false;          // set when G^D is not chordal

    std::size_t size() const { return moves.size(); }
};

enum class TreePolicy { StarAtMin, Path, Random };

/// Spanning-tree moves for every degree-two fiber with >= 2 elements.
/// StarAtMin
/// centers each star at the term-order-minimal member, so the result
/// coincides with the Groebner basis under the default order.
MarkovBasis minimal_basis(const ModelSpec& model, TreePolicy policy = TreePolicy::StarAtMin,
                          std::uint64_t seed = 0, std::size_t max_cells = 4096);

/// Dobra's basis: all primitive moves of the two-clique coarsening
/// {V_e, V'_e} for every clique tree edge, deduplicated up to sign.
MarkovBasis dobra_basis(const ModelSpec& model, const CliqueTree& tree);

struct DobraMinimality {
    bool minimal = false;
    // Witness when not minimal: a fiber over three pairwise non-adjacent
    // variables where the tree basis carries more moves than needed.
    std::optional<MarginalVector> witness_fiber;
    Count witness_fiber_size = 0;
    std::size_t witness_move_count = 0;
};

/// Some clique tree yields a minimal Dobra basis iff the minimal basis
/// is unique.
DobraMinimality dobra_is_minimal(const ModelSpec& model);

/// GF(2) row vector of length c-1 (bit l-2 stands for component l).
struct Gf2Vector {
    std::uint64_t bits = 0;
    int len = 0;

    friend auto operator<=>(const Gf2Vector&, const Gf2Vector&) = default;
};

using Gf2Basis = std::vector<Gf2Vector>;

enum class Gf2Flavor { Staircase, Standard };

/// Staircase: (11...1), (01...1), ..., (00...1). Standard: unit vectors.
Gf2Basis gf2_default_basis(int components, Gf2Flavor flavor);

/// Rank check over GF(2).
bool gf2_is_basis(const Gf2Basis& basis);

struct Orbit {
    Move representative;
    std::vector<Move> members; // closed under level permutations modulo sign
    int fiber_index = -1;      // index into the representative fiber list
};

struct OrbitAnnotatedBasis {
    std::vector<Orbit> orbits;
    std::vector<MarginalVector> fibers; // representative fiber keys
    bool degree2_only = false;

    MarkovBasis flatten() const;
};

/// Per representative fiber, c(b)-1 orbit representatives
/// z_{v_k} = n0 - n_{v_k} expanded to their full level-permutation orbits.
OrbitAnnotatedBasis invariant_basis(const ModelSpec& model,
                                    Gf2Flavor flavor = Gf2Flavor::Staircase);

struct InvariantMinimality {
    bool minimal = false;
    // Witness when not minimal: a representative fiber where the tree basis
    // carries more orbits than kappa(b) = c(b)-1.
    std::optional<MarginalVector> witness_fiber;
    std::size_t witness_orbits = 0;
    std::size_t witness_kappa = 0;
};

/// A Dobra basis is minimal invariant iff the tree has two endpoints.
InvariantMinimality dobra_is_minimal_invariant(const ModelSpec& model, const CliqueTree& tree);

/// The doubling construction. `flips` lists the c-1 component
/// flip patterns (the group elements H_b through the GF(2) isomorphism).
/// Throws NotABasis when the patterns are dependent over GF(2).
std::vector<Move> doubling_moves(const ModelSpec& model, const Fiber& fiber,
                                 const Gf2Basis& flips);

/// Minimal basis assembled from the doubling construction on every fiber.
MarkovBasis minimal_basis_from_invariant(const ModelSpec& model,
                                         Gf2Flavor flavor = Gf2Flavor::Staircase,
                                         std::size_t max_cells = 4096);

struct BasisCheck {
    bool ok = false;
    // First failing fiber, when not ok.
    std::optional<MarginalVector> witness_b;
    std::vector<Table> witness_members;
    std::vector<std::vector<int>> witness_components;
};

/// Brute-force verification: every fiber up to the degree cap must be
/// connected by the candidate moves. Degree 2 suffices for decomposable
/// models with primitive candidates.
BasisCheck is_markov_basis(const ModelSpec& model, const std::vector<Move>& candidate,
                           Count degree_cap = 2, const oracle::Caps& caps = {});

/// All moves of a basis that belong to the fiber of b.
std::vector<Move> restrict_to_fiber(const ModelSpec& model, const std::vector<Move>& moves,
                                    const MarginalVector& b);

/// Orbit count of a move set within one degree-two fiber under the
/// component-flip stabilizer (moves identified with their negations).
std::size_t orbit_count_in_fiber(const FiberKey& key, const std::vector<Move>& moves_in_fiber);

} // namespace mbk
