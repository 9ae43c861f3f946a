#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "mbk/chordal.hpp"
#include "mbk/model.hpp"

namespace mbk {

/// Degenerate/non-degenerate split of the variables for a degree-two b,
/// with the realized level witnesses (a degenerate variable stores its
/// fixed level twice).
struct VariableClassification {
    std::vector<bool> nondegenerate;              // size m
    std::vector<std::pair<Level, Level>> levels;  // realized level pair, lo <= hi

    std::vector<int> nondegenerate_vars() const;
};

VariableClassification classify_variables(const ModelSpec& model, const MarginalVector& b);

/// One connected component of the induced graph G(nondegenerate vars),
/// with the unique unordered pair of component-marginal cells of count 1.
struct ComponentPattern {
    std::vector<int> vars;  // sorted ascending
    Cell cell_a, cell_b;    // in vars order; cell_a < cell_b
};

/// Component patterns obtained by propagating pairings along facet
/// intersections. Throws Inconsistent on contradiction.
std::vector<ComponentPattern> component_patterns(const ModelSpec& model,
                                                 const MarginalVector& b);

/// Everything known about a degree-two fiber from b alone.
struct FiberKey {
    MarginalVector b;
    VariableClassification cls;
    std::vector<ComponentPattern> components; // sorted by smallest variable

    int component_count() const { return static_cast<int>(components.size()); }
};

FiberKey fiber_key(const ModelSpec& model, const MarginalVector& b);

/// |F_b| = 2^{c(b)-1} for a nonempty set of non-degenerate variables;
/// 1 when every variable is degenerate.
Count fiber_size(const FiberKey& key);

struct Fiber {
    FiberKey key;
    std::vector<DegreeTwoTable> members;
};

/// Explicit members: component 1 keeps its stored orientation, components
/// 2..c flip per a binary counter (component l maps to bit c-l), matching
/// the direct-product construction of the fiber.
Fiber enumerate_fiber(const ModelSpec& model, const MarginalVector& b);

/// Representative fibers: one standardized key (degenerate variables
/// at level 0, every component patterned all-0/all-1) per variable subset
/// whose induced graph has >= 2 components.
std::vector<FiberKey> enumerate_representative_fibers(const ModelSpec& model);

/// All degree-two fibers with >= 2 elements, by scanning unordered
/// cell pairs and grouping by b. Throws TooLarge past max_cells.
std::vector<Fiber> enumerate_all_degree2_fibers(const ModelSpec& model,
                                                std::size_t max_cells = 4096);

/// Sizes of all degree-two fibers (including singletons) realized by cell
/// pairs i != j, each with the component count of its induced graph.
/// Used to replay the fiber-size law at scan scale.
struct Degree2FiberStat {
    Count size;
    int components;
};
std::vector<Degree2FiberStat> degree2_fiber_stats(const ModelSpec& model,
                                                  std::size_t max_cells = 4096);

/// Three pairwise non-adjacent vertices, if any (the non-uniqueness witness).
std::optional<std::array<int, 3>> independent_triple(const Graph& g);

/// True iff minimal Markov bases are non-unique: some induced subgraph of
/// the independence graph has >= 3 connected components.
bool minimal_bases_nonunique(const ModelSpec& model);

/// Boundary-clique form of the uniqueness predicate for chordal graphs: two
/// boundary cliques whose union covers every clique. Throws NotChordal.
bool unique_minimal_basis_boundary_criterion(const Graph& g);

} // namespace mbk
