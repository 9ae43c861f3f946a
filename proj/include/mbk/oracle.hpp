#pragma once

#include <functional>
#include <vector>

#include "mbk/chordal.hpp"
#include "mbk/model.hpp"

namespace mbk {
namespace oracle {

struct Caps {
    std::size_t max_cells = 4096;
    Count max_degree = 4;
    std::size_t max_tables = 20'000'000; // total tables touched per call
};

/// All nonnegative integer tables with marginal vector b, by depth-first
/// placement of deg(b) unit masses with facet-marginal pruning.
/// Throws TooLarge past the caps.
std::vector<Table> enumerate_fiber_bruteforce(const ModelSpec& model, const MarginalVector& b,
                                              const Caps& caps = {});

/// Every fiber of exactly the given degree, as member lists.
/// Throws TooLarge past the caps.
std::vector<std::vector<Table>> fibers_of_degree(const ModelSpec& model, Count degree,
                                                 const Caps& caps = {});

/// Streaming form; the sink returns false to stop early.
void for_each_fiber_of_degree(const ModelSpec& model, Count degree, const Caps& caps,
                              const std::function<bool(const std::vector<Table>&)>& sink);

struct Connectivity {
    bool connected = false;
    std::vector<std::vector<int>> components; // member indices
};

/// Move graph on the fiber members: an edge wherever n - n' = +-z for some
/// z in `moves`; union-find connectivity.
Connectivity fiber_graph_connected(const std::vector<Table>& members,
                                   const std::vector<Move>& moves);

/// Maximum connected-component count over all nonempty induced subgraphs,
/// with early exit once `max_parts` is reached. Throws TooLarge for more
/// than 16 vertices.
int induced_component_scan(const Graph& g, int max_parts = 64);

} // namespace oracle
} // namespace mbk
