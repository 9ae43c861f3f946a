#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mbk/model.hpp"

namespace mbk {

/// Undirected graph on vertices 0..n-1 (n <= 64), adjacency as bitmasks.
struct Graph {
    int n = 0;
    std::vector<std::uint64_t> adj;

    Graph() = default;
    explicit Graph(int vertices);

    void add_edge(int u, int v);
    bool has_edge(int u, int v) const { return (adj[u] >> v) & 1u; }
    int degree(int v) const;
};

/// The independence graph G^D: an edge wherever two variables co-occur in
/// a facet.
Graph independence_graph(const ModelSpec& model);

/// Connected-component count of the subgraph induced on `mask`.
int induced_component_count(const Graph& g, std::uint64_t mask);

/// Maximum cardinality search followed by a fill-in check. Returns the
/// witness perfect elimination ordering, or nullopt for non-chordal input.
std::optional<std::vector<int>> perfect_elimination_order(const Graph& g);

bool is_chordal(const Graph& g);

/// The maximal cliques of a chordal graph, each sorted, the list sorted.
/// Throws NotChordal.
std::vector<std::vector<int>> maximal_cliques(const Graph& g);

struct CliqueTree {
    std::vector<std::vector<int>> cliques;    // sorted vertex lists
    std::vector<std::pair<int, int>> edges;   // clique-index pairs, first < second
    std::vector<std::vector<int>> separators; // parallel to edges

    int num_leaves() const;
};

/// The canonical clique tree: maximum-weight spanning tree of the clique
/// graph (weights = separator sizes), Kruskal ties broken by lexicographic
/// clique-index pairs. Disconnected graphs are spanned through empty
/// separators, preferring lowest-index cliques. Throws NotChordal.
CliqueTree clique_tree(const Graph& g);

/// Builds a clique tree from explicit cliques/edges, computes separators
/// and validates the running-intersection property.
CliqueTree make_clique_tree(std::vector<std::vector<int>> cliques,
                            std::vector<std::pair<int, int>> edges);

/// All distinct clique trees (spanning trees of the clique graph passing
/// the running-intersection test). Throws TooLarge past `cap` trees.
std::vector<CliqueTree> enumerate_clique_trees(const Graph& g, std::size_t cap = 10000);

bool running_intersection_holds(const CliqueTree& t);

struct BoundaryClique {
    std::vector<int> clique;
    std::vector<int> simp; // simplicial (simply separated) vertices
    std::vector<int> sep;  // the rest: Sep(D) = D \ Simp(D)
};

/// Boundary cliques with their Simp/Sep splits. A graph with a single
/// maximal clique reports that clique (Simp = everything). Throws NotChordal.
std::vector<BoundaryClique> boundary_cliques(const Graph& g);

/// Variable ordering obtained by recursively peeling boundary cliques:
/// the chosen clique's simplicial vertices are emitted (ascending) as the
/// lowest remaining variables. Tie-break: the boundary clique whose
/// smallest simplicial vertex is minimal. The result is a perfect
/// elimination scheme. Throws NotChordal.
std::vector<int> elimination_variable_order(const Graph& g);

} // namespace mbk
