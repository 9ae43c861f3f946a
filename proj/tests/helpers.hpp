#pragma once

#include <bit>
#include <random>
#include <set>
#include <vector>

#include "mbk/chordal.hpp"
#include "mbk/model.hpp"

namespace test {

// Random chordal graph by incremental construction: each new vertex is
// attached to a clique of the existing graph, so reverse insertion order is
// a perfect elimination ordering. Empty attachments give disconnected graphs.
inline mbk::Graph random_chordal(std::mt19937_64& rng, int n) {
    mbk::Graph g(n);
    for (int v = 1; v < n; ++v) {
        std::vector<int> earlier(v);
        for (int i = 0; i < v; ++i) earlier[i] = i;
        std::shuffle(earlier.begin(), earlier.end(), rng);
        std::vector<int> clique;
        for (int w : earlier) {
            bool ok = true;
            for (int s : clique)
                if (!g.has_edge(w, s)) ok = false;
            if (ok && rng() % 2 == 0) clique.push_back(w);
        }
        for (int s : clique) g.add_edge(v, s);
    }
    return g;
}

// Brute-force chordality: no induced cycle of length >= 4.
inline bool chordal_oracle(const mbk::Graph& g) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << g.n); ++mask) {
        if (std::popcount(mask) < 4) continue;
        bool all_deg2 = true;
        for (int v = 0; v < g.n && all_deg2; ++v)
            if ((mask >> v) & 1u)
                if (std::popcount(g.adj[v] & mask) != 2) all_deg2 = false;
        if (all_deg2 && mbk::induced_component_count(g, mask) == 1) return false;
    }
    return true;
}

// The graph whose cliques are {0,3},{1,3},{2,3,4} (five vertices).
inline mbk::Graph hub_graph_5() {
    mbk::Graph g(5);
    g.add_edge(0, 3);
    g.add_edge(1, 3);
    g.add_edge(2, 3);
    g.add_edge(2, 4);
    g.add_edge(3, 4);
    return g;
}

// A chordal graph with a uniquely determined clique tree shaped as a star
// with three leaves: hub {3,4,5}, leaves {0,3,4},{1,4,5},{2,3,5}.
inline mbk::Graph unique_star_tree_graph() {
    mbk::Graph g(6);
    g.add_edge(3, 4);
    g.add_edge(4, 5);
    g.add_edge(3, 5);
    g.add_edge(0, 3);
    g.add_edge(0, 4);
    g.add_edge(1, 4);
    g.add_edge(1, 5);
    g.add_edge(2, 3);
    g.add_edge(2, 5);
    return g;
}

// The decomposable model of a graph: facets = maximal cliques, binary levels.
inline mbk::ModelSpec graphical_model(const mbk::Graph& g, int levels_per_var = 2) {
    return mbk::ModelSpec::make(std::vector<int>(g.n, levels_per_var), mbk::maximal_cliques(g));
}

inline mbk::ModelSpec model(std::vector<int> levels, std::vector<std::vector<int>> facets) {
    return mbk::ModelSpec::make(std::move(levels), std::move(facets));
}

inline mbk::Table tbl(std::initializer_list<std::pair<mbk::Cell, mbk::Count>> cells) {
    mbk::Table t;
    for (const auto& [c, n] : cells) t.add(c, n);
    return t;
}

// Complete independence model on m binary variables.
inline mbk::ModelSpec independence(int m, int levels_per_var = 2) {
    std::vector<int> levels(m, levels_per_var);
    std::vector<std::vector<int>> facets;
    for (int d = 0; d < m; ++d) facets.push_back({d});
    return model(std::move(levels), std::move(facets));
}

// Random hierarchical model: random levels from `level_choices`, random
// antichain generating class covering all variables.
inline mbk::ModelSpec random_model(std::mt19937_64& rng, int max_vars,
                                   std::vector<int> level_choices = {2, 3}) {
    std::uniform_int_distribution<int> mdist(2, max_vars);
    int m = mdist(rng);
    std::vector<int> levels(m);
    for (auto& l : levels) l = level_choices[rng() % level_choices.size()];

    std::set<std::vector<int>> facets;
    std::uniform_int_distribution<int> fcount(1, std::max(2, m));
    int want = fcount(rng);
    for (int tries = 0; tries < 50 && static_cast<int>(facets.size()) < want; ++tries) {
        std::vector<int> f;
        for (int d = 0; d < m; ++d)
            if (rng() % 3 == 0) f.push_back(d);
        if (f.empty() || static_cast<int>(f.size()) == m) continue;
        facets.insert(f);
    }
    // Cover missed variables with singletons, then drop nested facets.
    std::vector<bool> covered(m, false);
    for (const auto& f : facets)
        for (int v : f) covered[v] = true;
    for (int d = 0; d < m; ++d)
        if (!covered[d]) facets.insert({d});
    std::vector<std::vector<int>> keep;
    for (const auto& f : facets) {
        bool nested = false;
        for (const auto& g : facets)
            if (f != g && std::includes(g.begin(), g.end(), f.begin(), f.end())) nested = true;
        if (!nested) keep.push_back(f);
    }
    return model(std::move(levels), std::move(keep));
}

inline mbk::Cell random_cell(std::mt19937_64& rng, const mbk::ModelSpec& m) {
    mbk::Cell c(m.num_vars());
    for (int d = 0; d < m.num_vars(); ++d)
        c[d] = static_cast<mbk::Level>(rng() % static_cast<unsigned>(m.levels[d]));
    return c;
}

inline mbk::Table random_table(std::mt19937_64& rng, const mbk::ModelSpec& m, mbk::Count total) {
    mbk::Table t;
    for (mbk::Count k = 0; k < total; ++k) t.add(random_cell(rng, m), 1);
    return t;
}

} // namespace test
