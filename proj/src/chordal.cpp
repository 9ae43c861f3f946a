#include "mbk/chordal.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace mbk {

namespace {

constexpr std::uint64_t bit(int v) { return std::uint64_t{1} << v; }

std::vector<int> mask_to_vertices(std::uint64_t mask) {
    std::vector<int> out;
    while (mask) {
        int v = std::countr_zero(mask);
        out.push_back(v);
        mask &= mask - 1;
    }
    return out;
}

// Maximum cardinality search restricted to `mask`; returns a perfect
// elimination ordering (eliminate front first) or nullopt if none exists.
std::optional<std::vector<int>> peo_masked(const Graph& g, std::uint64_t mask) {
    const int k = std::popcount(mask);
    std::vector<int> order(k);
    std::vector<int> weight(g.n, 0);
    std::uint64_t unnumbered = mask;
    for (int i = k - 1; i >= 0; --i) {
        int best = -1;
        for (int v = 0; v < g.n; ++v)
            if ((unnumbered >> v) & 1u)
                if (best == -1 || weight[v] > weight[best]) best = v;
        order[i] = best;
        unnumbered &= ~bit(best);
        std::uint64_t nb = g.adj[best] & unnumbered;
        while (nb) {
            int u = std::countr_zero(nb);
            nb &= nb - 1;
            ++weight[u];
        }
    }
    // Zero-fill verification: later neighbors of each vertex must be a clique.
    std::uint64_t later = mask;
    for (int i = 0; i < k; ++i) {
        int v = order[i];
        later &= ~bit(v);
        std::uint64_t cand = g.adj[v] & later;
        std::uint64_t rest = cand;
        while (rest) {
            int u = std::countr_zero(rest);
            rest &= rest - 1;
            if ((cand & ~bit(u)) & ~g.adj[u]) return std::nullopt;
        }
    }
    return order;
}

// Maximal cliques (as masks) of the chordal graph induced on `mask`.
std::vector<std::uint64_t> cliques_masked(const Graph& g, std::uint64_t mask) {
    auto peo = peo_masked(g, mask);
    if (!peo) fail(Errc::NotChordal, "graph is not chordal");
    std::vector<std::uint64_t> cand;
    std::uint64_t later = mask;
    for (int v : *peo) {
        later &= ~bit(v);
        cand.push_back(bit(v) | (g.adj[v] & later));
    }
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < cand.size(); ++i) {
        bool maximal = true;
        for (std::size_t j = 0; j < cand.size() && maximal; ++j)
            if (i != j && (cand[i] | cand[j]) == cand[j] && cand[i] != cand[j]) maximal = false;
        if (maximal && std::find(out.begin(), out.end(), cand[i]) == out.end())
            out.push_back(cand[i]);
    }
    std::sort(out.begin(), out.end(), [](std::uint64_t a, std::uint64_t b) {
        return mask_to_vertices(a) < mask_to_vertices(b);
    });
    return out;
}

// Vertices of `mask` whose closed neighborhood within `mask` is a clique.
std::uint64_t simplicial_vertices(const Graph& g, std::uint64_t mask) {
    std::uint64_t out = 0;
    std::uint64_t rest = mask;
    while (rest) {
        int v = std::countr_zero(rest);
        rest &= rest - 1;
        std::uint64_t nb = g.adj[v] & mask;
        bool ok = true;
        std::uint64_t scan = nb;
        while (scan && ok) {
            int u = std::countr_zero(scan);
            scan &= scan - 1;
            if ((nb & ~bit(u)) & ~g.adj[u]) ok = false;
        }
        if (ok) out |= bit(v);
    }
    return out;
}

struct MaskBoundary {
    std::uint64_t clique;
    std::uint64_t simp;
};

std::vector<MaskBoundary> boundary_masked(const Graph& g, std::uint64_t mask) {
    auto cliques = cliques_masked(g, mask);
    std::vector<MaskBoundary> out;
    if (cliques.size() == 1) {
        out.push_back({cliques[0], cliques[0]});
        return out;
    }
    std::uint64_t simp = simplicial_vertices(g, mask);
    for (std::uint64_t d : cliques) {
        std::uint64_t sd = d & simp;
        if (!sd) continue;
        std::uint64_t sep = d & ~sd;
        for (std::uint64_t d2 : cliques)
            if (d2 != d && (d & d2) == sep) {
                out.push_back({d, sd});
                break;
            }
    }
    return out;
}

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[b] = a;
        return true;
    }
};

std::vector<int> intersect_sorted(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

} // namespace

Graph::Graph(int vertices) : n(vertices), adj(static_cast<std::size_t>(vertices), 0) {
    if (vertices < 0 || vertices > 64) fail(Errc::TooLarge, "graphs support up to 64 vertices");
}

void Graph::add_edge(int u, int v) {
    if (u == v) fail(Errc::ModelInvalid, "self-loop");
    adj[u] |= bit(v);
    adj[v] |= bit(u);
}

int Graph::degree(int v) const { return std::popcount(adj[v]); }

Graph independence_graph(const ModelSpec& model) {
    Graph g(model.num_vars());
    for (const auto& f : model.facets)
        for (std::size_t i = 0; i < f.size(); ++i)
            for (std::size_t j = i + 1; j < f.size(); ++j) g.add_edge(f[i], f[j]);
    return g;
}

int induced_component_count(const Graph& g, std::uint64_t mask) {
    int count = 0;
    std::uint64_t left = mask;
    while (left) {
        ++count;
        std::uint64_t comp = bit(std::countr_zero(left));
        for (;;) {
            std::uint64_t grown = comp;
            std::uint64_t scan = comp;
            while (scan) {
                int v = std::countr_zero(scan);
                scan &= scan - 1;
                grown |= g.adj[v] & mask;
            }
            if (grown == comp) break;
            comp = grown;
        }
        left &= ~comp;
    }
    return count;
}

std::optional<std::vector<int>> perfect_elimination_order(const Graph& g) {
    std::uint64_t all = g.n == 64 ? ~std::uint64_t{0} : (bit(g.n) - 1);
    return peo_masked(g, all);
}

bool is_chordal(const Graph& g) { return perfect_elimination_order(g).has_value(); }

std::vector<std::vector<int>> maximal_cliques(const Graph& g) {
    std::uint64_t all = g.n == 64 ? ~std::uint64_t{0} : (bit(g.n) - 1);
    std::vector<std::vector<int>> out;
    for (std::uint64_t m : cliques_masked(g, all)) out.push_back(mask_to_vertices(m));
    return out;
}

int CliqueTree::num_leaves() const {
    if (cliques.size() <= 1) return static_cast<int>(cliques.size());
    std::vector<int> deg(cliques.size(), 0);
    for (auto [a, b] : edges) {
        ++deg[a];
        ++deg[b];
    }
    return static_cast<int>(std::count(deg.begin(), deg.end(), 1));
}

CliqueTree clique_tree(const Graph& g) {
    CliqueTree t;
    t.cliques = maximal_cliques(g);
    const int k = static_cast<int>(t.cliques.size());
    struct Edge {
        int w, a, b;
    };
    std::vector<Edge> cand;
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
            cand.push_back({static_cast<int>(intersect_sorted(t.cliques[a], t.cliques[b]).size()), a, b});
    std::sort(cand.begin(), cand.end(), [](const Edge& x, const Edge& y) {
        if (x.w != y.w) return x.w > y.w;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });
    Dsu dsu(k);
    for (const Edge& e : cand) {
        if (static_cast<int>(t.edges.size()) == k - 1) break;
        if (dsu.unite(e.a, e.b)) {
            t.edges.emplace_back(e.a, e.b);
            t.separators.push_back(intersect_sorted(t.cliques[e.a], t.cliques[e.b]));
        }
    }
    return t;
}

CliqueTree make_clique_tree(std::vector<std::vector<int>> cliques,
                            std::vector<std::pair<int, int>> edges) {
    CliqueTree t;
    for (auto& c : cliques) std::sort(c.begin(), c.end());
    t.cliques = std::move(cliques);
    const int k = static_cast<int>(t.cliques.size());
    if (static_cast<int>(edges.size()) != std::max(0, k - 1))
        fail(Errc::ModelInvalid, "clique tree needs exactly #cliques-1 edges");
    Dsu dsu(k);
    for (auto& [a, b] : edges) {
        if (a > b) std::swap(a, b);
        if (a < 0 || b >= k || a == b) fail(Errc::ModelInvalid, "clique tree edge out of range");
        if (!dsu.unite(a, b)) fail(Errc::ModelInvalid, "clique tree edges contain a cycle");
        t.edges.emplace_back(a, b);
        t.separators.push_back(intersect_sorted(t.cliques[a], t.cliques[b]));
    }
    if (!running_intersection_holds(t))
        fail(Errc::ModelInvalid, "running-intersection property fails");
    return t;
}

bool running_intersection_holds(const CliqueTree& t) {
    const int k = static_cast<int>(t.cliques.size());
    std::vector<std::vector<int>> nbr(k);
    for (auto [a, b] : t.edges) {
        nbr[a].push_back(b);
        nbr[b].push_back(a);
    }
    for (int s = 0; s < k; ++s) {
        // BFS tree paths from s.
        std::vector<int> parent(k, -2);
        std::vector<int> queue{s};
        parent[s] = -1;
        for (std::size_t h = 0; h < queue.size(); ++h)
            for (int u : nbr[queue[h]])
                if (parent[u] == -2) {
                    parent[u] = queue[h];
                    queue.push_back(u);
                }
        for (int z = s + 1; z < k; ++z) {
            if (parent[z] == -2) return false; // tree not connected
            auto common = intersect_sorted(t.cliques[s], t.cliques[z]);
            for (int u = parent[z]; u != -1 && u != s; u = parent[u])
                if (!std::includes(t.cliques[u].begin(), t.cliques[u].end(),
                                   common.begin(), common.end()))
                    return false;
        }
    }
    return true;
}

std::vector<CliqueTree> enumerate_clique_trees(const Graph& g, std::size_t cap) {
    auto cliques = maximal_cliques(g);
    const int k = static_cast<int>(cliques.size());
    std::vector<CliqueTree> out;
    if (k == 1) {
        out.push_back(CliqueTree{cliques, {}, {}});
        return out;
    }
    std::vector<std::pair<int, int>> cand;
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) cand.emplace_back(a, b);

    std::vector<std::pair<int, int>> chosen;
    std::size_t explored = 0;
    const std::size_t explore_cap = 5'000'000;

    auto emit = [&]() {
        CliqueTree t;
        t.cliques = cliques;
        t.edges = chosen;
        for (auto [a, b] : chosen)
            t.separators.push_back(intersect_sorted(cliques[a], cliques[b]));
        if (running_intersection_holds(t)) {
            if (out.size() >= cap) fail(Errc::TooLarge, "clique tree enumeration exceeds cap");
            out.push_back(std::move(t));
        }
    };

    // Enumerate spanning trees: include/exclude each candidate edge with a
    // union-find per recursion level.
    auto rec = [&](auto&& self, std::size_t idx, const Dsu& dsu, int picked) -> void {
        if (++explored > explore_cap) fail(Errc::TooLarge, "clique tree search too large");
        if (picked == k - 1) {
            emit();
            return;
        }
        if (idx >= cand.size()) return;
        if (cand.size() - idx < static_cast<std::size_t>(k - 1 - picked)) return;
        // include
        Dsu next = dsu;
        auto [a, b] = cand[idx];
        if (next.unite(a, b)) {
            chosen.push_back(cand[idx]);
            self(self, idx + 1, next, picked + 1);
            chosen.pop_back();
        }
        // exclude
        self(self, idx + 1, dsu, picked);
    };
    rec(rec, 0, Dsu(k), 0);
    return out;
}

std::vector<BoundaryClique> boundary_cliques(const Graph& g) {
    std::uint64_t all = g.n == 64 ? ~std::uint64_t{0} : (bit(g.n) - 1);
    std::vector<BoundaryClique> out;
    for (const auto& mb : boundary_masked(g, all)) {
        BoundaryClique bc;
        bc.clique = mask_to_vertices(mb.clique);
        bc.simp = mask_to_vertices(mb.simp);
        bc.sep = mask_to_vertices(mb.clique & ~mb.simp);
        out.push_back(std::move(bc));
    }
    return out;
}

std::vector<int> elimination_variable_order(const Graph& g) {
    std::uint64_t mask = g.n == 64 ? ~std::uint64_t{0} : (bit(g.n) - 1);
    std::vector<int> order;
    while (mask) {
        auto bds = boundary_masked(g, mask);
        if (bds.empty()) fail(Errc::NotChordal, "no boundary clique in the residual graph");
        // Pick the boundary clique whose smallest simplicial vertex is minimal.
        const MaskBoundary* best = nullptr;
        for (const auto& mb : bds)
            if (!best || std::countr_zero(mb.simp) < std::countr_zero(best->simp)) best = &mb;
        for (int v : mask_to_vertices(best->simp)) order.push_back(v);
        mask &= ~best->simp;
    }
    return order;
}

} // namespace mbk
