#include "mbk/fiber2.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <unordered_map>

namespace mbk {

std::vector<int> VariableClassification::nondegenerate_vars() const {
    std::vector<int> out;
    for (int d = 0; d < static_cast<int>(nondegenerate.size()); ++d)
        if (nondegenerate[d]) out.push_back(d);
    return out;
}

VariableClassification classify_variables(const ModelSpec& model, const MarginalVector& b) {
    if (b.degree != 2) fail(Errc::NotDegreeTwo, "marginal vector has degree != 2");
    if (b.facet_marginals.size() != model.facets.size())
        fail(Errc::ModelInvalid, "marginal vector does not match model facets");

    const int m = model.num_vars();
    VariableClassification cls;
    cls.nondegenerate.assign(m, false);
    cls.levels.assign(m, {-1, -1});

    for (std::size_t j = 0; j < model.facets.size(); ++j) {
        Count tot = 0;
        for (const auto& [c, n] : b.facet_marginals[j]) {
            if (n <= 0) fail(Errc::Inconsistent, "facet marginal stores a nonpositive count");
            if (c.size() != model.facets[j].size())
                fail(Errc::ModelInvalid, "marginal cell arity mismatch");
            tot += n;
        }
        if (tot != 2) fail(Errc::Inconsistent, "facet marginal total differs from degree");
        if (b.facet_marginals[j].size() > 2)
            fail(Errc::Inconsistent, "degree-two marginal with more than two cells");
    }

    // One-dimensional marginals, required to agree across facets.
    std::vector<bool> seen(m, false);
    for (std::size_t j = 0; j < model.facets.size(); ++j) {
        const auto& facet = model.facets[j];
        for (std::size_t k = 0; k < facet.size(); ++k) {
            int d = facet[k];
            Count at_a = 0, at_b = 0;
            Level la = -1, lb = -1;
            for (const auto& [c, n] : b.facet_marginals[j]) {
                Level l = c[k];
                if (la == -1 || l == la) {
                    la = l;
                    at_a += n;
                } else if (lb == -1 || l == lb) {
                    lb = l;
                    at_b += n;
                }
            }
            std::pair<Level, Level> pair;
            bool nondeg;
            if (at_b == 0) {
                pair = {la, la};
                nondeg = false;
            } else if (at_a == 1 && at_b == 1) {
                pair = {std::min(la, lb), std::max(la, lb)};
                nondeg = true;
            } else {
                fail(Errc::Inconsistent, "one-dimensional marginal is not a degree-two split");
            }
            if (!seen[d]) {
                seen[d] = true;
                cls.nondegenerate[d] = nondeg;
                cls.levels[d] = pair;
            } else if (cls.nondegenerate[d] != nondeg || cls.levels[d] != pair) {
                fail(Errc::Inconsistent, "facets disagree on a variable's marginal");
            }
        }
    }
    return cls;
}

namespace {

struct ParityDsu {
    std::vector<int> parent;
    std::vector<unsigned char> parity; // relative to parent

    explicit ParityDsu(int n) : parent(n), parity(n, 0) {
        std::iota(parent.begin(), parent.end(), 0);
    }

    int find(int x) {
        if (parent[x] == x) return x;
        int r = find(parent[x]);
        parity[x] = static_cast<unsigned char>(parity[x] ^ parity[parent[x]]);
        parent[x] = r;
        return r;
    }

    // false on parity contradiction
    bool unite(int a, int b, unsigned char p) {
        int ra = find(a), rb = find(b);
        unsigned char pa = parity[a], pb = parity[b];
        if (ra == rb) return static_cast<unsigned char>(pa ^ pb) == p;
        parent[rb] = ra;
        parity[rb] = static_cast<unsigned char>(pa ^ pb ^ p);
        return true;
    }
};

} // namespace

std::vector<ComponentPattern> component_patterns(const ModelSpec& model,
                                                 const MarginalVector& b) {
    auto cls = classify_variables(model, b);
    const int m = model.num_vars();

    ParityDsu dsu(m);
    for (std::size_t j = 0; j < model.facets.size(); ++j) {
        const auto& facet = model.facets[j];
        const auto& marg = b.facet_marginals[j];
        if (marg.size() != 2) continue;
        const Cell& c1 = marg.begin()->first;
        // side(d) = 0 when c1 realizes the lower level of d's pair
        int anchor = -1;
        unsigned char anchor_side = 0;
        for (std::size_t k = 0; k < facet.size(); ++k) {
            int d = facet[k];
            if (!cls.nondegenerate[d]) continue;
            unsigned char side = c1[k] == cls.levels[d].first ? 0 : 1;
            if (anchor == -1) {
                anchor = d;
                anchor_side = side;
            } else if (!dsu.unite(anchor, d, static_cast<unsigned char>(anchor_side ^ side))) {
                fail(Errc::Inconsistent, "facet pairings contradict each other");
            }
        }
    }

    // Gather components, ordered by smallest member variable.
    std::vector<std::vector<int>> comps;
    std::unordered_map<int, std::size_t> root_slot;
    for (int d = 0; d < m; ++d) {
        if (!cls.nondegenerate[d]) continue;
        int r = dsu.find(d);
        auto it = root_slot.find(r);
        if (it == root_slot.end()) {
            root_slot.emplace(r, comps.size());
            comps.push_back({d});
        } else {
            comps[it->second].push_back(d);
        }
    }
    std::sort(comps.begin(), comps.end());

    std::vector<ComponentPattern> out;
    for (auto& vars : comps) {
        ComponentPattern cp;
        cp.vars = vars;
        int root = vars.front(); // orient: smallest variable takes its lower level
        cp.cell_a.resize(vars.size());
        cp.cell_b.resize(vars.size());
        dsu.find(root);
        for (std::size_t k = 0; k < vars.size(); ++k) {
            int d = vars[k];
            dsu.find(d);
            unsigned char rel = static_cast<unsigned char>(dsu.parity[d] ^ dsu.parity[root]);
            cp.cell_a[k] = rel == 0 ? cls.levels[d].first : cls.levels[d].second;
            cp.cell_b[k] = rel == 0 ? cls.levels[d].second : cls.levels[d].first;
        }
        out.push_back(std::move(cp));
    }
    return out;
}

FiberKey fiber_key(const ModelSpec& model, const MarginalVector& b) {
    FiberKey key;
    key.b = b;
    key.cls = classify_variables(model, b);
    key.components = component_patterns(model, b);
    return key;
}

Count fiber_size(const FiberKey& key) {
    int c = key.component_count();
    if (c == 0) return 1;
    if (c > 62) fail(Errc::TooLarge, "fiber size overflows");
    return Count{1} << (c - 1);
}

Fiber enumerate_fiber(const ModelSpec& model, const MarginalVector& b) {
    Fiber fiber;
    fiber.key = fiber_key(model, b);
    const int m = model.num_vars();
    const int c = fiber.key.component_count();

    Cell base(m, -1);
    for (int d = 0; d < m; ++d)
        if (!fiber.key.cls.nondegenerate[d]) base[d] = fiber.key.cls.levels[d].first;

    if (c == 0) {
        fiber.members.emplace_back(base, base);
        return fiber;
    }

    const Count total = fiber_size(fiber.key);
    for (Count j = 0; j < total; ++j) {
        Cell cell1 = base, cell2 = base;
        for (int l = 0; l < c; ++l) {
            bool flip = l > 0 && ((j >> (c - 1 - l)) & 1);
            const auto& cp = fiber.key.components[l];
            for (std::size_t k = 0; k < cp.vars.size(); ++k) {
                cell1[cp.vars[k]] = flip ? cp.cell_b[k] : cp.cell_a[k];
                cell2[cp.vars[k]] = flip ? cp.cell_a[k] : cp.cell_b[k];
            }
        }
        fiber.members.emplace_back(std::move(cell1), std::move(cell2));
    }
    return fiber;
}

std::vector<FiberKey> enumerate_representative_fibers(const ModelSpec& model) {
    const int m = model.num_vars();
    if (m > 24) fail(Errc::TooLarge, "representative fiber scan limited to 24 variables");
    Graph g = independence_graph(model);

    std::vector<FiberKey> out;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
        if (induced_component_count(g, mask) < 2) continue;
        Cell lo(m, 0), hi(m, 0);
        for (int d = 0; d < m; ++d)
            if ((mask >> d) & 1u) hi[d] = 1;
        Table t;
        t.add(lo, 1);
        t.add(hi, 1);
        out.push_back(fiber_key(model, compute_b(model, t)));
    }
    return out;
}

namespace {

// Facet-marginal codes for every cell, enabling the fast pair scan.
struct FacetCodes {
    std::size_t num_cells;
    std::vector<std::vector<std::uint32_t>> code; // [facet][cell index]
};

FacetCodes facet_codes(const ModelSpec& model, std::size_t max_cells) {
    FacetCodes fc;
    fc.num_cells = model.num_cells();
    if (fc.num_cells > max_cells) fail(Errc::TooLarge, "cell lattice exceeds the scan cap");
    fc.code.assign(model.facets.size(), std::vector<std::uint32_t>(fc.num_cells));
    for (std::size_t idx = 0; idx < fc.num_cells; ++idx) {
        Cell cell = cell_from_index(model, idx);
        for (std::size_t j = 0; j < model.facets.size(); ++j) {
            std::uint32_t code = 0;
            for (int v : model.facets[j])
                code = code * static_cast<std::uint32_t>(model.levels[v]) +
                       static_cast<std::uint32_t>(cell[v]);
            fc.code[j][idx] = code;
        }
    }
    return fc;
}

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
}

struct PairEntry {
    std::uint64_t hash;
    std::uint32_t i, j;
};

std::vector<std::uint64_t> exact_key(const FacetCodes& fc, std::uint32_t i, std::uint32_t j) {
    std::vector<std::uint64_t> key(fc.code.size());
    for (std::size_t f = 0; f < fc.code.size(); ++f) {
        std::uint64_t a = fc.code[f][i], b = fc.code[f][j];
        if (a > b) std::swap(a, b);
        key[f] = (a << 32) | b;
    }
    return key;
}

// Groups all unordered cell pairs i < j by their marginal vector and hands
// each group (as pair index lists) to `sink`.
template <typename Sink>
void scan_pair_groups(const ModelSpec& model, std::size_t max_cells, Sink&& sink) {
    FacetCodes fc = facet_codes(model, max_cells);
    const std::uint32_t n = static_cast<std::uint32_t>(fc.num_cells);

    std::vector<PairEntry> entries;
    entries.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j) {
            std::uint64_t h = 0;
            for (std::size_t f = 0; f < fc.code.size(); ++f) {
                std::uint64_t a = fc.code[f][i], b = fc.code[f][j];
                if (a > b) std::swap(a, b);
                h = mix64(h ^ mix64((a << 32) | b) ^ (0x9e3779b97f4a7c15ULL * (f + 1)));
            }
            entries.push_back({h, i, j});
        }
    std::sort(entries.begin(), entries.end(), [](const PairEntry& a, const PairEntry& b) {
        if (a.hash != b.hash) return a.hash < b.hash;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });

    std::vector<std::pair<std::uint32_t, std::uint32_t>> group;
    for (std::size_t lo = 0; lo < entries.size();) {
        std::size_t hi = lo;
        while (hi < entries.size() && entries[hi].hash == entries[lo].hash) ++hi;
        if (hi - lo == 1) {
            group.assign(1, {entries[lo].i, entries[lo].j});
            sink(group);
        } else {
            // Resolve possible hash collisions by the exact keys.
            std::map<std::vector<std::uint64_t>, std::vector<std::pair<std::uint32_t, std::uint32_t>>>
                split;
            for (std::size_t k = lo; k < hi; ++k)
                split[exact_key(fc, entries[k].i, entries[k].j)].emplace_back(entries[k].i,
                                                                              entries[k].j);
            for (auto& [key, pairs] : split) sink(pairs);
        }
        lo = hi;
    }
}

} // namespace

std::vector<Fiber> enumerate_all_degree2_fibers(const ModelSpec& model, std::size_t max_cells) {
    std::vector<Fiber> out;
    scan_pair_groups(model, max_cells, [&](const auto& pairs) {
        if (pairs.size() < 2) return;
        Fiber fiber;
        for (const auto& [i, j] : pairs)
            fiber.members.emplace_back(cell_from_index(model, i), cell_from_index(model, j));
        std::sort(fiber.members.begin(), fiber.members.end());
        fiber.key = fiber_key(model, compute_b(model, fiber.members.front().to_table()));
        out.push_back(std::move(fiber));
    });
    std::sort(out.begin(), out.end(),
              [](const Fiber& a, const Fiber& b) { return a.key.b < b.key.b; });
    return out;
}

std::vector<Degree2FiberStat> degree2_fiber_stats(const ModelSpec& model, std::size_t max_cells) {
    Graph g = independence_graph(model);
    const int m = model.num_vars();
    std::vector<Degree2FiberStat> out;
    scan_pair_groups(model, max_cells, [&](const auto& pairs) {
        Cell a = cell_from_index(model, pairs.front().first);
        Cell b = cell_from_index(model, pairs.front().second);
        std::uint64_t mask = 0;
        for (int d = 0; d < m; ++d)
            if (a[d] != b[d]) mask |= std::uint64_t{1} << d;
        out.push_back({static_cast<Count>(pairs.size()), induced_component_count(g, mask)});
    });
    return out;
}

std::optional<std::array<int, 3>> independent_triple(const Graph& g) {
    for (int a = 0; a < g.n; ++a)
        for (int b = a + 1; b < g.n; ++b) {
            if (g.has_edge(a, b)) continue;
            for (int c = b + 1; c < g.n; ++c)
                if (!g.has_edge(a, c) && !g.has_edge(b, c)) return std::array<int, 3>{a, b, c};
        }
    return std::nullopt;
}

bool minimal_bases_nonunique(const ModelSpec& model) {
    return independent_triple(independence_graph(model)).has_value();
}

bool unique_minimal_basis_boundary_criterion(const Graph& g) {
    auto cliques = maximal_cliques(g);
    if (cliques.size() == 1) return true;
    auto bds = boundary_cliques(g);
    for (std::size_t x = 0; x < bds.size(); ++x)
        for (std::size_t y = x + 1; y < bds.size(); ++y) {
            std::vector<int> cover;
            std::set_union(bds[x].clique.begin(), bds[x].clique.end(), bds[y].clique.begin(),
                           bds[y].clique.end(), std::back_inserter(cover));
            bool all = true;
            for (const auto& c : cliques)
                if (!std::includes(cover.begin(), cover.end(), c.begin(), c.end())) {
                    all = false;
                    break;
                }
            if (all) return true;
        }
    return false;
}

} // namespace mbk
