#include "mbk/oracle.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace mbk {
namespace oracle {

namespace {

// Marginal code of every cell for every facet (mixed radix over facet vars).
std::vector<std::vector<std::uint32_t>> facet_codes(const ModelSpec& model, std::size_t n) {
    std::vector<std::vector<std::uint32_t>> code(model.facets.size(),
                                                 std::vector<std::uint32_t>(n));
    for (std::size_t idx = 0; idx < n; ++idx) {
        Cell cell = cell_from_index(model, idx);
        for (std::size_t j = 0; j < model.facets.size(); ++j) {
            std::uint32_t c = 0;
            for (int v : model.facets[j])
                c = c * static_cast<std::uint32_t>(model.levels[v]) +
                    static_cast<std::uint32_t>(cell[v]);
            code[j][idx] = c;
        }
    }
    return code;
}

std::size_t facet_cell_count(const ModelSpec& model, std::size_t j) {
    std::size_t n = 1;
    for (int v : model.facets[j]) n *= static_cast<std::size_t>(model.levels[v]);
    return n;
}

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
}

} // namespace

std::vector<Table> enumerate_fiber_bruteforce(const ModelSpec& model, const MarginalVector& b,
                                              const Caps& caps) {
    const std::size_t n = model.num_cells();
    if (n > caps.max_cells) fail(Errc::TooLarge, "cell lattice exceeds the oracle cap");
    if (b.degree > caps.max_degree) fail(Errc::TooLarge, "degree exceeds the oracle cap");
    if (b.facet_marginals.size() != model.facets.size())
        fail(Errc::ModelInvalid, "marginal vector does not match model facets");

    auto code = facet_codes(model, n);
    std::vector<std::vector<Count>> remaining(model.facets.size());
    for (std::size_t j = 0; j < model.facets.size(); ++j) {
        remaining[j].assign(facet_cell_count(model, j), 0);
        for (const auto& [c, cnt] : b.facet_marginals[j]) {
            if (c.size() != model.facets[j].size())
                fail(Errc::ModelInvalid, "marginal cell arity mismatch");
            std::uint32_t mc = 0;
            for (std::size_t k = 0; k < c.size(); ++k) {
                int v = model.facets[j][k];
                if (c[k] < 0 || c[k] >= model.levels[v])
                    fail(Errc::ModelInvalid, "marginal cell out of range");
                mc = mc * static_cast<std::uint32_t>(model.levels[v]) +
                     static_cast<std::uint32_t>(c[k]);
            }
            remaining[j][mc] += cnt;
        }
    }

    std::vector<Table> out;
    std::vector<Count> placed_at(n, 0);
    std::size_t visited = 0;

    auto rec = [&](auto&& self, std::size_t idx, Count placed) -> void {
        if (++visited > caps.max_tables) fail(Errc::TooLarge, "fiber enumeration too large");
        if (idx == n) {
            if (placed == b.degree) {
                Table t;
                for (std::size_t i = 0; i < n; ++i)
                    if (placed_at[i] > 0) t.add(cell_from_index(model, i), placed_at[i]);
                out.push_back(std::move(t));
            }
            return;
        }
        Count room = b.degree - placed;
        for (std::size_t j = 0; j < model.facets.size() && room > 0; ++j)
            room = std::min(room, remaining[j][code[j][idx]]);
        for (Count k = 0; k <= room; ++k) {
            if (k > 0) {
                placed_at[idx] = k;
                for (std::size_t j = 0; j < model.facets.size(); ++j)
                    remaining[j][code[j][idx]] -= 1;
            }
            self(self, idx + 1, placed + k);
        }
        if (room > 0) {
            for (std::size_t j = 0; j < model.facets.size(); ++j)
                remaining[j][code[j][idx]] += room;
            placed_at[idx] = 0;
        }
    };
    rec(rec, 0, 0);
    std::sort(out.begin(), out.end());
    return out;
}

void for_each_fiber_of_degree(const ModelSpec& model, Count degree, const Caps& caps,
                              const std::function<bool(const std::vector<Table>&)>& sink) {
    const std::size_t n = model.num_cells();
    if (n > caps.max_cells) fail(Errc::TooLarge, "cell lattice exceeds the oracle cap");
    if (degree > caps.max_degree) fail(Errc::TooLarge, "degree exceeds the oracle cap");
    if (degree < 0) fail(Errc::ModelInvalid, "negative degree");

    // C(n + d - 1, d) tables in total; refuse runaway enumerations upfront.
    long double estimate = 1.0L;
    for (Count k = 0; k < degree; ++k)
        estimate *= static_cast<long double>(n + static_cast<std::size_t>(degree) - 1 -
                                             static_cast<std::size_t>(k)) /
                    static_cast<long double>(degree - k);
    if (estimate > static_cast<long double>(caps.max_tables))
        fail(Errc::TooLarge, "too many tables at this degree");

    auto code = facet_codes(model, n);
    const std::size_t d = static_cast<std::size_t>(degree);

    // Tables as non-decreasing multisets of cell indices, d entries each.
    std::vector<std::uint32_t> flat;
    std::vector<std::uint32_t> current(d);
    auto gen = [&](auto&& self, std::size_t pos, std::uint32_t from) -> void {
        if (pos == d) {
            flat.insert(flat.end(), current.begin(), current.end());
            return;
        }
        for (std::uint32_t c = from; c < n; ++c) {
            current[pos] = c;
            self(self, pos + 1, c);
        }
    };
    gen(gen, 0, 0);

    const std::size_t count = d == 0 ? 0 : flat.size() / d;
    struct Entry {
        std::uint64_t hash;
        std::uint32_t idx;
    };
    std::vector<Entry> entries(count);
    std::vector<std::uint32_t> codes(d);
    for (std::size_t t = 0; t < count; ++t) {
        std::uint64_t h = 0;
        for (std::size_t j = 0; j < model.facets.size(); ++j) {
            for (std::size_t k = 0; k < d; ++k) codes[k] = code[j][flat[t * d + k]];
            std::sort(codes.begin(), codes.end());
            std::uint64_t hj = 0x9e3779b97f4a7c15ULL * (j + 1);
            for (std::uint32_t c : codes) hj = mix64(hj ^ c);
            h = mix64(h ^ hj);
        }
        entries[t] = {h, static_cast<std::uint32_t>(t)};
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.hash != b.hash) return a.hash < b.hash;
        return a.idx < b.idx;
    });

    auto exact_key = [&](std::uint32_t t) {
        std::vector<std::uint32_t> key;
        key.reserve(model.facets.size() * d);
        for (std::size_t j = 0; j < model.facets.size(); ++j) {
            std::size_t base = key.size();
            for (std::size_t k = 0; k < d; ++k) key.push_back(code[j][flat[t * d + k]]);
            std::sort(key.begin() + base, key.end());
        }
        return key;
    };
    auto materialize = [&](const std::vector<std::uint32_t>& idxs) {
        std::vector<Table> group;
        group.reserve(idxs.size());
        for (std::uint32_t t : idxs) {
            Table tab;
            for (std::size_t k = 0; k < d; ++k)
                tab.add(cell_from_index(model, flat[t * d + k]), 1);
            group.push_back(std::move(tab));
        }
        std::sort(group.begin(), group.end());
        return group;
    };

    for (std::size_t lo = 0; lo < entries.size();) {
        std::size_t hi = lo;
        while (hi < entries.size() && entries[hi].hash == entries[lo].hash) ++hi;
        if (hi - lo == 1) {
            if (!sink(materialize({entries[lo].idx}))) return;
        } else {
            std::map<std::vector<std::uint32_t>, std::vector<std::uint32_t>> split;
            for (std::size_t k = lo; k < hi; ++k)
                split[exact_key(entries[k].idx)].push_back(entries[k].idx);
            for (const auto& [key, idxs] : split)
                if (!sink(materialize(idxs))) return;
        }
        lo = hi;
    }
}

std::vector<std::vector<Table>> fibers_of_degree(const ModelSpec& model, Count degree,
                                                 const Caps& caps) {
    std::vector<std::vector<Table>> out;
    for_each_fiber_of_degree(model, degree, caps, [&](const std::vector<Table>& fiber) {
        out.push_back(fiber);
        return true;
    });
    return out;
}

Connectivity fiber_graph_connected(const std::vector<Table>& members,
                                   const std::vector<Move>& moves) {
    std::map<Table, int> index;
    for (std::size_t i = 0; i < members.size(); ++i)
        index.emplace(members[i], static_cast<int>(i));

    std::vector<int> parent(members.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](auto&& self, int x) -> int {
        return parent[x] == x ? x : parent[x] = self(self, parent[x]);
    };

    for (std::size_t i = 0; i < members.size(); ++i)
        for (const Move& z : moves)
            for (int sign : {1, -1})
                if (auto next = try_apply_move(members[i], z, sign)) {
                    auto it = index.find(*next);
                    if (it != index.end()) {
                        int a = find(find, static_cast<int>(i));
                        int b = find(find, it->second);
                        if (a != b) parent[b] = a;
                    }
                }

    std::map<int, std::vector<int>> groups;
    for (std::size_t i = 0; i < members.size(); ++i)
        groups[find(find, static_cast<int>(i))].push_back(static_cast<int>(i));
    Connectivity out;
    for (auto& [root, g] : groups) out.components.push_back(std::move(g));
    out.connected = out.components.size() <= 1;
    return out;
}

int induced_component_scan(const Graph& g, int max_parts) {
    if (g.n > 16) fail(Errc::TooLarge, "induced component scan limited to 16 vertices");
    int best = 0;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << g.n); ++mask) {
        best = std::max(best, induced_component_count(g, mask));
        if (best >= max_parts) return best;
    }
    return best;
}

} // namespace oracle
} // namespace mbk
