#include "mbk/bases.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "mbk/term_order.hpp"

namespace mbk {

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::MinimalStar: return "minimal-star";
        case Provenance::MinimalPath: return "minimal-path";
        case Provenance::MinimalRandom: return "minimal-random";
        case Provenance::Dobra: return "dobra";
        case Provenance::Invariant: return "invariant";
        case Provenance::Doubling: return "doubling";
        case Provenance::Groebner: return "groebner";
    }
    return "unknown";
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Flip the realized level pair of every variable in the flagged components
// (bit l-2 stands for component l; component 1 never flips).
DegreeTwoTable apply_component_flips(const FiberKey& key, const DegreeTwoTable& t,
                                     std::uint64_t flip_bits) {
    Cell lo = t.lo, hi = t.hi;
    const int c = key.component_count();
    for (int l = 1; l < c; ++l) {
        if (!((flip_bits >> (l - 1)) & 1u)) continue;
        for (int d : key.components[l].vars) {
            auto [a, b] = key.cls.levels[d];
            for (Cell* cell : {&lo, &hi}) (*cell)[d] = (*cell)[d] == a ? b : a;
        }
    }
    return DegreeTwoTable(std::move(lo), std::move(hi));
}

void sort_with_fibers(MarkovBasis& mb) {
    std::vector<std::size_t> perm(mb.moves.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(),
              [&](std::size_t a, std::size_t b) { return mb.moves[a] < mb.moves[b]; });
    std::vector<Move> moves;
    std::vector<int> annot;
    moves.reserve(perm.size());
    for (std::size_t i : perm) {
        moves.push_back(std::move(mb.moves[i]));
        if (!mb.move_fiber.empty()) annot.push_back(mb.move_fiber[i]);
    }
    mb.moves = std::move(moves);
    mb.move_fiber = std::move(annot);
}

std::vector<Table> member_tables(const Fiber& fiber) {
    std::vector<Table> out;
    out.reserve(fiber.members.size());
    for (const auto& m : fiber.members) out.push_back(m.to_table());
    return out;
}

} // namespace

MarkovBasis minimal_basis(const ModelSpec& model, TreePolicy policy, std::uint64_t seed,
                          std::size_t max_cells) {
    MarkovBasis mb;
    mb.provenance = policy == TreePolicy::StarAtMin  ? Provenance::MinimalStar
                    : policy == TreePolicy::Path     ? Provenance::MinimalPath
                                                     : Provenance::MinimalRandom;
    mb.degree2_only = !is_chordal(independence_graph(model));

    TermOrder ord = default_term_order(model);
    auto fibers = enumerate_all_degree2_fibers(model, max_cells);

    for (std::size_t fi = 0; fi < fibers.size(); ++fi) {
        auto members = member_tables(fibers[fi]);
        std::vector<std::pair<int, int>> edges;
        if (policy == TreePolicy::StarAtMin) {
            Table center = fiber_minimum(members, ord);
            int ci = 0;
            while (members[ci] != center) ++ci;
            for (int i = 0; i < static_cast<int>(members.size()); ++i)
                if (i != ci) edges.emplace_back(i, ci);
        } else if (policy == TreePolicy::Path) {
            std::vector<int> idx(members.size());
            std::iota(idx.begin(), idx.end(), 0);
            std::sort(idx.begin(), idx.end(), [&](int a, int b) {
                return ord.compare(members[a], members[b]) == std::strong_ordering::less;
            });
            for (std::size_t i = 1; i < idx.size(); ++i) edges.emplace_back(idx[i - 1], idx[i]);
        } else {
            std::mt19937_64 rng(splitmix64(seed ^ (0xabcd0001ULL + fi)));
            std::vector<int> idx(members.size());
            std::iota(idx.begin(), idx.end(), 0);
            std::shuffle(idx.begin(), idx.end(), rng);
            for (std::size_t i = 1; i < idx.size(); ++i) {
                std::uniform_int_distribution<std::size_t> pick(0, i - 1);
                edges.emplace_back(idx[i], idx[pick(rng)]);
            }
        }
        mb.fibers.push_back(fibers[fi].key.b);
        for (auto [a, b] : edges) {
            mb.moves.push_back(move_from_tables(model, members[a], members[b]));
            mb.move_fiber.push_back(static_cast<int>(fi));
        }
    }
    sort_with_fibers(mb);
    return mb;
}

namespace {

// All level assignments over `vars`, in mixed-radix order.
std::vector<Cell> assignments(const ModelSpec& model, const std::vector<int>& vars) {
    std::vector<Cell> out{Cell{}};
    for (int v : vars) {
        std::vector<Cell> next;
        next.reserve(out.size() * static_cast<std::size_t>(model.levels[v]));
        for (const Cell& prefix : out)
            for (Level l = 0; l < model.levels[v]; ++l) {
                Cell c = prefix;
                c.push_back(l);
                next.push_back(std::move(c));
            }
        out = std::move(next);
    }
    return out;
}

Cell combine(int m, const std::vector<int>& va, const Cell& ca, const std::vector<int>& vb,
             const Cell& cb, const std::vector<int>& vc, const Cell& cc) {
    Cell out(m, 0);
    for (std::size_t k = 0; k < va.size(); ++k) out[va[k]] = ca[k];
    for (std::size_t k = 0; k < vb.size(); ++k) out[vb[k]] = cb[k];
    for (std::size_t k = 0; k < vc.size(); ++k) out[vc[k]] = cc[k];
    return out;
}

} // namespace

MarkovBasis dobra_basis(const ModelSpec& model, const CliqueTree& tree) {
    Graph g = independence_graph(model);
    if (!is_chordal(g)) fail(Errc::NotDecomposable, "model is not decomposable");
    {
        auto expect = maximal_cliques(g);
        auto got = tree.cliques;
        std::sort(got.begin(), got.end());
        if (got != expect) fail(Errc::ModelInvalid, "clique tree does not match the model");
    }
    const int m = model.num_vars();
    const int k = static_cast<int>(tree.cliques.size());

    std::vector<std::vector<int>> nbr(k);
    for (std::size_t e = 0; e < tree.edges.size(); ++e) {
        nbr[tree.edges[e].first].push_back(tree.edges[e].second);
        nbr[tree.edges[e].second].push_back(tree.edges[e].first);
    }

    std::set<Move> moves;
    for (std::size_t e = 0; e < tree.edges.size(); ++e) {
        auto [a, b] = tree.edges[e];
        // Cliques on the a-side of the removed edge.
        std::vector<bool> side(k, false);
        side[a] = true;
        std::vector<int> stack{a};
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : nbr[u])
                if (!side[v] && !(u == a && v == b) && !(u == b && v == a)) {
                    side[v] = true;
                    stack.push_back(v);
                }
        }
        std::vector<bool> in_ve(m, false), in_vpe(m, false);
        for (int i = 0; i < k; ++i)
            for (int v : tree.cliques[i]) (side[i] ? in_ve : in_vpe)[v] = true;
        const auto& sep = tree.separators[e];
        std::vector<int> V, Vp;
        for (int v = 0; v < m; ++v) {
            bool s = std::binary_search(sep.begin(), sep.end(), v);
            if (in_ve[v] && !s) V.push_back(v);
            if (in_vpe[v] && !s) Vp.push_back(v);
        }

        auto IV = assignments(model, V);
        auto IVp = assignments(model, Vp);
        auto IS = assignments(model, sep);
        double work = static_cast<double>(IV.size()) * static_cast<double>(IV.size()) *
                      static_cast<double>(IVp.size()) * static_cast<double>(IVp.size()) *
                      static_cast<double>(IS.size());
        if (work > 5e7) fail(Errc::TooLarge, "Dobra enumeration too large");

        for (std::size_t i1 = 0; i1 < IV.size(); ++i1)
            for (std::size_t j1 = i1 + 1; j1 < IV.size(); ++j1)
                for (std::size_t i2 = 0; i2 < IVp.size(); ++i2)
                    for (std::size_t j2 = i2 + 1; j2 < IVp.size(); ++j2)
                        for (const Cell& is : IS) {
                            Table pos, neg;
                            pos.add(combine(m, V, IV[i1], Vp, IVp[i2], sep, is), 1);
                            pos.add(combine(m, V, IV[j1], Vp, IVp[j2], sep, is), 1);
                            neg.add(combine(m, V, IV[i1], Vp, IVp[j2], sep, is), 1);
                            neg.add(combine(m, V, IV[j1], Vp, IVp[i2], sep, is), 1);
                            moves.emplace(std::move(pos), std::move(neg));
                        }
    }

    MarkovBasis mb;
    mb.provenance = Provenance::Dobra;
    mb.moves.assign(moves.begin(), moves.end());
    mb.move_fiber.assign(mb.moves.size(), -1);
    return mb;
}

DobraMinimality dobra_is_minimal(const ModelSpec& model) {
    Graph g = independence_graph(model);
    if (!is_chordal(g)) fail(Errc::NotDecomposable, "model is not decomposable");
    DobraMinimality out;
    auto triple = independent_triple(g);
    if (!triple) {
        out.minimal = true;
        return out;
    }
    const int m = model.num_vars();
    Cell lo(m, 0), hi(m, 0);
    for (int v : *triple) hi[v] = 1;
    Table t;
    t.add(lo, 1);
    t.add(hi, 1);
    MarginalVector b = compute_b(model, t);
    MarkovBasis mt = dobra_basis(model, clique_tree(g));
    auto restricted = restrict_to_fiber(model, mt.moves, b);
    out.minimal = false;
    out.witness_fiber = b;
    out.witness_fiber_size = fiber_size(fiber_key(model, b));
    out.witness_move_count = restricted.size();
    return out;
}

Gf2Basis gf2_default_basis(int components, Gf2Flavor flavor) {
    if (components < 2) return {};
    const int len = components - 1;
    Gf2Basis out;
    for (int k = 2; k <= components; ++k) {
        Gf2Vector v;
        v.len = len;
        if (flavor == Gf2Flavor::Staircase) {
            for (int bit = k - 2; bit <= len - 1; ++bit) v.bits |= std::uint64_t{1} << bit;
        } else {
            v.bits = std::uint64_t{1} << (k - 2);
        }
        out.push_back(v);
    }
    return out;
}

bool gf2_is_basis(const Gf2Basis& basis) {
    if (basis.empty()) return true;
    const int len = basis.front().len;
    if (static_cast<int>(basis.size()) != len) return false;
    std::vector<std::uint64_t> rows;
    for (const auto& v : basis) {
        if (v.len != len) return false;
        std::uint64_t r = v.bits;
        for (std::uint64_t p : rows) {
            std::uint64_t low = p & (~p + 1);
            if (r & low) r ^= p;
        }
        if (!r) return false;
        rows.push_back(r);
    }
    return true;
}

namespace {

// Closure of a move under per-variable level permutations, modulo sign.
std::vector<Move> expand_orbit(const ModelSpec& model, const Move& z0) {
    std::set<Move> seen{z0};
    std::vector<Move> queue{z0};
    auto permute = [&](const Move& z, int var, Level x, Level y) {
        Table parts[2];
        const Table* src[2] = {&z.pos(), &z.neg()};
        for (int p = 0; p < 2; ++p)
            for (const auto& [c, n] : src[p]->cells()) {
                Cell cc = c;
                if (cc[var] == x) cc[var] = y;
                else if (cc[var] == y) cc[var] = x;
                parts[p].add(cc, n);
            }
        return Move(std::move(parts[0]), std::move(parts[1]));
    };
    while (!queue.empty()) {
        Move z = std::move(queue.back());
        queue.pop_back();
        for (int d = 0; d < model.num_vars(); ++d)
            for (Level l = 0; l + 1 < model.levels[d]; ++l) {
                Move next = permute(z, d, l, l + 1);
                if (seen.insert(next).second) queue.push_back(next);
            }
    }
    return std::vector<Move>(seen.begin(), seen.end());
}

DegreeTwoTable member_from_flips(const FiberKey& key, std::uint64_t flip_bits, int m) {
    Cell cell1(m), cell2(m);
    for (int d = 0; d < m; ++d)
        if (!key.cls.nondegenerate[d]) cell1[d] = cell2[d] = key.cls.levels[d].first;
    for (int l = 0; l < key.component_count(); ++l) {
        bool flip = l > 0 && ((flip_bits >> (l - 1)) & 1u);
        const auto& cp = key.components[l];
        for (std::size_t k = 0; k < cp.vars.size(); ++k) {
            cell1[cp.vars[k]] = flip ? cp.cell_b[k] : cp.cell_a[k];
            cell2[cp.vars[k]] = flip ? cp.cell_a[k] : cp.cell_b[k];
        }
    }
    return DegreeTwoTable(std::move(cell1), std::move(cell2));
}

} // namespace

MarkovBasis OrbitAnnotatedBasis::flatten() const {
    MarkovBasis mb;
    mb.provenance = Provenance::Invariant;
    mb.degree2_only = degree2_only;
    std::set<Move> all;
    for (const auto& o : orbits) all.insert(o.members.begin(), o.members.end());
    mb.moves.assign(all.begin(), all.end());
    mb.move_fiber.assign(mb.moves.size(), -1);
    return mb;
}

OrbitAnnotatedBasis invariant_basis(const ModelSpec& model, Gf2Flavor flavor) {
    OrbitAnnotatedBasis out;
    out.degree2_only = !is_chordal(independence_graph(model));
    const int m = model.num_vars();
    auto reps = enumerate_representative_fibers(model);
    for (std::size_t fi = 0; fi < reps.size(); ++fi) {
        const FiberKey& key = reps[fi];
        out.fibers.push_back(key.b);
        const int c = key.component_count();
        Gf2Basis vs = gf2_default_basis(c, flavor);
        Table n0 = member_from_flips(key, 0, m).to_table();
        for (const Gf2Vector& v : vs) {
            Table nk = member_from_flips(key, v.bits, m).to_table();
            Move rep = move_from_tables(model, n0, nk);
            out.orbits.push_back(Orbit{rep, expand_orbit(model, rep), static_cast<int>(fi)});
        }
    }
    return out;
}

std::vector<Move> restrict_to_fiber(const ModelSpec& model, const std::vector<Move>& moves,
                                    const MarginalVector& b) {
    std::vector<Move> out;
    for (const Move& z : moves)
        if (compute_b(model, z.pos()) == b) out.push_back(z);
    return out;
}

std::size_t orbit_count_in_fiber(const FiberKey& key, const std::vector<Move>& moves_in_fiber) {
    const int c = key.component_count();
    std::set<Move> remaining(moves_in_fiber.begin(), moves_in_fiber.end());
    std::size_t orbits = 0;
    while (!remaining.empty()) {
        Move z = *remaining.begin();
        ++orbits;
        for (std::uint64_t f = 0; f < (std::uint64_t{1} << std::max(0, c - 1)); ++f) {
            DegreeTwoTable p = apply_component_flips(key, DegreeTwoTable::from_table(z.pos()), f);
            DegreeTwoTable n = apply_component_flips(key, DegreeTwoTable::from_table(z.neg()), f);
            remaining.erase(Move(p.to_table(), n.to_table()));
        }
    }
    return orbits;
}

InvariantMinimality dobra_is_minimal_invariant(const ModelSpec& model, const CliqueTree& tree) {
    InvariantMinimality out;
    out.minimal = tree.cliques.size() <= 2 || tree.num_leaves() == 2;
    if (out.minimal) return out;

    // Witness: simplicial vertices of three endpoint cliques span a fiber
    // where the tree basis exceeds kappa.
    Graph g = independence_graph(model);
    std::vector<int> deg(tree.cliques.size(), 0);
    for (auto [a, b] : tree.edges) {
        ++deg[a];
        ++deg[b];
    }
    std::vector<int> picks;
    for (std::size_t i = 0; i < tree.cliques.size() && picks.size() < 3; ++i) {
        if (deg[i] != 1) continue;
        for (int v : tree.cliques[i]) {
            std::uint64_t nb = g.adj[v];
            bool simplicial = true;
            while (nb && simplicial) {
                int u = std::countr_zero(nb);
                nb &= nb - 1;
                if ((g.adj[v] & ~(std::uint64_t{1} << u)) & ~g.adj[u]) simplicial = false;
            }
            if (simplicial) {
                picks.push_back(v);
                break;
            }
        }
    }
    if (picks.size() < 3) return out; // no witness available

    const int m = model.num_vars();
    Cell lo(m, 0), hi(m, 0);
    for (int v : picks) hi[v] = 1;
    Table t;
    t.add(lo, 1);
    t.add(hi, 1);
    MarginalVector b = compute_b(model, t);
    FiberKey key = fiber_key(model, b);
    auto restricted = restrict_to_fiber(model, dobra_basis(model, tree).moves, b);
    out.witness_fiber = b;
    out.witness_orbits = orbit_count_in_fiber(key, restricted);
    out.witness_kappa = static_cast<std::size_t>(key.component_count() - 1);
    return out;
}

std::vector<Move> doubling_moves(const ModelSpec& model, const Fiber& fiber,
                                 const Gf2Basis& flips) {
    const int c = fiber.key.component_count();
    if (static_cast<int>(flips.size()) != std::max(0, c - 1))
        fail(Errc::NotABasis, "need c(b)-1 group elements");
    for (const auto& v : flips)
        if (v.len != c - 1) fail(Errc::NotABasis, "flip pattern length mismatch");
    if (!gf2_is_basis(flips)) fail(Errc::NotABasis, "flip patterns are GF(2)-dependent");

    std::vector<Move> out;
    if (c < 2) return out;

    std::vector<DegreeTwoTable> n{fiber.members.front()}; // n_1
    for (int k = 2; k <= c; ++k) {
        const Gf2Vector& gk = flips[static_cast<std::size_t>(k - 2)]; // g^{k-1}
        const std::size_t block = std::size_t{1} << (k - 2);
        for (std::size_t l = 0; l < block; ++l) {
            DegreeTwoTable next = apply_component_flips(fiber.key, n[l], gk.bits);
            out.push_back(move_from_tables(model, n[l].to_table(), next.to_table()));
            n.push_back(std::move(next));
        }
    }
    return out;
}

MarkovBasis minimal_basis_from_invariant(const ModelSpec& model, Gf2Flavor flavor,
                                         std::size_t max_cells) {
    MarkovBasis mb;
    mb.provenance = Provenance::Doubling;
    mb.degree2_only = !is_chordal(independence_graph(model));
    auto fibers = enumerate_all_degree2_fibers(model, max_cells);
    for (std::size_t fi = 0; fi < fibers.size(); ++fi) {
        mb.fibers.push_back(fibers[fi].key.b);
        auto moves = doubling_moves(model, fibers[fi],
                                gf2_default_basis(fibers[fi].key.component_count(), flavor));
        for (auto& z : moves) {
            mb.moves.push_back(std::move(z));
            mb.move_fiber.push_back(static_cast<int>(fi));
        }
    }
    sort_with_fibers(mb);
    return mb;
}

BasisCheck is_markov_basis(const ModelSpec& model, const std::vector<Move>& candidate,
                           Count degree_cap, const oracle::Caps& caps) {
    BasisCheck out;
    out.ok = true;
    for (Count d = 2; d <= degree_cap && out.ok; ++d) {
        oracle::for_each_fiber_of_degree(model, d, caps, [&](const std::vector<Table>& members) {
            if (members.size() <= 1) return true;
            auto conn = oracle::fiber_graph_connected(members, candidate);
            if (conn.connected) return true;
            out.ok = false;
            out.witness_b = compute_b(model, members.front());
            out.witness_members = members;
            out.witness_components = conn.components;
            return false;
        });
    }
    return out;
}

} // namespace mbk
