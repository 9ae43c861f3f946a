#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "helpers.hpp"
#include "mbk/fiber2.hpp"
#include "mbk/oracle.hpp"

using namespace mbk;
using test::model;
using test::tbl;

namespace {

MarginalVector b_of(const ModelSpec& m, const Table& t) { return compute_b(m, t); }

std::set<Table> member_tables(const Fiber& f) {
    std::set<Table> out;
    for (const auto& d : f.members) out.insert(d.to_table());
    return out;
}

// Enumerates every degree-two marginal vector assembled facet by facet
// (independent of any fiber machinery), keeping the consistent ones.
std::vector<MarginalVector> consistent_degree2_bs(const ModelSpec& m) {
    std::vector<std::vector<std::map<Cell, Count>>> options(m.facets.size());
    for (std::size_t j = 0; j < m.facets.size(); ++j) {
        std::vector<Cell> cells{Cell{}};
        for (int v : m.facets[j]) {
            std::vector<Cell> next;
            for (const Cell& prefix : cells)
                for (Level l = 0; l < m.levels[v]; ++l) {
                    Cell c = prefix;
                    c.push_back(l);
                    next.push_back(std::move(c));
                }
            cells = std::move(next);
        }
        for (std::size_t a = 0; a < cells.size(); ++a) {
            options[j].push_back({{cells[a], 2}});
            for (std::size_t b = a + 1; b < cells.size(); ++b)
                options[j].push_back({{cells[a], 1}, {cells[b], 1}});
        }
    }
    std::vector<MarginalVector> out;
    MarginalVector cur;
    cur.degree = 2;
    cur.facet_marginals.resize(m.facets.size());
    auto rec = [&](auto&& self, std::size_t j) -> void {
        if (j == m.facets.size()) {
            if (is_consistent(m, cur)) out.push_back(cur);
            return;
        }
        for (const auto& opt : options[j]) {
            cur.facet_marginals[j] = opt;
            self(self, j + 1);
        }
    };
    rec(rec, 0);
    return out;
}

} // namespace

TEST_CASE("classify_variables") {
    auto m3 = test::independence(3);
    auto c1 = classify_variables(m3, b_of(m3, tbl({{{0, 0, 0}, 1}, {{1, 1, 1}, 1}})));
    CHECK(c1.nondegenerate_vars() == std::vector<int>{0, 1, 2});

    auto c2 = classify_variables(m3, b_of(m3, tbl({{{0, 0, 0}, 1}, {{1, 1, 0}, 1}})));
    CHECK(c2.nondegenerate_vars() == std::vector<int>{0, 1});
    CHECK(c2.levels[2] == std::pair<Level, Level>{0, 0});

    auto c3 = classify_variables(m3, b_of(m3, tbl({{{1, 0, 1}, 2}})));
    CHECK(c3.nondegenerate_vars().empty());
    CHECK(c3.levels[0] == std::pair<Level, Level>{1, 1});

    CHECK_THROWS_AS(classify_variables(m3, b_of(m3, tbl({{{0, 0, 0}, 3}}))), DomainError);

    MarginalVector bad;
    bad.degree = 2;
    bad.facet_marginals = {{{Cell{0}, 1}, {Cell{1}, 1}}, {{Cell{0}, 2}}, {{Cell{0}, 2}}};
    CHECK_NOTHROW(classify_variables(m3, bad));
    bad.facet_marginals[0] = {{Cell{0}, 1}};
    CHECK_THROWS_AS(classify_variables(m3, bad), DomainError);
}

TEST_CASE("component patterns") {
    auto m3 = test::independence(3);
    auto cps = component_patterns(m3, b_of(m3, tbl({{{0, 0, 0}, 1}, {{1, 1, 1}, 1}})));
    REQUIRE(cps.size() == 3);
    for (int d = 0; d < 3; ++d) {
        CHECK(cps[d].vars == std::vector<int>{d});
        CHECK(cps[d].cell_a == Cell{0});
        CHECK(cps[d].cell_b == Cell{1});
    }

    auto msat = model({2, 2}, {{0, 1}});
    auto cps2 = component_patterns(msat, b_of(msat, tbl({{{0, 0}, 1}, {{1, 1}, 1}})));
    REQUIRE(cps2.size() == 1);
    CHECK(cps2[0].vars == std::vector<int>{0, 1});
    CHECK(cps2[0].cell_a == Cell{0, 0});
    CHECK(cps2[0].cell_b == Cell{1, 1});

    auto chain = model({2, 2, 2}, {{0, 1}, {1, 2}});
    auto cps3 = component_patterns(chain, b_of(chain, tbl({{{0, 0, 0}, 1}, {{1, 1, 1}, 1}})));
    REQUIRE(cps3.size() == 1);
    CHECK(cps3[0].vars == std::vector<int>{0, 1, 2});
    CHECK(cps3[0].cell_a == Cell{0, 0, 0});
    CHECK(cps3[0].cell_b == Cell{1, 1, 1});

    // Contradictory pairings across facets are rejected.
    auto wheel = model({2, 2, 2}, {{0, 1}, {1, 2}, {0, 2}});
    MarginalVector bw;
    bw.degree = 2;
    bw.facet_marginals = {{{Cell{0, 0}, 1}, {Cell{1, 1}, 1}},
                          {{Cell{0, 0}, 1}, {Cell{1, 1}, 1}},
                          {{Cell{0, 1}, 1}, {Cell{1, 0}, 1}}};
    CHECK_THROWS_AS(component_patterns(wheel, bw), DomainError);
}

TEST_CASE("fiber size and enumeration against the standardized list") {
    auto m3 = test::independence(3);
    auto fib = enumerate_fiber(m3, b_of(m3, tbl({{{0, 0, 0}, 1}, {{1, 1, 1}, 1}})));
    CHECK(fiber_size(fib.key) == 4);
    REQUIRE(fib.members.size() == 4);
    CHECK(fib.members[0] == DegreeTwoTable({0, 0, 0}, {1, 1, 1}));
    CHECK(fib.members[1] == DegreeTwoTable({0, 0, 1}, {1, 1, 0}));
    CHECK(fib.members[2] == DegreeTwoTable({0, 1, 0}, {1, 0, 1}));
    CHECK(fib.members[3] == DegreeTwoTable({0, 1, 1}, {1, 0, 0}));

    auto m4 = test::independence(4);
    auto fib4 = enumerate_fiber(m4, b_of(m4, tbl({{{0, 0, 0, 0}, 1}, {{1, 1, 1, 1}, 1}})));
    CHECK(fiber_size(fib4.key) == 8);
    CHECK(fib4.members.size() == 8);

    auto msat = model({2, 2}, {{0, 1}});
    auto fs = enumerate_fiber(msat, b_of(msat, tbl({{{0, 1}, 1}, {{1, 0}, 1}})));
    CHECK(fiber_size(fs.key) == 1);
    REQUIRE(fs.members.size() == 1);
    CHECK(fs.members[0] == DegreeTwoTable({0, 1}, {1, 0}));

    // Doubled cell: every variable degenerate.
    auto fd = enumerate_fiber(m3, b_of(m3, tbl({{{1, 0, 1}, 2}})));
    CHECK(fiber_size(fd.key) == 1);
    CHECK(fd.members[0] == DegreeTwoTable({1, 0, 1}, {1, 0, 1}));
}

TEST_CASE("fiber enumeration agrees with brute force on random models") {
    std::mt19937_64 rng(57);
    for (int rep = 0; rep < 120; ++rep) {
        auto m = test::random_model(rng, 4);
        Cell a = test::random_cell(rng, m);
        Cell b = test::random_cell(rng, m);
        Table t;
        t.add(a, 1);
        t.add(b, 1);
        MarginalVector mv = compute_b(m, t);
        auto fib = enumerate_fiber(m, mv);
        auto brute = oracle::enumerate_fiber_bruteforce(m, mv);
        CHECK(member_tables(fib) == std::set<Table>(brute.begin(), brute.end()));
        CHECK(static_cast<Count>(brute.size()) == fiber_size(fib.key));
    }
}

TEST_CASE("every consistent degree-two b is realized (nonemptiness replay)") {
    for (const auto& m : {model({2, 2, 2}, {{0, 1}, {1, 2}}),
                          model({2, 3}, {{0}, {1}}),
                          model({2, 2, 2}, {{0}, {1}, {2}})}) {
        for (const auto& b : consistent_degree2_bs(m)) {
            auto members = oracle::enumerate_fiber_bruteforce(m, b);
            CHECK(!members.empty());
            auto fib = enumerate_fiber(m, b);
            CHECK(static_cast<Count>(members.size()) == fiber_size(fib.key));
        }
    }
}

TEST_CASE("representative fibers") {
    auto m3 = test::independence(3);
    auto reps = enumerate_representative_fibers(m3);
    REQUIRE(reps.size() == 4);
    std::set<std::vector<int>> deltas;
    for (const auto& k : reps) deltas.insert(k.cls.nondegenerate_vars());
    CHECK(deltas == std::set<std::vector<int>>{{0, 1, 2}, {0, 1}, {1, 2}, {0, 2}});

    CHECK(enumerate_representative_fibers(model({2, 2}, {{0, 1}})).empty());

    auto chain = model({2, 2, 2}, {{0, 1}, {1, 2}});
    auto creps = enumerate_representative_fibers(chain);
    REQUIRE(creps.size() == 1);
    CHECK(creps[0].cls.nondegenerate_vars() == std::vector<int>{0, 2});
    CHECK(creps[0].component_count() == 2);
}

TEST_CASE("degree-two fiber scan") {
    auto m3 = test::independence(3);
    auto fibers = enumerate_all_degree2_fibers(m3);
    CHECK(fibers.size() == 7);
    std::multiset<std::vector<int>> deltas;
    Count four_elem = 0;
    for (const auto& f : fibers) {
        deltas.insert(f.key.cls.nondegenerate_vars());
        if (f.members.size() == 4) ++four_elem;
        CHECK(static_cast<Count>(f.members.size()) == fiber_size(f.key));
    }
    CHECK(four_elem == 1);
    CHECK(deltas == std::multiset<std::vector<int>>{
                        {0, 1, 2}, {0, 1}, {0, 1}, {1, 2}, {1, 2}, {0, 2}, {0, 2}});

    CHECK(enumerate_all_degree2_fibers(model({2, 2}, {{0, 1}})).empty());

    CHECK_THROWS_AS(enumerate_all_degree2_fibers(test::independence(13), 4096), DomainError);
}

TEST_CASE("fiber scan counts match the representative-class crosscheck") {
    std::mt19937_64 rng(61);
    auto class_size = [](const ModelSpec& m, const FiberKey& key) {
        Count n = 1;
        for (int d = 0; d < m.num_vars(); ++d) {
            Count I = m.levels[d];
            if (key.cls.nondegenerate[d]) n *= I * (I - 1) / 2;
            else n *= I;
        }
        for (const auto& cp : key.components)
            if (cp.vars.size() >= 2) n *= Count{1} << (cp.vars.size() - 1);
        return n;
    };
    for (int rep = 0; rep < 40; ++rep) {
        auto m = test::random_model(rng, 4);
        if (m.num_cells() > 256) continue;
        Count expected = 0;
        for (const auto& key : enumerate_representative_fibers(m)) expected += class_size(m, key);
        CHECK(static_cast<Count>(enumerate_all_degree2_fibers(m, 4096).size()) == expected);
    }
}

TEST_CASE("pair-scan fiber sizes are powers of two") {
    std::mt19937_64 rng(67);
    for (int rep = 0; rep < 40; ++rep) {
        auto m = test::random_model(rng, 5);
        if (m.num_cells() > 512) continue;
        for (const auto& stat : degree2_fiber_stats(m))
            CHECK(stat.size == (Count{1} << (stat.components - 1)));
    }
}

TEST_CASE("level relabeling maps fibers to fibers of equal size") {
    std::mt19937_64 rng(71);
    for (int rep = 0; rep < 25; ++rep) {
        auto m = test::random_model(rng, 4, {2, 3});
        if (m.num_cells() > 256) continue;
        int var = static_cast<int>(rng() % static_cast<unsigned>(m.num_vars()));
        std::vector<Level> perm(m.levels[var]);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);

        std::multiset<std::size_t> before;
        std::map<MarginalVector, std::size_t> regrouped;
        for (const auto& f : enumerate_all_degree2_fibers(m, 4096)) {
            before.insert(f.members.size());
            for (const auto& d : f.members) {
                Cell lo = d.lo, hi = d.hi;
                lo[var] = perm[lo[var]];
                hi[var] = perm[hi[var]];
                Table t;
                t.add(lo, 1);
                t.add(hi, 1);
                ++regrouped[compute_b(m, t)];
            }
        }
        std::multiset<std::size_t> after;
        for (const auto& [b, n] : regrouped) after.insert(n);
        CHECK(before == after);
    }
}

TEST_CASE("uniqueness predicates") {
    CHECK(minimal_bases_nonunique(test::independence(3)));
    CHECK_FALSE(minimal_bases_nonunique(model({2, 2, 2, 2}, {{0, 1}, {1, 2}, {2, 3}})));
    CHECK_FALSE(minimal_bases_nonunique(model({2, 2, 2}, {{0, 1}, {1, 2}})));
    CHECK_FALSE(minimal_bases_nonunique(model({3, 3}, {{0}, {1}})));

    auto g3 = independence_graph(test::independence(3));
    CHECK_FALSE(unique_minimal_basis_boundary_criterion(g3));
    auto path = independence_graph(model({2, 2, 2, 2}, {{0, 1}, {1, 2}, {2, 3}}));
    CHECK(unique_minimal_basis_boundary_criterion(path));

    auto triple = independent_triple(independence_graph(test::independence(3)));
    REQUIRE(triple.has_value());
    CHECK(*triple == std::array<int, 3>{0, 1, 2});
    CHECK_FALSE(independent_triple(path).has_value());
}
