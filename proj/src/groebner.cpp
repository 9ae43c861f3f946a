#include "mbk/groebner.hpp"

namespace mbk {

namespace {

bool divides(const Table& part, const Table& t) {
    for (const auto& [c, n] : part.cells())
        if (t.at(c) < n) return false;
    return true;
}

} // namespace

MarkovBasis groebner_basis(const ModelSpec& model, std::size_t max_cells) {
    if (!is_chordal(independence_graph(model)))
        fail(Errc::NotDecomposable, "Groebner construction needs a decomposable model");
    MarkovBasis mb = minimal_basis(model, TreePolicy::StarAtMin, 0, max_cells);
    mb.provenance = Provenance::Groebner;
    return mb;
}

Table reduce_to_normal_form(const Table& t, const std::vector<Move>& basis,
                            const TermOrder& ord) {
    Table cur = t;
    // Each applied step strictly descends in a well-order, so the loop
    // terminates; the bound is a safety net against comparator bugs.
    std::size_t steps = 0;
    const std::size_t step_cap = 1'000'000;
    bool progressed = true;
    while (progressed) {
        progressed = false;
        for (const Move& z : basis) {
            for (int sign : {-1, 1}) {
                const Table& head = sign < 0 ? z.pos() : z.neg();
                if (!divides(head, cur)) continue;
                Table next = apply_move(cur, z, sign);
                if (ord.compare(cur, next) == std::strong_ordering::greater) {
                    cur = std::move(next);
                    if (++steps > step_cap)
                        fail(Errc::TooLarge, "reduction did not terminate within the step cap");
                    progressed = true;
                    break;
                }
            }
            if (progressed) break;
        }
    }
    return cur;
}

GroebnerCheck is_groebner_empirically(const ModelSpec& model, const std::vector<Move>& basis,
                                      const TermOrder& ord, Count degree_cap,
                                      const oracle::Caps& caps) {
    GroebnerCheck out;
    out.ok = true;
    for (Count d = 2; d <= degree_cap && out.ok; ++d) {
        std::size_t count = 0;
        oracle::for_each_fiber_of_degree(model, d, caps, [&](const std::vector<Table>& members) {
            ++count;
            Table target = fiber_minimum(members, ord);
            for (const Table& t : members)
                if (reduce_to_normal_form(t, basis, ord) != target) {
                    out.ok = false;
                    out.counterexample = t;
                    return false;
                }
            return true;
        });
        out.fibers_per_degree.push_back(count);
    }
    return out;
}

bool is_reduced(const std::vector<Move>& basis, const TermOrder& ord) {
    auto leading = [&](const Move& z) -> const Table& {
        return ord.greater(z.pos(), z.neg()) ? z.pos() : z.neg();
    };
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j) {
            if (i == j) continue;
            const Table& other = leading(basis[j]);
            if (divides(other, basis[i].pos()) || divides(other, basis[i].neg())) return false;
        }
    return true;
}

} // namespace mbk
