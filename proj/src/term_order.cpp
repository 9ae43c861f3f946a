#include "mbk/term_order.hpp"

#include <algorithm>
#include <numeric>

#include "mbk/chordal.hpp"

namespace mbk {

namespace {

std::size_t dense_index(const std::vector<int>& levels, const Cell& c) {
    std::size_t idx = 0;
    for (std::size_t d = 0; d < levels.size(); ++d)
        idx = idx * static_cast<std::size_t>(levels[d]) + static_cast<std::size_t>(c[d]);
    return idx;
}

} // namespace

bool TermOrder::cell_less(const Cell& a, const Cell& b) const {
    if (explicit_rank)
        return (*explicit_rank)[dense_index(levels, a)] < (*explicit_rank)[dense_index(levels, b)];
    for (int v : var_order) {
        if (a[v] != b[v]) return a[v] < b[v];
    }
    return false;
}

std::strong_ordering TermOrder::compare(const Table& t1, const Table& t2) const {
    if (t1.total() != t2.total())
        fail(Errc::DegreeMismatch, "term order compares equal sample sizes only");

    // Union of supports, ordered by the cell order.
    std::vector<const Cell*> cells;
    cells.reserve(t1.support_size() + t2.support_size());
    for (const auto& [c, n] : t1.cells()) cells.push_back(&c);
    for (const auto& [c, n] : t2.cells())
        if (t1.at(c) == 0) cells.push_back(&c);
    std::sort(cells.begin(), cells.end(),
              [&](const Cell* a, const Cell* b) { return cell_less(*a, *b); });

    if (rule == Rule::RevLex) {
        for (auto it = cells.rbegin(); it != cells.rend(); ++it) {
            Count a = t1.at(**it), b = t2.at(**it);
            if (a != b) return a < b ? std::strong_ordering::greater : std::strong_ordering::less;
        }
    } else {
        for (const Cell* c : cells) {
            Count a = t1.at(*c), b = t2.at(*c);
            if (a != b) return a > b ? std::strong_ordering::greater : std::strong_ordering::less;
        }
    }
    return std::strong_ordering::equal;
}

TermOrder default_term_order(const ModelSpec& model) {
    TermOrder ord;
    ord.levels = model.levels;
    Graph g = independence_graph(model);
    if (is_chordal(g)) {
        ord.var_order = elimination_variable_order(g);
    } else {
        ord.var_order.resize(model.num_vars());
        std::iota(ord.var_order.begin(), ord.var_order.end(), 0);
    }
    return ord;
}

Table fiber_minimum(const std::vector<Table>& members, const TermOrder& ord) {
    if (members.empty()) fail(Errc::ModelInvalid, "empty fiber has no minimum");
    const Table* best = &members.front();
    for (const Table& t : members)
        if (ord.compare(t, *best) == std::strong_ordering::less) best = &t;
    return *best;
}

} // namespace mbk
