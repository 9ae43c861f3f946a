#pragma once

#include <compare>
#include <optional>
#include <vector>

#include "mbk/model.hpp"

namespace mbk {

/// A degree-compatible term order on tables: a total order on cells plus a
/// reverse lexicographic (or lexicographic) comparison of count vectors.
struct TermOrder {
    enum class Rule { RevLex, Lex };

    std::vector<int> levels;    // for dense cell indexing
    std::vector<int> var_order; // cell comparison significance, most significant first
    Rule rule = Rule::RevLex;

    // Optional explicit cell ranking (rank per dense cell index); used only
    // by the order-sensitivity conformance path.
    std::optional<std::vector<std::size_t>> explicit_rank;

    bool cell_less(const Cell& a, const Cell& b) const;

    /// greater means t1 succeeds t2 in the term order. RevLex: scanning
    /// cells from the last backward, the first differing count decides,
    /// smaller count meaning the larger table. Throws DegreeMismatch for
    /// unequal sample sizes.
    std::strong_ordering compare(const Table& t1, const Table& t2) const;

    bool greater(const Table& t1, const Table& t2) const {
        return compare(t1, t2) == std::strong_ordering::greater;
    }
};

/// The default order: boundary-clique elimination variable order,
/// lexicographic cells, reverse lexicographic comparison. Falls back to
/// the identity variable order when the independence graph is not chordal.
TermOrder default_term_order(const ModelSpec& model);

/// The lowest fiber member under the order.
Table fiber_minimum(const std::vector<Table>& members, const TermOrder& ord);

} // namespace mbk
