#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <map>
#include <vector>

#include "mbk/errors.hpp"

namespace mbk {

using Level = int;
using Cell  = std::vector<Level>; // one level per variable, 0-based
using Count = std::int64_t;

/// A hierarchical log-linear model: per-variable level counts plus the
/// generating class (the facets of a simplicial complex on {0..m-1}).
struct ModelSpec {
    std::vector<int> levels;              // I_delta >= 2 for every variable
    std::vector<std::vector<int>> facets; // sorted variable subsets, pairwise non-nested

    int num_vars() const { return static_cast<int>(levels.size()); }

    /// |I| = prod I_delta. Throws TooLarge on overflow.
    std::size_t num_cells() const;

    bool valid_cell(const Cell& c) const;
    void require_cell(const Cell& c) const; // throws ModelInvalid

    /// Validates invariants (levels >= 2, facets nonempty, non-nested,
    /// union covering all variables) and canonicalizes facet order.
    static ModelSpec make(std::vector<int> levels, std::vector<std::vector<int>> facets);
};

/// Dense row-major index of a cell (variable 0 most significant).
std::size_t cell_index(const ModelSpec& model, const Cell& c);
Cell cell_from_index(const ModelSpec& model, std::size_t idx);

/// Sparse nonnegative-integer table. Cells not stored have count zero;
/// stored counts are strictly positive.
class Table {
public:
    Table() = default;
    explicit Table(std::map<Cell, Count> cells);

    Count at(const Cell& c) const;
    /// Adds delta to a cell, erasing it at zero. Throws NegativeCell if the
    /// result would be negative.
    void add(const Cell& c, Count delta);

    Count total() const;
    bool empty() const { return cells_.empty(); }
    std::size_t support_size() const { return cells_.size(); }
    const std::map<Cell, Count>& cells() const { return cells_; }

    friend auto operator<=>(const Table&, const Table&) = default;

private:
    std::map<Cell, Count> cells_;
};

/// b = An: one sparse marginal map per facet plus the common degree.
struct MarginalVector {
    std::vector<std::map<Cell, Count>> facet_marginals; // parallel to model.facets
    Count degree = 0;

    friend auto operator<=>(const MarginalVector&, const MarginalVector&) = default;
};

/// A move z with Az = 0, stored as disjoint positive/negative parts.
/// The stored orientation is canonical: the lexicographically smallest
/// support cell lies in the positive part, so z and -z have one stored
/// form. Directed uses (Groebner reduction) recompute direction from the
/// term order instead of relying on the stored one.
class Move {
public:
    Move(Table pos, Table neg);

    const Table& pos() const { return pos_; }
    const Table& neg() const { return neg_; }
    Count degree() const { return pos_.total(); }

    friend auto operator<=>(const Move&, const Move&) = default;

private:
    Table pos_, neg_;
};

/// A sample-size-two table as its unordered pair of unit cells
/// (lo == hi means count 2 at one cell).
struct DegreeTwoTable {
    Cell lo, hi; // lo <= hi

    DegreeTwoTable(Cell a, Cell b);
    static DegreeTwoTable from_table(const Table& t);
    Table to_table() const;

    friend auto operator<=>(const DegreeTwoTable&, const DegreeTwoTable&) = default;
};

/// The D-marginal n_D of t; D = {} yields {(): total}.
std::map<Cell, Count> marginalize(const ModelSpec& model, const Table& t,
                                  const std::vector<int>& vars);

MarginalVector compute_b(const ModelSpec& model, const Table& t);

/// True iff every facet pair agrees on its intersection marginal and all
/// facet totals equal the degree.
bool is_consistent(const ModelSpec& model, const MarginalVector& b);

/// t + sign*z; throws NegativeCell when a count would drop below zero.
Table apply_move(const Table& t, const Move& z, int sign);

/// Non-throwing form: nullopt when the move is not applicable.
std::optional<Table> try_apply_move(const Table& t, const Move& z, int sign);

/// The canonical move with z+ - z- = +-(t1 - t2), common cells cancelled.
/// Throws IdenticalTables / MarginalMismatch.
Move move_from_tables(const ModelSpec& model, const Table& t1, const Table& t2);

/// Directly testable move invariant: A z+ = A z-.
bool preserves_marginals(const ModelSpec& model, const Move& z);

} // namespace mbk
