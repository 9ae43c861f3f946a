#pragma once

#include <optional>
#include <vector>

#include "mbk/bases.hpp"
#include "mbk/model.hpp"
#include "mbk/oracle.hpp"
#include "mbk/term_order.hpp"

namespace mbk {

/// Per nontrivial degree-two fiber, the star of moves from every member
/// to the order-minimal one. Equals minimal_basis(StarAtMin) as a move
/// set. Throws NotDecomposable / TooLarge.
MarkovBasis groebner_basis(const ModelSpec& model, std::size_t max_cells = 4096);

/// Repeatedly applies any move direction that is componentwise applicable
/// and strictly order-decreases the table, until none applies.
Table reduce_to_normal_form(const Table& t, const std::vector<Move>& basis,
                            const TermOrder& ord);

struct GroebnerCheck {
    bool ok = false;
    std::optional<Table> counterexample; // first member not reducing to its fiber minimum
    std::vector<std::size_t> fibers_per_degree; // indexed from degree 2
};

/// Empirical Groebner test via the normal-form characterization: every
/// table up to the degree cap must reduce to its fiber's order minimum.
GroebnerCheck is_groebner_empirically(const ModelSpec& model, const std::vector<Move>& basis,
                                      const TermOrder& ord, Count degree_cap = 3,
                                      const oracle::Caps& caps = {});

/// Reducedness: no move's leading part divides either part of another
/// move (leading coefficients are 1 by integrality).
bool is_reduced(const std::vector<Move>& basis, const TermOrder& ord);

} // namespace mbk
