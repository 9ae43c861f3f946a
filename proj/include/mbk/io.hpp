#pragma once

#include <string>
#include <vector>

#include "mbk/bases.hpp"
#include "mbk/chordal.hpp"
#include "mbk/model.hpp"

namespace mbk {
namespace io {

// File formats (all indices 0-based):
//   model:  {"levels":[2,2,2],"facets":[[0],[1],[2]]}
//   table:  {"cells":[[[0,0,0],1],[[1,1,1],1]]}
//   moves:  [{"pos":[[[0,0],1],...],"neg":[...]}, ...]
//   tree:   {"cliques":[[0,1],[1,2]],"edges":[[0,1]]}

ModelSpec load_model(const std::string& path);
Table load_table(const std::string& path);
std::vector<Move> load_moves(const std::string& path);
CliqueTree load_clique_tree(const std::string& path);

std::string model_json(const ModelSpec& model);
std::string table_json(const Table& t);
std::string moves_json(const std::vector<Move>& moves);

void save_text(const std::string& path, const std::string& text);

/// Marginal vector input: either a table file (b is computed from it) or
/// {"marginals":[[ [cell,count], ...] per facet],"degree":2}.
MarginalVector load_marginal_vector(const std::string& path, const ModelSpec& model);

std::string clique_tree_dot(const CliqueTree& tree);

} // namespace io
} // namespace mbk
