#include "mbk/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mbk {
namespace io {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::ModelInvalid, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail(Errc::ModelInvalid, path + ": " + e.what());
    }
    return j;
}

Cell to_cell(const json& j) {
    if (!j.is_array()) fail(Errc::ModelInvalid, "cell must be an array");
    Cell c;
    for (const auto& v : j) c.push_back(v.get<Level>());
    return c;
}

Table to_table(const json& cells) {
    Table t;
    for (const auto& entry : cells) {
        if (!entry.is_array() || entry.size() != 2)
            fail(Errc::ModelInvalid, "table entry must be [cell, count]");
        Count n = entry[1].get<Count>();
        if (n <= 0) fail(Errc::ModelInvalid, "table counts must be positive");
        t.add(to_cell(entry[0]), n);
    }
    return t;
}

ordered cell_json(const Cell& c) {
    ordered a = ordered::array();
    for (Level l : c) a.push_back(l);
    return a;
}

ordered cells_json(const Table& t) {
    ordered a = ordered::array();
    for (const auto& [c, n] : t.cells()) a.push_back(ordered::array({cell_json(c), n}));
    return a;
}

} // namespace

ModelSpec load_model(const std::string& path) {
    json j = read_json(path);
    if (!j.contains("levels") || !j.contains("facets"))
        fail(Errc::ModelInvalid, path + ": model needs \"levels\" and \"facets\"");
    std::vector<int> levels = j["levels"].get<std::vector<int>>();
    std::vector<std::vector<int>> facets = j["facets"].get<std::vector<std::vector<int>>>();
    return ModelSpec::make(std::move(levels), std::move(facets));
}

Table load_table(const std::string& path) {
    json j = read_json(path);
    if (!j.contains("cells")) fail(Errc::ModelInvalid, path + ": table needs \"cells\"");
    return to_table(j["cells"]);
}

std::vector<Move> load_moves(const std::string& path) {
    json j = read_json(path);
    if (!j.is_array()) fail(Errc::ModelInvalid, path + ": moves file must be a list");
    std::vector<Move> out;
    for (const auto& mj : j) {
        if (!mj.contains("pos") || !mj.contains("neg"))
            fail(Errc::ModelInvalid, "move needs \"pos\" and \"neg\"");
        out.emplace_back(to_table(mj["pos"]), to_table(mj["neg"]));
    }
    return out;
}

CliqueTree load_clique_tree(const std::string& path) {
    json j = read_json(path);
    if (!j.contains("cliques")) fail(Errc::ModelInvalid, path + ": tree needs \"cliques\"");
    auto cliques = j["cliques"].get<std::vector<std::vector<int>>>();
    std::vector<std::pair<int, int>> edges;
    if (j.contains("edges"))
        for (const auto& e : j["edges"]) edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    return make_clique_tree(std::move(cliques), std::move(edges));
}

std::string model_json(const ModelSpec& model) {
    ordered j;
    j["levels"] = model.levels;
    j["facets"] = model.facets;
    return j.dump();
}

std::string table_json(const Table& t) {
    ordered j;
    j["cells"] = cells_json(t);
    return j.dump();
}

std::string moves_json(const std::vector<Move>& moves) {
    ordered a = ordered::array();
    for (const Move& z : moves) {
        ordered mj;
        mj["pos"] = cells_json(z.pos());
        mj["neg"] = cells_json(z.neg());
        a.push_back(std::move(mj));
    }
    return a.dump();
}

void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) fail(Errc::ModelInvalid, "cannot write " + path);
    out << text << '\n';
}

MarginalVector load_marginal_vector(const std::string& path, const ModelSpec& model) {
    json j = read_json(path);
    if (j.contains("cells")) return compute_b(model, to_table(j["cells"]));
    if (!j.contains("marginals"))
        fail(Errc::ModelInvalid, path + ": expected \"cells\" or \"marginals\"");
    const auto& ms = j["marginals"];
    if (ms.size() != model.facets.size())
        fail(Errc::ModelInvalid, "one marginal list per facet required");
    MarginalVector b;
    for (const auto& mj : ms) {
        std::map<Cell, Count> marg;
        for (const auto& entry : mj) marg[to_cell(entry[0])] += entry[1].get<Count>();
        b.facet_marginals.push_back(std::move(marg));
    }
    b.degree = j.contains("degree") ? j["degree"].get<Count>() : Count{0};
    if (!j.contains("degree") && !b.facet_marginals.empty()) {
        for (const auto& [c, n] : b.facet_marginals.front()) b.degree += n;
    }
    return b;
}

std::string clique_tree_dot(const CliqueTree& tree) {
    auto label = [](const std::vector<int>& vars) {
        std::ostringstream os;
        os << '{';
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (i) os << ',';
            os << vars[i] + 1; // 1-based in human-readable output
        }
        os << '}';
        return os.str();
    };
    std::ostringstream os;
    os << "graph cliquetree {\n";
    for (std::size_t i = 0; i < tree.cliques.size(); ++i)
        os << "  c" << i << " [label=\"" << label(tree.cliques[i]) << "\"];\n";
    for (std::size_t e = 0; e < tree.edges.size(); ++e)
        os << "  c" << tree.edges[e].first << " -- c" << tree.edges[e].second << " [label=\""
           << label(tree.separators[e]) << "\"];\n";
    os << "}";
    return os.str();
}

} // namespace io
} // namespace mbk
