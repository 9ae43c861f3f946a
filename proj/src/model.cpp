#include "mbk/model.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace mbk {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::ModelInvalid: return "ModelInvalid";
        case Errc::NegativeCell: return "NegativeCell";
        case Errc::IdenticalTables: return "IdenticalTables";
        case Errc::MarginalMismatch: return "MarginalMismatch";
        case Errc::NotChordal: return "NotChordal";
        case Errc::NotDecomposable: return "NotDecomposable";
        case Errc::NotDegreeTwo: return "NotDegreeTwo";
        case Errc::Inconsistent: return "Inconsistent";
        case Errc::TooLarge: return "TooLarge";
        case Errc::NotABasis: return "NotABasis";
        case Errc::EmptyBasis: return "EmptyBasis";
        case Errc::DegreeMismatch: return "DegreeMismatch";
    }
    return "Unknown";
}

std::size_t ModelSpec::num_cells() const {
    std::size_t n = 1;
    for (int l : levels) {
        if (l > 0 && n > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(l))
            fail(Errc::TooLarge, "cell lattice size overflows");
        n *= static_cast<std::size_t>(l);
    }
    return n;
}

bool ModelSpec::valid_cell(const Cell& c) const {
    if (static_cast<int>(c.size()) != num_vars()) return false;
    for (int d = 0; d < num_vars(); ++d)
        if (c[d] < 0 || c[d] >= levels[d]) return false;
    return true;
}

void ModelSpec::require_cell(const Cell& c) const {
    if (!valid_cell(c)) fail(Errc::ModelInvalid, "cell out of range for model");
}

ModelSpec ModelSpec::make(std::vector<int> levels, std::vector<std::vector<int>> facets) {
    const int m = static_cast<int>(levels.size());
    if (m < 1) fail(Errc::ModelInvalid, "model needs at least one variable");
    for (int l : levels)
        if (l < 2) fail(Errc::ModelInvalid, "every variable needs at least 2 levels");
    if (facets.empty()) fail(Errc::ModelInvalid, "generating class is empty");

    std::vector<bool> covered(m, false);
    for (auto& f : facets) {
        if (f.empty()) fail(Errc::ModelInvalid, "empty facet");
        std::sort(f.begin(), f.end());
        if (std::unique(f.begin(), f.end()) != f.end())
            fail(Errc::ModelInvalid, "facet lists a variable twice");
        for (int v : f) {
            if (v < 0 || v >= m) fail(Errc::ModelInvalid, "facet variable out of range");
            covered[v] = true;
        }
    }
    for (int d = 0; d < m; ++d)
        if (!covered[d]) fail(Errc::ModelInvalid, "variable missing from every facet");

    std::sort(facets.begin(), facets.end());
    for (std::size_t i = 0; i < facets.size(); ++i)
        for (std::size_t j = 0; j < facets.size(); ++j) {
            if (i == j) continue;
            if (std::includes(facets[i].begin(), facets[i].end(),
                              facets[j].begin(), facets[j].end())) {
                if (facets[i] == facets[j]) fail(Errc::ModelInvalid, "duplicate facet");
                fail(Errc::ModelInvalid, "facet contained in another facet");
            }
        }

    ModelSpec spec;
    spec.levels = std::move(levels);
    spec.facets = std::move(facets);
    return spec;
}

std::size_t cell_index(const ModelSpec& model, const Cell& c) {
    std::size_t idx = 0;
    for (int d = 0; d < model.num_vars(); ++d)
        idx = idx * static_cast<std::size_t>(model.levels[d]) + static_cast<std::size_t>(c[d]);
    return idx;
}

Cell cell_from_index(const ModelSpec& model, std::size_t idx) {
    const int m = model.num_vars();
    Cell c(m);
    for (int d = m - 1; d >= 0; --d) {
        c[d] = static_cast<Level>(idx % static_cast<std::size_t>(model.levels[d]));
        idx /= static_cast<std::size_t>(model.levels[d]);
    }
    return c;
}

Table::Table(std::map<Cell, Count> cells) : cells_(std::move(cells)) {
    for (const auto& [c, n] : cells_)
        if (n <= 0) fail(Errc::ModelInvalid, "stored table counts must be positive");
}

Count Table::at(const Cell& c) const {
    auto it = cells_.find(c);
    return it == cells_.end() ? 0 : it->second;
}

void Table::add(const Cell& c, Count delta) {
    if (delta == 0) return;
    auto it = cells_.find(c);
    Count cur = it == cells_.end() ? 0 : it->second;
    Count next = cur + delta;
    if (next < 0) fail(Errc::NegativeCell, "cell count would become negative");
    if (next == 0) {
        if (it != cells_.end()) cells_.erase(it);
    } else if (it != cells_.end()) {
        it->second = next;
    } else {
        cells_.emplace(c, next);
    }
}

Count Table::total() const {
    Count n = 0;
    for (const auto& [c, v] : cells_) n += v;
    return n;
}

Move::Move(Table pos, Table neg) : pos_(std::move(pos)), neg_(std::move(neg)) {
    if (pos_.empty() || neg_.empty())
        fail(Errc::ModelInvalid, "move parts must be nonempty");
    for (const auto& [c, n] : pos_.cells())
        if (neg_.at(c) != 0) fail(Errc::ModelInvalid, "move parts must have disjoint supports");
    // Canonical orientation: smallest support cell goes to the positive part.
    if (neg_.cells().begin()->first < pos_.cells().begin()->first)
        std::swap(pos_, neg_);
}

DegreeTwoTable::DegreeTwoTable(Cell a, Cell b) : lo(std::move(a)), hi(std::move(b)) {
    if (hi < lo) std::swap(lo, hi);
}

DegreeTwoTable DegreeTwoTable::from_table(const Table& t) {
    if (t.total() != 2) fail(Errc::NotDegreeTwo, "table sample size is not two");
    if (t.support_size() == 1) {
        const Cell& c = t.cells().begin()->first;
        return DegreeTwoTable(c, c);
    }
    auto it = t.cells().begin();
    const Cell& a = it->first;
    const Cell& b = std::next(it)->first;
    return DegreeTwoTable(a, b);
}

Table DegreeTwoTable::to_table() const {
    Table t;
    t.add(lo, 1);
    t.add(hi, 1);
    return t;
}

std::map<Cell, Count> marginalize(const ModelSpec& model, const Table& t,
                                  const std::vector<int>& vars) {
    for (int v : vars)
        if (v < 0 || v >= model.num_vars())
            fail(Errc::ModelInvalid, "marginal variable index out of range");
    std::map<Cell, Count> out;
    for (const auto& [c, n] : t.cells()) {
        Cell key(vars.size());
        for (std::size_t k = 0; k < vars.size(); ++k) key[k] = c[vars[k]];
        out[key] += n;
    }
    return out;
}

MarginalVector compute_b(const ModelSpec& model, const Table& t) {
    for (const auto& [c, n] : t.cells()) model.require_cell(c);
    MarginalVector b;
    b.facet_marginals.reserve(model.facets.size());
    for (const auto& f : model.facets) b.facet_marginals.push_back(marginalize(model, t, f));
    b.degree = t.total();
    return b;
}

namespace {

// Re-marginalizes a facet marginal onto a subset of that facet's variables.
std::map<Cell, Count> project(const std::vector<int>& facet,
                              const std::map<Cell, Count>& marg,
                              const std::vector<int>& onto) {
    std::vector<std::size_t> pos;
    pos.reserve(onto.size());
    for (int v : onto) {
        auto it = std::find(facet.begin(), facet.end(), v);
        pos.push_back(static_cast<std::size_t>(it - facet.begin()));
    }
    std::map<Cell, Count> out;
    for (const auto& [c, n] : marg) {
        Cell key(pos.size());
        for (std::size_t k = 0; k < pos.size(); ++k) key[k] = c[pos[k]];
        out[key] += n;
    }
    return out;
}

} // namespace

bool is_consistent(const ModelSpec& model, const MarginalVector& b) {
    const std::size_t r = model.facets.size();
    if (b.facet_marginals.size() != r) return false;
    for (std::size_t j = 0; j < r; ++j) {
        Count tot = 0;
        for (const auto& [c, n] : b.facet_marginals[j]) {
            if (n < 0) return false;
            tot += n;
        }
        if (tot != b.degree) return false;
    }
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t k = j + 1; k < r; ++k) {
            std::vector<int> common;
            std::set_intersection(model.facets[j].begin(), model.facets[j].end(),
                                  model.facets[k].begin(), model.facets[k].end(),
                                  std::back_inserter(common));
            if (common.empty()) continue;
            if (project(model.facets[j], b.facet_marginals[j], common) !=
                project(model.facets[k], b.facet_marginals[k], common))
                return false;
        }
    return true;
}

Table apply_move(const Table& t, const Move& z, int sign) {
    Table out = t;
    const Table& plus = sign >= 0 ? z.pos() : z.neg();
    const Table& minus = sign >= 0 ? z.neg() : z.pos();
    for (const auto& [c, n] : minus.cells()) out.add(c, -n);
    for (const auto& [c, n] : plus.cells()) out.add(c, n);
    return out;
}

std::optional<Table> try_apply_move(const Table& t, const Move& z, int sign) {
    const Table& minus = sign >= 0 ? z.neg() : z.pos();
    for (const auto& [c, n] : minus.cells())
        if (t.at(c) < n) return std::nullopt;
    return apply_move(t, z, sign);
}

Move move_from_tables(const ModelSpec& model, const Table& t1, const Table& t2) {
    if (t1 == t2) fail(Errc::IdenticalTables, "tables are identical");
    if (compute_b(model, t1) != compute_b(model, t2))
        fail(Errc::MarginalMismatch, "tables have different marginals");
    std::map<Cell, Count> diff;
    for (const auto& [c, n] : t1.cells()) diff[c] += n;
    for (const auto& [c, n] : t2.cells()) diff[c] -= n;
    Table pos, neg;
    for (const auto& [c, n] : diff) {
        if (n > 0) pos.add(c, n);
        else if (n < 0) neg.add(c, -n);
    }
    return Move(std::move(pos), std::move(neg));
}

bool preserves_marginals(const ModelSpec& model, const Move& z) {
    return compute_b(model, z.pos()) == compute_b(model, z.neg());
}

} // namespace mbk
