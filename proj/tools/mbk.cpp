// mbk: Markov bases, invariant bases, and Groebner bases for decomposable
// log-linear models, with an MCMC exact test.
//
// Human-readable output labels variables 1-based; all files are 0-based.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "mbk/bases.hpp"
#include "mbk/chordal.hpp"
#include "mbk/fiber2.hpp"
#include "mbk/groebner.hpp"
#include "mbk/io.hpp"
#include "mbk/model.hpp"
#include "mbk/sampler.hpp"

namespace {

using namespace mbk;

std::string vars_1based(const std::vector<int>& vs) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) os << ',';
        os << vs[i] + 1;
    }
    os << '}';
    return os.str();
}

std::string cell_str(const Cell& c) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) os << ',';
        os << c[i];
    }
    os << ')';
    return os.str();
}

std::size_t cell_cap() {
    if (const char* env = std::getenv("MBK_MAX_CELLS")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return 4096;
}

TreePolicy parse_policy(const std::string& s, std::uint64_t& seed) {
    if (s == "star") return TreePolicy::StarAtMin;
    if (s == "path") return TreePolicy::Path;
    if (s == "random") return TreePolicy::Random;
    if (s.rfind("random:", 0) == 0) {
        seed = std::strtoull(s.c_str() + 7, nullptr, 10);
        return TreePolicy::Random;
    }
    fail(Errc::ModelInvalid, "unknown policy '" + s + "' (star|path|random[:SEED])");
}

void print_fiber(const ModelSpec& model, const Fiber& fiber, bool with_members) {
    const auto& key = fiber.key;
    std::cout << "fiber: nondegenerate " << vars_1based(key.cls.nondegenerate_vars())
              << "  c(b)=" << key.component_count() << "  size=" << fiber_size(key) << "\n";
    std::cout << "  components:";
    for (const auto& cp : key.components)
        std::cout << ' ' << vars_1based(cp.vars) << "~" << cell_str(cp.cell_a) << '/'
                  << cell_str(cp.cell_b);
    std::cout << "\n";
    bool any_deg = false;
    for (int d = 0; d < model.num_vars(); ++d)
        if (!key.cls.nondegenerate[d]) {
            if (!any_deg) std::cout << "  degenerate:";
            any_deg = true;
            std::cout << " " << d + 1 << "@" << key.cls.levels[d].first;
        }
    if (any_deg) std::cout << "\n";
    if (with_members)
        for (const auto& mem : fiber.members)
            std::cout << "  member " << cell_str(mem.lo) << cell_str(mem.hi) << "\n";
}

void emit_moves(const MarkovBasis& basis, const std::string& out_path) {
    if (basis.degree2_only)
        std::cout << "warning: independence graph is not chordal; the move set is "
                     "degree-2 complete only\n";
    std::cout << "moves: " << basis.size() << "  (" << provenance_name(basis.provenance)
              << ")\n";
    if (!out_path.empty()) io::save_text(out_path, io::moves_json(basis.moves));
}

int run(int argc, char** argv) {
    CLI::App app{"Markov bases for decomposable log-linear models"};
    app.require_subcommand(1);

    std::string model_path, table_path, moves_path, tree_path, out_path, b_path, dot_path;
    std::string policy_str = "star", flavor_str = "staircase";
    std::uint64_t seed = 0;
    std::int64_t steps = 100000, burnin = 1000, thin = 1;
    Count degree_cap = 2, verify_cap = 3;
    bool all_fibers = false, representative = false;

    auto add_model = [&](CLI::App* cmd) {
        cmd->add_option("--model", model_path, "model JSON file")->required();
    };

    auto* analyze = app.add_subcommand("analyze", "chordal structure of the model");
    add_model(analyze);
    analyze->add_option("--dot", dot_path, "write the clique tree in DOT format ('-' = stdout)");

    auto* fibers_cmd = app.add_subcommand("fibers", "degree-two fibers");
    add_model(fibers_cmd);
    fibers_cmd->add_flag("--all", all_fibers, "scan all cell pairs (default)");
    fibers_cmd->add_flag("--representative", representative, "standardized representatives");
    fibers_cmd->add_option("--b", b_path, "single fiber from a table or marginal file");

    auto* minb = app.add_subcommand("min-basis", "minimal Markov basis (spanning trees)");
    add_model(minb);
    minb->add_option("--policy", policy_str, "star|path|random[:SEED]");
    minb->add_option("--seed", seed, "seed for the random policy");
    minb->add_option("--out", out_path, "moves JSON output");

    auto* dobra = app.add_subcommand("dobra", "Dobra's clique-tree basis");
    add_model(dobra);
    dobra->add_option("--tree", tree_path, "clique tree JSON (default: canonical tree)");
    dobra->add_option("--out", out_path, "moves JSON output");

    auto* invb = app.add_subcommand("invariant-basis", "minimal invariant basis (orbits)");
    add_model(invb);
    invb->add_option("--flavor", flavor_str, "staircase|standard");
    invb->add_option("--out", out_path, "flattened moves JSON output");

    auto* grob = app.add_subcommand("groebner", "reduced Groebner basis");
    add_model(grob);
    grob->add_option("--verify-cap", verify_cap, "empirical verification degree cap");
    grob->add_option("--out", out_path, "moves JSON output");

    auto* uniq = app.add_subcommand("check-unique", "uniqueness of the minimal basis");
    add_model(uniq);

    auto* verify = app.add_subcommand("verify", "brute-force Markov basis verification");
    add_model(verify);
    verify->add_option("--moves", moves_path, "moves JSON file")->required();
    verify->add_option("--degree-cap", degree_cap, "fiber degrees to check (default 2)");

    auto* etest = app.add_subcommand("exact-test", "Metropolis-Hastings exact test");
    add_model(etest);
    etest->add_option("--table", table_path, "observed table JSON")->required();
    etest->add_option("--basis", moves_path, "moves JSON file")->required();
    etest->add_option("--steps", steps, "chain length");
    etest->add_option("--burnin", burnin, "burn-in steps");
    etest->add_option("--thin", thin, "thinning interval");
    etest->add_option("--seed", seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage errors exit 2
    }

    const std::size_t max_cells = cell_cap();
    ModelSpec model = io::load_model(model_path);

    if (app.got_subcommand(analyze)) {
        Graph g = independence_graph(model);
        if (!is_chordal(g)) {
            std::cout << "independence graph: not chordal (model is not decomposable)\n";
            return 0;
        }
        std::cout << "independence graph: chordal\n";
        CliqueTree tree = clique_tree(g);
        std::cout << "cliques:";
        for (const auto& c : tree.cliques) std::cout << ' ' << vars_1based(c);
        std::cout << "\nclique tree edges:";
        for (std::size_t e = 0; e < tree.edges.size(); ++e)
            std::cout << ' ' << vars_1based(tree.cliques[tree.edges[e].first]) << "-"
                      << vars_1based(tree.cliques[tree.edges[e].second]) << " sep "
                      << vars_1based(tree.separators[e]);
        std::cout << "\nboundary cliques:";
        for (const auto& bc : boundary_cliques(g))
            std::cout << ' ' << vars_1based(bc.clique) << " simp " << vars_1based(bc.simp)
                      << " sep " << vars_1based(bc.sep);
        std::cout << "\nelimination order:";
        for (int v : elimination_variable_order(g)) std::cout << ' ' << v + 1;
        std::cout << "\n";
        if (!dot_path.empty()) {
            std::string dot = io::clique_tree_dot(tree);
            if (dot_path == "-") std::cout << dot << "\n";
            else io::save_text(dot_path, dot);
        }
        return 0;
    }

    if (app.got_subcommand(fibers_cmd)) {
        if (!b_path.empty()) {
            MarginalVector b = io::load_marginal_vector(b_path, model);
            print_fiber(model, enumerate_fiber(model, b), true);
        } else if (representative) {
            auto reps = enumerate_representative_fibers(model);
            std::cout << "representative fibers: " << reps.size() << "\n";
            for (const auto& key : reps) print_fiber(model, enumerate_fiber(model, key.b), false);
        } else {
            (void)all_fibers; // pair scan is the default
            auto fibers = enumerate_all_degree2_fibers(model, max_cells);
            std::cout << "degree-two fibers with >= 2 elements: " << fibers.size() << "\n";
            for (const auto& f : fibers) print_fiber(model, f, true);
        }
        return 0;
    }

    if (app.got_subcommand(minb)) {
        TreePolicy policy = parse_policy(policy_str, seed);
        emit_moves(minimal_basis(model, policy, seed, max_cells), out_path);
        return 0;
    }

    if (app.got_subcommand(dobra)) {
        Graph g = independence_graph(model);
        CliqueTree tree = tree_path.empty() ? clique_tree(g) : io::load_clique_tree(tree_path);
        auto basis = dobra_basis(model, tree);
        emit_moves(basis, out_path);
        auto inv = dobra_is_minimal_invariant(model, tree);
        std::cout << "minimal: " << (dobra_is_minimal(model).minimal ? "yes" : "no")
                  << "  minimal-invariant: " << (inv.minimal ? "yes" : "no") << "\n";
        return 0;
    }

    if (app.got_subcommand(invb)) {
        Gf2Flavor flavor;
        if (flavor_str == "staircase") flavor = Gf2Flavor::Staircase;
        else if (flavor_str == "standard") flavor = Gf2Flavor::Standard;
        else fail(Errc::ModelInvalid, "unknown flavor '" + flavor_str + "'");
        auto inv = invariant_basis(model, flavor);
        std::cout << "orbits: " << inv.orbits.size() << "\n";
        for (const auto& orbit : inv.orbits) {
            FiberKey key = fiber_key(model, inv.fibers[orbit.fiber_index]);
            std::cout << "  fiber " << vars_1based(key.cls.nondegenerate_vars()) << " kappa "
                      << key.component_count() - 1 << " orbit size " << orbit.members.size()
                      << "\n";
        }
        emit_moves(inv.flatten(), out_path);
        return 0;
    }

    if (app.got_subcommand(grob)) {
        auto basis = groebner_basis(model, max_cells);
        TermOrder ord = default_term_order(model);
        auto check = is_groebner_empirically(model, basis.moves, ord, verify_cap);
        emit_moves(basis, out_path);
        std::cout << "reduced: " << (is_reduced(basis.moves, ord) ? "yes" : "no") << "\n";
        for (std::size_t d = 0; d < check.fibers_per_degree.size(); ++d)
            std::cout << "degree " << d + 2 << ": " << check.fibers_per_degree[d] << " fibers\n";
        std::cout << (check.ok ? "PASS" : "FAIL") << ": normal forms "
                  << (check.ok ? "reach" : "miss") << " every fiber minimum up to degree "
                  << verify_cap << "\n";
        return check.ok ? 0 : 1;
    }

    if (app.got_subcommand(uniq)) {
        bool nonunique = minimal_bases_nonunique(model);
        Graph g = independence_graph(model);
        std::cout << "minimal Markov basis: " << (nonunique ? "non-unique" : "unique") << "\n";
        if (auto triple = independent_triple(g))
            std::cout << "witness: variables " << (*triple)[0] + 1 << "," << (*triple)[1] + 1
                      << "," << (*triple)[2] + 1
                      << " are pairwise non-adjacent (a degree-two fiber with 4 elements"
                         " exists)\n";
        if (is_chordal(g))
            std::cout << "boundary-clique criterion agrees: "
                      << (unique_minimal_basis_boundary_criterion(g) == !nonunique ? "yes" : "NO")
                      << "\n";
        return 0;
    }

    if (app.got_subcommand(verify)) {
        auto moves = io::load_moves(moves_path);
        oracle::Caps caps;
        caps.max_cells = max_cells;
        caps.max_degree = std::max<Count>(degree_cap, 4);
        auto r = is_markov_basis(model, moves, degree_cap, caps);
        if (r.ok) {
            std::cout << "PASS: moves connect every fiber up to degree " << degree_cap << "\n";
            return 0;
        }
        std::cout << "FAIL: disconnected fiber of degree "
                  << (r.witness_b ? r.witness_b->degree : 0) << " with "
                  << r.witness_members.size() << " members in " << r.witness_components.size()
                  << " components\n";
        for (const auto& t : r.witness_members) {
            std::cout << "  member";
            for (const auto& [c, n] : t.cells()) std::cout << ' ' << cell_str(c) << "x" << n;
            std::cout << "\n";
        }
        return 1;
    }

    if (app.got_subcommand(etest)) {
        Table observed = io::load_table(table_path);
        MarkovBasis basis;
        basis.moves = io::load_moves(moves_path);
        ChainConfig cfg;
        cfg.steps = steps;
        cfg.burnin = burnin;
        cfg.thin = thin;
        cfg.seed = seed;
        auto r = exact_test(model, observed, basis, cfg);
        std::ostringstream os;
        os << "{\"p_value\":" << r.p_value << ",\"se\":" << r.se << ",\"steps\":" << r.steps
           << ",\"chi2_observed\":" << r.chi2_observed << "}";
        std::cout << os.str() << "\n";
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
