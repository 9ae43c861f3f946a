#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "mbk/bases.hpp"
#include "mbk/io.hpp"

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(MBK_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf;
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string scratch(const std::string& name) {
    static const std::string dir = [] {
        std::string d = "/tmp/mbk-cli-test";
        if (std::system(("mkdir -p " + d).c_str()) != 0) std::abort();
        return d;
    }();
    return dir + "/" + name;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("cli pipeline: min-basis then verify passes") {
    write_file(scratch("m3.json"), R"({"levels":[2,2,2],"facets":[[0],[1],[2]]})");
    auto build = run_cli("min-basis --model " + scratch("m3.json") + " --out " +
                         scratch("moves.json"));
    CHECK(build.exit_code == 0);
    CHECK(contains(build.output, "moves: 9"));

    auto verify = run_cli("verify --model " + scratch("m3.json") + " --moves " +
                          scratch("moves.json"));
    CHECK(verify.exit_code == 0);
    CHECK(contains(verify.output, "PASS"));

    // Dropping a move makes verification fail with a witness.
    std::string moves = read_file(scratch("moves.json"));
    auto cut = moves.find("},{");
    REQUIRE(cut != std::string::npos);
    write_file(scratch("cut.json"), "[" + moves.substr(cut + 2));
    auto fail = run_cli("verify --model " + scratch("m3.json") + " --moves " +
                        scratch("cut.json"));
    CHECK(fail.exit_code == 1);
    CHECK(contains(fail.output, "FAIL"));
}

TEST_CASE("cli groebner conformance on 3x3 independence") {
    write_file(scratch("m33.json"), R"({"levels":[3,3],"facets":[[0],[1]]})");
    auto r = run_cli("groebner --model " + scratch("m33.json") + " --verify-cap 3 --out " +
                     scratch("gb.json"));
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "moves: 9"));
    CHECK(contains(r.output, "PASS"));
    CHECK(contains(r.output, "reduced: yes"));
}

TEST_CASE("cli check-unique prints the witness") {
    write_file(scratch("m3.json"), R"({"levels":[2,2,2],"facets":[[0],[1],[2]]})");
    auto r = run_cli("check-unique --model " + scratch("m3.json"));
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "non-unique"));
    CHECK(contains(r.output, "1,2,3"));

    write_file(scratch("chain.json"), R"({"levels":[2,2,2],"facets":[[0,1],[1,2]]})");
    auto u = run_cli("check-unique --model " + scratch("chain.json"));
    CHECK(u.exit_code == 0);
    CHECK(contains(u.output, "unique"));
    CHECK_FALSE(contains(u.output, "non-unique"));
}

TEST_CASE("cli outputs are byte-stable") {
    write_file(scratch("m3.json"), R"({"levels":[2,2,2],"facets":[[0],[1],[2]]})");
    run_cli("min-basis --model " + scratch("m3.json") + " --policy random:99 --out " +
            scratch("r1.json"));
    run_cli("min-basis --model " + scratch("m3.json") + " --policy random:99 --out " +
            scratch("r2.json"));
    CHECK(read_file(scratch("r1.json")) == read_file(scratch("r2.json")));

    auto a = run_cli("fibers --model " + scratch("m3.json") + " --all");
    auto b = run_cli("fibers --model " + scratch("m3.json") + " --all");
    CHECK(a.output == b.output);
    CHECK(contains(a.output, "degree-two fibers with >= 2 elements: 7"));
}

TEST_CASE("cli dobra with an explicit tree") {
    write_file(scratch("m4.json"), R"({"levels":[2,2,2,2],"facets":[[0],[1],[2],[3]]})");
    write_file(scratch("chain_tree.json"),
               R"({"cliques":[[0],[1],[2],[3]],"edges":[[0,1],[1,2],[2,3]]})");
    auto r = run_cli("dobra --model " + scratch("m4.json") + " --tree " +
                     scratch("chain_tree.json") + " --out " + scratch("dobra.json"));
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "minimal: no"));
    CHECK(contains(r.output, "minimal-invariant: yes"));

    write_file(scratch("star_tree.json"),
               R"({"cliques":[[0],[1],[2],[3]],"edges":[[0,3],[1,3],[2,3]]})");
    auto s = run_cli("dobra --model " + scratch("m4.json") + " --tree " +
                     scratch("star_tree.json"));
    CHECK(contains(s.output, "minimal-invariant: no"));

    auto v = run_cli("verify --model " + scratch("m4.json") + " --moves " +
                     scratch("dobra.json"));
    CHECK(contains(v.output, "PASS"));
}

TEST_CASE("cli exact-test emits JSON") {
    write_file(scratch("m22.json"), R"({"levels":[2,2],"facets":[[0],[1]]})");
    write_file(scratch("t22.json"), R"({"cells":[[[0,0],1],[[1,1],1]]})");
    run_cli("min-basis --model " + scratch("m22.json") + " --out " + scratch("b22.json"));
    auto r = run_cli("exact-test --model " + scratch("m22.json") + " --table " +
                     scratch("t22.json") + " --basis " + scratch("b22.json") +
                     " --steps 5000 --burnin 100 --seed 3");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "\"p_value\":1"));
    CHECK(contains(r.output, "\"chi2_observed\":2"));

    // Identical seeds give identical output.
    auto r2 = run_cli("exact-test --model " + scratch("m22.json") + " --table " +
                      scratch("t22.json") + " --basis " + scratch("b22.json") +
                      " --steps 5000 --burnin 100 --seed 3");
    CHECK(r.output == r2.output);
}

TEST_CASE("cli fibers from a b file") {
    write_file(scratch("m3.json"), R"({"levels":[2,2,2],"facets":[[0],[1],[2]]})");
    write_file(scratch("b.json"), R"({"cells":[[[0,0,0],1],[[1,1,1],1]]})");
    auto r = run_cli("fibers --model " + scratch("m3.json") + " --b " + scratch("b.json"));
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "c(b)=3"));
    CHECK(contains(r.output, "size=4"));
    CHECK(contains(r.output, "member (0,0,0)(1,1,1)"));
}

TEST_CASE("cli exit codes") {
    // Usage error: missing required option.
    auto usage = run_cli("min-basis");
    CHECK(usage.exit_code == 2);
    auto unknown = run_cli("frobnicate");
    CHECK(unknown.exit_code == 2);

    // Domain error: Groebner construction on a non-decomposable model.
    write_file(scratch("cycle.json"),
               R"({"levels":[2,2,2,2],"facets":[[0,1],[1,2],[2,3],[0,3]]})");
    auto dom = run_cli("groebner --model " + scratch("cycle.json"));
    CHECK(dom.exit_code == 1);
    CHECK(contains(dom.output, "NotDecomposable"));

    auto help = run_cli("--help");
    CHECK(help.exit_code == 0);
    CHECK(contains(help.output, "analyze"));
    CHECK(contains(help.output, "exact-test"));

    // analyze on a non-chordal model reports and exits cleanly.
    auto an = run_cli("analyze --model " + scratch("cycle.json"));
    CHECK(an.exit_code == 0);
    CHECK(contains(an.output, "not chordal"));
}

TEST_CASE("cli honors MBK_MAX_CELLS") {
    write_file(scratch("m3.json"), R"({"levels":[2,2,2],"facets":[[0],[1],[2]]})");
    std::string cmd = "MBK_MAX_CELLS=4 " + std::string(MBK_CLI_PATH) + " fibers --model " +
                      scratch("m3.json") + " 2>&1";
    std::array<char, 4096> buf;
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    int status = pclose(pipe);
    CHECK(WEXITSTATUS(status) == 1);
    CHECK(contains(out, "TooLarge"));
}

TEST_CASE("cli warns on non-chordal bases") {
    write_file(scratch("cycle.json"),
               R"({"levels":[2,2,2,2],"facets":[[0,1],[1,2],[2,3],[0,3]]})");
    auto r = run_cli("min-basis --model " + scratch("cycle.json"));
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "degree-2 complete only"));
}

TEST_CASE("file formats round trip") {
    auto m = mbk::ModelSpec::make({2, 2, 2}, {{0}, {1}, {2}});
    auto basis = mbk::minimal_basis(m);
    write_file(scratch("rt.json"), mbk::io::moves_json(basis.moves));
    auto loaded = mbk::io::load_moves(scratch("rt.json"));
    CHECK(loaded == basis.moves);

    write_file(scratch("rtm.json"), mbk::io::model_json(m));
    auto m2 = mbk::io::load_model(scratch("rtm.json"));
    CHECK(m2.levels == m.levels);
    CHECK(m2.facets == m.facets);

    mbk::Table tbl;
    tbl.add({0, 1, 0}, 2);
    tbl.add({1, 0, 1}, 1);
    write_file(scratch("rtt.json"), mbk::io::table_json(tbl));
    CHECK(mbk::io::load_table(scratch("rtt.json")) == tbl);
}

TEST_CASE("cli dot export") {
    write_file(scratch("chain.json"), R"({"levels":[2,2,2],"facets":[[0,1],[1,2]]})");
    auto r = run_cli("analyze --model " + scratch("chain.json") + " --dot -");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "graph cliquetree"));
    CHECK(contains(r.output, "label=\"{1,2}\""));
    CHECK(contains(r.output, "label=\"{2}\""));
}
