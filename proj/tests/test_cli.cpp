#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cwmatch/cli.hpp"
#include "cwmatch/json_io.hpp"

using namespace cwmatch;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int exit_code;
    std::string out;
    std::string err;
    Json json() const { return parse_json_text(out); }
};

CliRun run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli_main(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path temp_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "cwmatch_cli_tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

fs::path write_file(const std::string& name, const std::string& content) {
    fs::path p = temp_dir() / name;
    std::ofstream f(p, std::ios::binary);
    f << content;
    return p;
}

Json strip_perf(Json j) {
    j.erase("perf");
    return j;
}

}  // namespace

TEST_CASE("gen family + solve induced round trip") {
    fs::path p5 = temp_dir() / "p5.cwe";
    auto gen = run_cli({"gen", "family", "--kind", "path", "--n", "5", "--out", p5.string()});
    REQUIRE(gen.exit_code == 0);
    CHECK(gen.json().at("n") == 5);

    auto solve = run_cli({"solve", "induced", "--expr", p5.string()});
    REQUIRE(solve.exit_code == 0);
    Json j = solve.json();
    CHECK(j.at("counts") == Json::array({"1", "4", "1"}));
    CHECK(j.at("max_size") == 2);
    CHECK(j.contains("perf"));
    CHECK(j.at("command") == "solve induced");

    auto acyclic = run_cli({"solve", "acyclic", "--expr", p5.string()});
    REQUIRE(acyclic.exit_code == 0);
    CHECK(acyclic.json().at("max_matching_size") == 2);
    CHECK(acyclic.json().at("max_weight") == 4);
}

TEST_CASE("solver output is byte-identical across runs modulo perf") {
    fs::path c6 = temp_dir() / "c6.cwe";
    run_cli({"gen", "family", "--kind", "cycle", "--n", "6", "--out", c6.string()});
    auto a = run_cli({"solve", "induced", "--expr", c6.string()});
    auto b = run_cli({"solve", "induced", "--expr", c6.string()});
    CHECK(strip_perf(a.json()).dump() == strip_perf(b.json()).dump());

    auto ntt = run_cli({"--convolution", "ntt", "solve", "induced", "--expr", c6.string()});
    auto school = run_cli({"--convolution", "schoolbook", "solve", "induced", "--expr", c6.string()});
    CHECK(strip_perf(ntt.json()).dump() == strip_perf(school.json()).dump());

    auto rank = run_cli({"--acreduce", "rank", "solve", "acyclic", "--expr", c6.string()});
    auto off = run_cli({"--acreduce", "off", "solve", "acyclic", "--expr", c6.string()});
    CHECK(strip_perf(rank.json()).dump() == strip_perf(off.json()).dump());

    auto threads = run_cli({"--threads", "4", "solve", "induced", "--expr", c6.string()});
    CHECK(strip_perf(threads.json()).dump() == strip_perf(a.json()).dump());
}

TEST_CASE("oracle subcommands") {
    fs::path c4 = write_file("c4.json", R"({"n":4,"edges":[[1,2],[2,3],[3,4],[1,4]]})");
    auto acyclic = run_cli({"oracle", "acyclic", "--graph", c4.string()});
    REQUIRE(acyclic.exit_code == 0);
    CHECK(acyclic.json().at("max_matching_size") == 1);
    CHECK(acyclic.json().at("witness").size() == 1);

    auto induced = run_cli({"oracle", "induced", "--graph", c4.string()});
    REQUIRE(induced.exit_code == 0);
    CHECK(induced.json().at("counts") == Json::array({"1", "4", "0"}));
    CHECK(induced.json().at("max_size") == 1);

    // limits: refusal is exit 3, raising them admits the instance
    std::string big = R"({"n":18,"edges":[)";
    bool first = true;
    for (int u = 1; u <= 18; ++u) {
        for (int v = u + 1; v <= 18; ++v) {
            if (!first) big += ",";
            first = false;
            big += "[" + std::to_string(u) + "," + std::to_string(v) + "]";
        }
    }
    big += "]}";
    fs::path k18 = write_file("k18.json", big);
    auto refused = run_cli({"oracle", "induced", "--graph", k18.string()});
    CHECK(refused.exit_code == 3);
    CHECK(refused.json().at("kind") == "limit");
    auto admitted = run_cli({"oracle", "induced", "--graph", k18.string(), "--limit-n", "18"});
    CHECK(admitted.exit_code == 0);
    CHECK(admitted.json().at("max_size") == 1);
}

TEST_CASE("expr subcommands") {
    fs::path bad = write_file("bad.cwe", "(eta 1 2 (eta 1 2 (oplus (v 1) (v 2))))");
    auto check = run_cli({"expr", "check", "--expr", bad.string()});
    CHECK(check.exit_code == 2);
    CHECK(check.json().at("irredundant") == false);
    CHECK(check.json().at("violation").contains("line"));

    auto normalized = run_cli({"expr", "normalize", "--expr", bad.string()});
    REQUIRE(normalized.exit_code == 0);
    CHECK(normalized.json().at("expr") == "(eta 1 2 (oplus (v 1) (v 2)))");

    fs::path k2 = write_file("k2.cwe", "(eta 1 2 (oplus (v 1) (v 2)))");
    auto good = run_cli({"expr", "check", "--expr", k2.string()});
    CHECK(good.exit_code == 0);
    CHECK(good.json().at("irredundant") == true);

    auto eval = run_cli({"expr", "eval", "--expr", k2.string()});
    REQUIRE(eval.exit_code == 0);
    CHECK(eval.json().at("graph").at("n") == 2);
    CHECK(eval.json().at("labels") == Json::array({1, 2}));

    // solving a redundant expression is an input error
    auto solve_bad = run_cli({"solve", "induced", "--expr", bad.string()});
    CHECK(solve_bad.exit_code == 2);
    CHECK(solve_bad.json().at("kind") == "input");
}

TEST_CASE("gen gadget") {
    fs::path cspf = write_file("one_var.json",
                               R"({"B":3,"vars":[{"id":1,"class":1}],"bags":[[1]],"constraints":[]})");
    auto g = run_cli({"gen", "gadget", "--kind", "induced", "--csp", cspf.string()});
    REQUIRE(g.exit_code == 0);
    Json j = g.json();
    CHECK(j.at("graph").at("n") == 4);
    CHECK(j.at("ell") == 1);
    CHECK(j.at("kind") == "induced");
    CHECK(j.at("ordering") == Json::array({1, 2, 3, 4}));

    fs::path csp5 = write_file("one_var5.json",
                               R"({"B":5,"vars":[{"id":1,"class":1}],"bags":[[1]],"constraints":[]})");
    auto a = run_cli({"gen", "gadget", "--kind", "acyclic", "--csp", csp5.string()});
    REQUIRE(a.exit_code == 0);
    CHECK(a.json().at("graph").at("n") == 20);
    CHECK(a.json().at("ell") == 7);
    CHECK_FALSE(a.json().contains("ordering"));

    auto wrong = run_cli({"gen", "gadget", "--kind", "acyclic", "--csp", cspf.string()});
    CHECK(wrong.exit_code == 2);
}

TEST_CASE("gen random respects the global seed and determinism") {
    auto a = run_cli({"--seed", "9", "gen", "random", "--width", "3", "--ops", "7"});
    auto b = run_cli({"gen", "random", "--width", "3", "--ops", "7", "--seed", "9"});
    CHECK(a.json().at("expr") == b.json().at("expr"));
    auto c = run_cli({"gen", "random", "--width", "3", "--ops", "7", "--seed", "10"});
    CHECK(a.json().at("expr") != c.json().at("expr"));
}

TEST_CASE("bench") {
    fs::path p6 = temp_dir() / "p6.cwe";
    run_cli({"gen", "family", "--kind", "path", "--n", "6", "--out", p6.string()});
    fs::path suite = write_file("suite.json",
                                R"({"repeat":2,"items":[{"kind":"induced","expr":"p6.cwe"},)"
                                R"({"kind":"acyclic","expr":"p6.cwe"}]})");
    auto r = run_cli({"bench", "--suite", suite.string()});
    REQUIRE(r.exit_code == 0);
    Json j = r.json();
    REQUIRE(j.at("results").size() == 2);
    CHECK(j.at("results").at(0).at("ms").size() == 2);
    CHECK(j.at("results").at(0).at("answer").at("counts") == Json::array({"1", "5", "3", "0"}));
    CHECK(j.at("results").at(1).at("answer").at("max_matching_size") == 3);
}

TEST_CASE("usage errors") {
    auto unknown = run_cli({"frobnicate"});
    CHECK(unknown.exit_code == 2);
    CHECK_FALSE(unknown.err.empty());

    auto missing = run_cli({"solve", "induced", "--expr", "/nonexistent/file.cwe"});
    CHECK(missing.exit_code == 2);

    auto help = run_cli({"--help"});
    CHECK(help.exit_code == 0);
    CHECK(help.out.find("solve") != std::string::npos);
}

TEST_CASE("graph, matching, and csp JSON round trips") {
    Graph g(4);
    g.add_edge(1, 2);
    g.add_edge(3, 4);
    g.set_weight(2, 7);
    g.set_name(1, "x1/bag1/p1");
    Graph back = graph_from_json(graph_to_json(g));
    CHECK(back.n() == 4);
    CHECK(back.edges() == g.edges());
    CHECK(back.weight(2) == 7);
    CHECK(back.weight(3) == 1);
    REQUIRE(back.name(1));
    CHECK(*back.name(1) == "x1/bag1/p1");

    Matching m{{{1, 2}, {3, 4}}};
    CHECK(matching_from_json(matching_to_json(m)).edges == m.edges);

    CspInstance c;
    c.alphabet = 3;
    c.vars = {{1, 1}, {2, 2}};
    c.bags = {{1}, {1, 2}};
    c.constraints = {{{1, 2}, {{1, 2}, {2, 1}}, 2}};
    CspInstance cback = csp_from_json(csp_to_json(c));
    CHECK(cback.alphabet == 3);
    CHECK(cback.vars.size() == 2);
    CHECK(cback.bags == c.bags);
    REQUIRE(cback.constraints.size() == 1);
    CHECK(cback.constraints[0].allowed == c.constraints[0].allowed);
    CHECK(cback.constraints[0].bag == 2);

    CHECK_THROWS_AS(graph_from_json(parse_json_text(R"({"edges":[[1,2]]})")), input_error);
    CHECK_THROWS_AS(graph_from_json(parse_json_text(R"({"n":2,"edges":[[1]]})")), input_error);
    CHECK_THROWS_AS(graph_from_json(parse_json_text(R"({"n":2,"edges":[[1,3]]})")), input_error);
    CHECK_THROWS_AS(parse_json_text("{nope"), input_error);
}

TEST_CASE("normalize errors map to exit 2") {
    fs::path partial = write_file("partial.cwe",
                                  "(eta 1 2 (oplus (rho 3 1 (eta 3 2 (oplus (v 3) (v 2)))) (v 1)))");
    auto r = run_cli({"expr", "normalize", "--expr", partial.string()});
    CHECK(r.exit_code == 2);
    CHECK(r.json().at("kind") == "input");

    fs::path empty_join = write_file("empty_join.cwe", "(eta 1 3 (oplus (v 1) (v 2)))");
    auto ok = run_cli({"expr", "normalize", "--expr", empty_join.string()});
    REQUIRE(ok.exit_code == 0);
    CHECK(ok.json().at("expr") == "(oplus (v 1) (v 2))");  // vacuous join stripped
}

TEST_CASE("json indent flag changes formatting only") {
    fs::path p4 = temp_dir() / "p4.cwe";
    run_cli({"gen", "family", "--kind", "path", "--n", "4", "--out", p4.string()});
    auto flat = run_cli({"solve", "induced", "--expr", p4.string()});
    auto pretty = run_cli({"--json-indent", "solve", "induced", "--expr", p4.string()});
    CHECK(flat.out != pretty.out);
    CHECK(strip_perf(flat.json()) == strip_perf(pretty.json()));
    CHECK(flat.json().at("counts") == Json::array({"1", "3", "0"}));
}
