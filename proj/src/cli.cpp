#include "cwmatch/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cwmatch/acyclic.hpp"
#include "cwmatch/cwexpr.hpp"
#include "cwmatch/graph.hpp"
#include "cwmatch/induced.hpp"
#include "cwmatch/json_io.hpp"

namespace cwmatch {

namespace {

struct GlobalOpts {
    std::string convolution = "auto";
    std::string acreduce = "off";
    int max_width = 20;
    int threads = 1;
    std::uint64_t seed = 1;
    bool json_indent = false;
    int oracle_limit_n = 16;
    int oracle_limit_bits = 24;
};

std::string digest_hex(const std::string& data) {
    std::ostringstream ss;
    ss << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(data);
    return ss.str();
}

Json input_block(const std::string& path, const std::string& content) {
    Json j;
    j["path"] = path;
    j["digest"] = digest_hex(content);
    return j;
}

Json perf_block(const NodeStats& stats, double total_ms) {
    Json perf;
    perf["total_ms"] = total_ms;
    perf["singleton_ms"] = stats.singleton_ms;
    perf["join_ms"] = stats.join_ms;
    perf["relabel_ms"] = stats.relabel_ms;
    perf["union_ms"] = stats.union_ms;
    perf["peak_table_entries"] = stats.peak_table_entries;
    return perf;
}

void emit(std::ostream& out, const Json& j, const GlobalOpts& g) {
    if (g.json_indent) {
        out << j.dump(2) << "\n";
    } else {
        out << j.dump() << "\n";
    }
}

InducedSolveOptions induced_opts(const GlobalOpts& g) {
    InducedSolveOptions o;
    o.conv.backend = conv_backend_from_string(g.convolution);
    o.max_width = g.max_width;
    o.threads = g.threads;
    return o;
}

AcyclicSolveOptions acyclic_opts(const GlobalOpts& g) {
    AcyclicSolveOptions o;
    o.backend = acreduce_backend_from_string(g.acreduce);
    o.max_width = g.max_width;
    o.threads = g.threads;
    return o;
}

Json counts_to_json(const std::vector<mpz_class>& counts) {
    Json arr = Json::array();
    for (const auto& c : counts) arr.push_back(c.get_str());
    return arr;
}

int run_solve(const std::string& mode, const std::string& expr_path, const GlobalOpts& g,
              std::ostream& out) {
    std::string text = read_text_file(expr_path);
    CwExpr e = CwExpr::parse(text);
    Json j;
    j["command"] = "solve " + mode;
    j["input"] = input_block(expr_path, text);
    StopWatch sw;
    if (mode == "induced") {
        auto res = solve_counts(e, induced_opts(g));
        j["counts"] = counts_to_json(res.counts);
        j["max_size"] = res.max_size;
        j["perf"] = perf_block(res.stats, sw.elapsed_ms());
    } else {
        auto res = solve_max_acyclic(e, acyclic_opts(g));
        j["max_weight"] = res.max_weight;
        j["max_matching_size"] = res.max_matching_size;
        j["perf"] = perf_block(res.stats, sw.elapsed_ms());
    }
    emit(out, j, g);
    return 0;
}

int run_oracle(const std::string& mode, const std::string& graph_path, const GlobalOpts& g,
               std::ostream& out) {
    std::string text = read_text_file(graph_path);
    Graph graph = graph_from_json(parse_json_text(text));
    OracleLimits limits{g.oracle_limit_n, g.oracle_limit_bits};
    Json j;
    j["command"] = "oracle " + mode;
    j["input"] = input_block(graph_path, text);
    StopWatch sw;
    if (mode == "induced") {
        auto counts = count_induced_oracle(graph, limits);
        j["counts"] = counts_to_json(counts);
        int max_size = 0;
        for (std::size_t l = 0; l < counts.size(); ++l) {
            if (counts[l] > 0) max_size = static_cast<int>(l);
        }
        j["max_size"] = max_size;
    } else {
        auto res = max_acyclic_oracle(graph, limits);
        j["max_matching_size"] = res.max_size;
        j["witness"] = matching_to_json(res.witness)["edges"];
    }
    Json perf;
    perf["total_ms"] = sw.elapsed_ms();
    j["perf"] = std::move(perf);
    emit(out, j, g);
    return 0;
}

int run_expr(const std::string& mode, const std::string& expr_path, const GlobalOpts& g,
             std::ostream& out) {
    std::string text = read_text_file(expr_path);
    CwExpr e = CwExpr::parse(text);
    Json j;
    j["command"] = "expr " + mode;
    j["input"] = input_block(expr_path, text);
    if (mode == "check") {
        auto violation = check_irredundant(e);
        j["irredundant"] = !violation.has_value();
        if (violation) {
            j["violation"] = Json{{"label_i", violation->label_i},
                                  {"label_j", violation->label_j},
                                  {"line", violation->line},
                                  {"col", violation->col}};
        }
        emit(out, j, g);
        return violation ? 2 : 0;
    }
    if (mode == "normalize") {
        CwExpr n = normalize(e);
        j["expr"] = n.serialize();
        j["width"] = n.width();
        emit(out, j, g);
        return 0;
    }
    // eval
    LabeledGraph lg = evaluate(e);
    j["graph"] = graph_to_json(lg.graph);
    Json labels = Json::array();
    for (VertexId v = 1; v <= lg.graph.n(); ++v) labels.push_back(lg.label(v));
    j["labels"] = std::move(labels);
    j["width"] = lg.width;
    emit(out, j, g);
    return 0;
}

int run_gen_family(const std::string& kind, int n, const std::string& out_path, const GlobalOpts& g,
                   std::ostream& out) {
    auto fk = family_kind_from_string(kind);
    if (!fk) throw input_error("unknown family kind '" + kind + "'");
    CwExpr e = gen_family(*fk, n);
    std::string text = e.serialize();
    if (!out_path.empty()) {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw input_error("cannot write file '" + out_path + "'");
        f << text << "\n";
    }
    Json j;
    j["command"] = "gen family";
    j["expr"] = text;
    j["width"] = e.width();
    j["n"] = e.vertex_count();
    emit(out, j, g);
    return 0;
}

int run_gen_random(int width, int ops, std::uint64_t seed, const std::string& out_path,
                   const GlobalOpts& g, std::ostream& out) {
    CwExpr e = gen_random_expr(width, ops, seed);
    std::string text = e.serialize();
    if (!out_path.empty()) {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw input_error("cannot write file '" + out_path + "'");
        f << text << "\n";
    }
    Json j;
    j["command"] = "gen random";
    j["expr"] = text;
    j["width"] = e.width();
    j["n"] = e.vertex_count();
    j["seed"] = seed;
    emit(out, j, g);
    return 0;
}

int run_gen_gadget(const std::string& kind, const std::string& csp_path, const GlobalOpts& g,
                   std::ostream& out) {
    std::string text = read_text_file(csp_path);
    CspInstance c = csp_from_json(parse_json_text(text));
    GadgetInstance inst;
    if (kind == "induced") {
        inst = gen_induced_instance(c);
    } else if (kind == "acyclic") {
        inst = gen_acyclic_instance(c);
    } else {
        throw input_error("unknown gadget kind '" + kind + "'");
    }
    Json j = gadget_to_json(inst);
    j["command"] = "gen gadget";
    j["input"] = input_block(csp_path, text);
    emit(out, j, g);
    return 0;
}

int run_bench(const std::string& suite_path, const GlobalOpts& g, std::ostream& out) {
    std::string text = read_text_file(suite_path);
    Json suite = parse_json_text(text);
    int repeat = suite.value("repeat", 1);
    auto base = std::filesystem::path(suite_path).parent_path();
    Json results = Json::array();
    for (const auto& item : suite.at("items")) {
        std::string kind = item.at("kind").get<std::string>();
        std::string rel = item.at("expr").get<std::string>();
        std::filesystem::path p = base / rel;
        CwExpr e = CwExpr::parse(read_text_file(p.string()));
        Json r;
        r["expr"] = rel;
        r["kind"] = kind;
        Json ms = Json::array();
        Json answer;
        for (int it = 0; it < repeat; ++it) {
            StopWatch sw;
            if (kind == "induced") {
                auto res = solve_counts(e, induced_opts(g));
                answer = Json{{"counts", counts_to_json(res.counts)}, {"max_size", res.max_size}};
            } else if (kind == "acyclic") {
                auto res = solve_max_acyclic(e, acyclic_opts(g));
                answer = Json{{"max_weight", res.max_weight},
                              {"max_matching_size", res.max_matching_size}};
            } else {
                throw input_error("bench item kind must be 'induced' or 'acyclic'");
            }
            ms.push_back(sw.elapsed_ms());
        }
        r["answer"] = std::move(answer);
        r["ms"] = std::move(ms);
        results.push_back(std::move(r));
    }
    Json j;
    j["command"] = "bench";
    j["input"] = input_block(suite_path, text);
    j["results"] = std::move(results);
    emit(out, j, g);
    return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact solvers for induced and acyclic matching over clique-width expressions"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--convolution", g.convolution, "union-node backend: auto|ntt|schoolbook|check");
    app.add_option("--acreduce", g.acreduce, "acyclic reduction backend: off|rank");
    app.add_option("--max-width", g.max_width, "maximum accepted expression width");
    app.add_option("--threads", g.threads, "worker thread cap for the DP drivers");
    app.add_option("--seed", g.seed, "default seed for random generation");
    app.add_flag("--json-indent", g.json_indent, "pretty-print the JSON output");

    std::string expr_path, graph_path, csp_path, suite_path, out_path;
    std::string family_kind_s, gadget_kind;
    int family_n = 0;
    int rnd_width = 2, rnd_ops = 8;
    std::uint64_t rnd_seed = 0;
    bool rnd_seed_set = false;

    auto* solve = app.add_subcommand("solve", "run a DP solver on an expression");
    auto* solve_induced = solve->add_subcommand("induced", "count induced matchings of every size");
    solve_induced->add_option("--expr", expr_path, "clique-width expression file (.cwe)")->required();
    auto* solve_acyclic = solve->add_subcommand("acyclic", "maximum acyclic matching");
    solve_acyclic->add_option("--expr", expr_path, "clique-width expression file (.cwe)")->required();
    solve->require_subcommand(1);

    auto* oracle = app.add_subcommand("oracle", "brute-force reference on a graph JSON");
    auto* oracle_induced = oracle->add_subcommand("induced", "count induced matchings exhaustively");
    oracle_induced->add_option("--graph", graph_path, "graph JSON file")->required();
    auto* oracle_acyclic = oracle->add_subcommand("acyclic", "maximum acyclic matching exhaustively");
    oracle_acyclic->add_option("--graph", graph_path, "graph JSON file")->required();
    for (auto* sub : {oracle_induced, oracle_acyclic}) {
        sub->add_option("--limit-n", g.oracle_limit_n, "vertex-count admission limit");
        sub->add_option("--limit-bits", g.oracle_limit_bits, "edge-subset admission limit (log2)");
    }
    oracle->require_subcommand(1);

    auto* expr = app.add_subcommand("expr", "expression utilities");
    auto* expr_check = expr->add_subcommand("check", "verify irredundancy");
    auto* expr_normalize = expr->add_subcommand("normalize", "strip complete no-op joins");
    auto* expr_eval = expr->add_subcommand("eval", "evaluate to a labeled graph");
    for (auto* sub : {expr_check, expr_normalize, expr_eval}) {
        sub->add_option("--expr", expr_path, "clique-width expression file (.cwe)")->required();
    }
    expr->require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "generators");
    auto* gen_family_cmd = gen->add_subcommand("family", "expression of a named graph family");
    gen_family_cmd->add_option("--kind", family_kind_s,
                               "path|cycle|complete|complete_bipartite|star")->required();
    gen_family_cmd->add_option("--n", family_n, "vertex count")->required();
    gen_family_cmd->add_option("--out", out_path, "also write the .cwe text here");
    auto* gen_random_cmd = gen->add_subcommand("random", "seeded random irredundant expression");
    gen_random_cmd->add_option("--width", rnd_width, "label budget (>= 2)");
    gen_random_cmd->add_option("--ops", rnd_ops, "construction steps (>= 1)");
    gen_random_cmd->add_option("--seed", rnd_seed, "seed (defaults to global --seed)")
        ->each([&](const std::string&) { rnd_seed_set = true; });
    gen_random_cmd->add_option("--out", out_path, "also write the .cwe text here");
    auto* gen_gadget_cmd = gen->add_subcommand("gadget", "lower-bound instance from a CSP");
    gen_gadget_cmd->add_option("--kind", gadget_kind, "induced|acyclic")->required();
    gen_gadget_cmd->add_option("--csp", csp_path, "CSP JSON file")->required();
    gen->require_subcommand(1);

    auto* bench = app.add_subcommand("bench", "run a timing suite");
    bench->add_option("--suite", suite_path, "suite JSON file")->required();

    std::vector<const char*> argv;
    argv.push_back("cwmatch");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (solve_induced->parsed()) return run_solve("induced", expr_path, g, out);
        if (solve_acyclic->parsed()) return run_solve("acyclic", expr_path, g, out);
        if (oracle_induced->parsed()) return run_oracle("induced", graph_path, g, out);
        if (oracle_acyclic->parsed()) return run_oracle("acyclic", graph_path, g, out);
        if (expr_check->parsed()) return run_expr("check", expr_path, g, out);
        if (expr_normalize->parsed()) return run_expr("normalize", expr_path, g, out);
        if (expr_eval->parsed()) return run_expr("eval", expr_path, g, out);
        if (gen_family_cmd->parsed()) return run_gen_family(family_kind_s, family_n, out_path, g, out);
        if (gen_random_cmd->parsed()) {
            return run_gen_random(rnd_width, rnd_ops, rnd_seed_set ? rnd_seed : g.seed, out_path, g, out);
        }
        if (gen_gadget_cmd->parsed()) return run_gen_gadget(gadget_kind, csp_path, g, out);
        if (bench->parsed()) return run_bench(suite_path, g, out);
        err << app.help();
        return 2;
    } catch (const limit_error& e) {
        Json j;
        j["error"] = e.what();
        j["kind"] = "limit";
        emit(out, j, g);
        return 3;
    } catch (const input_error& e) {
        Json j;
        j["error"] = e.what();
        j["kind"] = "input";
        emit(out, j, g);
        return 2;
    }
}

}  // namespace cwmatch
