#include "cwmatch/json_io.hpp"

#include <fstream>
#include <sstream>

namespace cwmatch {

Json graph_to_json(const Graph& g) {
    Json j;
    j["n"] = g.n();
    Json edges = Json::array();
    for (const auto& [u, v] : g.edges()) edges.push_back(Json::array({u, v}));
    j["edges"] = std::move(edges);
    Json weights = Json::object();
    for (VertexId v = 1; v <= g.n(); ++v) {
        if (g.weight(v) != 1) weights[std::to_string(v)] = g.weight(v);
    }
    if (!weights.empty()) j["weights"] = std::move(weights);
    if (!g.names().empty()) {
        Json names = Json::object();
        for (const auto& [v, nm] : g.names()) names[std::to_string(v)] = nm;
        j["names"] = std::move(names);
    }
    return j;
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw input_error("json: " + what); }

int as_int(const Json& j, const char* what) {
    if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
    return j.get<int>();
}

}  // namespace

Graph graph_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("n")) bad("graph object needs field 'n'");
    Graph g(as_int(j.at("n"), "n"));
    if (j.contains("edges")) {
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) bad("edge must be a pair [u, v]");
            g.add_edge(as_int(e.at(0), "edge endpoint"), as_int(e.at(1), "edge endpoint"));
        }
    }
    if (j.contains("weights")) {
        for (const auto& [key, val] : j.at("weights").items()) {
            g.set_weight(std::stoi(key), val.get<std::uint64_t>());
        }
    }
    if (j.contains("names")) {
        for (const auto& [key, val] : j.at("names").items()) {
            g.set_name(std::stoi(key), val.get<std::string>());
        }
    }
    return g;
}

Json matching_to_json(const Matching& m) {
    Json edges = Json::array();
    for (const auto& [u, v] : m.edges) edges.push_back(Json::array({u, v}));
    Json j;
    j["edges"] = std::move(edges);
    return j;
}

Matching matching_from_json(const Json& j) {
    Matching m;
    if (!j.is_object() || !j.contains("edges")) bad("matching object needs field 'edges'");
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) bad("matching edge must be a pair [u, v]");
        int u = as_int(e.at(0), "endpoint"), v = as_int(e.at(1), "endpoint");
        m.edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    return m;
}

CspInstance csp_from_json(const Json& j) {
    CspInstance c;
    if (!j.is_object()) bad("csp must be an object");
    c.alphabet = as_int(j.at("B"), "B");
    for (const auto& v : j.at("vars")) {
        CspVariable var;
        var.id = as_int(v.at("id"), "var id");
        var.cls = as_int(v.at("class"), "var class");
        c.vars.push_back(var);
    }
    for (const auto& bag : j.at("bags")) {
        std::vector<int> ids;
        for (const auto& id : bag) ids.push_back(as_int(id, "bag entry"));
        c.bags.push_back(std::move(ids));
    }
    if (j.contains("constraints")) {
        for (const auto& con : j.at("constraints")) {
            CspConstraint cc;
            for (const auto& id : con.at("vars")) cc.vars.push_back(as_int(id, "constraint var"));
            for (const auto& tuple : con.at("allowed")) {
                std::vector<int> t;
                for (const auto& val : tuple) t.push_back(as_int(val, "allowed value"));
                cc.allowed.push_back(std::move(t));
            }
            cc.bag = as_int(con.at("bag"), "constraint bag");
            c.constraints.push_back(std::move(cc));
        }
    }
    return c;
}

Json csp_to_json(const CspInstance& c) {
    Json j;
    j["B"] = c.alphabet;
    Json vars = Json::array();
    for (const auto& v : c.vars) vars.push_back(Json{{"id", v.id}, {"class", v.cls}});
    j["vars"] = std::move(vars);
    Json bags = Json::array();
    for (const auto& bag : c.bags) bags.push_back(bag);
    j["bags"] = std::move(bags);
    Json cons = Json::array();
    for (const auto& con : c.constraints) {
        Json cj;
        cj["vars"] = con.vars;
        cj["allowed"] = con.allowed;
        cj["bag"] = con.bag;
        cons.push_back(std::move(cj));
    }
    j["constraints"] = std::move(cons);
    return j;
}

Json gadget_to_json(const GadgetInstance& inst) {
    Json j;
    j["graph"] = graph_to_json(inst.graph);
    j["ell"] = inst.ell;
    j["kind"] = inst.kind;
    if (inst.ordering) j["ordering"] = inst.ordering->order;
    return j;
}

Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("json parse error: ") + e.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace cwmatch
