#include "cwmatch/gadgets.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace cwmatch {

VertexId GadgetInstance::handle(const std::string& role) const {
    auto it = handles.find(role);
    if (it == handles.end()) throw internal_error("gadget instance has no vertex role '" + role + "'");
    return it->second;
}

namespace {

struct GraphBuilder {
    int next_id = 0;
    std::vector<Edge> edges;
    std::map<VertexId, std::string> names;
    std::map<std::string, VertexId> handles;

    VertexId vertex(const std::string& primary_role) {
        VertexId v = ++next_id;
        names[v] = primary_role;
        handles[primary_role] = v;
        return v;
    }
    void alias(const std::string& role, VertexId v) { handles[role] = v; }
    void edge(VertexId u, VertexId v) { edges.emplace_back(std::min(u, v), std::max(u, v)); }

    Graph finish() const {
        Graph g(next_id);
        for (const auto& [u, v] : edges) g.add_edge(u, v);
        for (const auto& [v, nm] : names) g.set_name(v, nm);
        return g;
    }
};

std::string block_role(int var, int bag, const std::string& part) {
    return "x" + std::to_string(var) + "/bag" + std::to_string(bag) + "/" + part;
}

std::string tuple_text(const std::vector<int>& tuple) {
    std::ostringstream out;
    out << "sigma(";
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (i) out << ",";
        out << tuple[i];
    }
    out << ")";
    return out.str();
}

std::string constraint_role(int idx, const std::string& part) {
    return "c" + std::to_string(idx) + "/" + part;
}

void require_valid(const CspInstance& c, int expected_alphabet, const char* kind) {
    auto validation = validate_csp(c);
    if (!validation.ok()) {
        std::string msg = "invalid CSP instance:";
        for (const auto& v : validation.violations) msg += "\n  - " + v;
        throw input_error(msg);
    }
    if (c.alphabet != expected_alphabet) {
        throw input_error(std::string(kind) + " gadget requires alphabet size " +
                          std::to_string(expected_alphabet) + ", got " + std::to_string(c.alphabet));
    }
}

// Satisfying tuples in lexicographic order, deduplicated.
std::vector<std::vector<int>> sorted_tuples(const CspConstraint& con) {
    auto tuples = con.allowed;
    std::sort(tuples.begin(), tuples.end());
    tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
    return tuples;
}

std::vector<int> sorted_var_ids(const CspInstance& c) {
    std::vector<int> ids;
    for (const auto& v : c.vars) ids.push_back(v.id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace

GadgetInstance gen_induced_instance(const CspInstance& c) {
    require_valid(c, 3, "induced");
    GraphBuilder b;
    std::uint64_t blocks_v1 = 0, blocks_v2 = 0;

    for (int id : sorted_var_ids(c)) {
        const CspVariable& var = *c.find_var(id);
        auto occ = c.bags_of(id);
        for (std::size_t t = 0; t < occ.size(); ++t) {
            int j = occ[t];
            if (var.cls == 1) {
                ++blocks_v1;
                VertexId p1;
                if (t == 0) {
                    p1 = b.vertex(block_role(id, j, "p1"));
                } else {
                    p1 = b.handles.at(block_role(id, occ[t - 1], "p4"));
                    b.alias(block_role(id, j, "p1"), p1);
                }
                VertexId p2 = b.vertex(block_role(id, j, "p2"));
                VertexId p3 = b.vertex(block_role(id, j, "p3"));
                VertexId p4 = b.vertex(block_role(id, j, "p4"));
                b.edge(p1, p2);
                b.edge(p2, p3);
                b.edge(p3, p4);
            } else {
                ++blocks_v2;
                VertexId p = b.vertex(block_role(id, j, "p"));
                std::array<VertexId, 4> pk{0, 0, 0, 0};
                for (int k = 1; k <= 3; ++k) {
                    pk[static_cast<std::size_t>(k)] = b.vertex(block_role(id, j, "p" + std::to_string(k)));
                }
                // 4-clique on {p, p1, p2, p3}
                b.edge(p, pk[1]);
                b.edge(p, pk[2]);
                b.edge(p, pk[3]);
                b.edge(pk[1], pk[2]);
                b.edge(pk[1], pk[3]);
                b.edge(pk[2], pk[3]);
                if (t > 0) {
                    for (int k = 1; k <= 3; ++k) {
                        VertexId prev = b.handles.at(block_role(id, occ[t - 1], "p" + std::to_string(k)));
                        for (int l = 1; l <= 3; ++l) {
                            if (l == k) continue;
                            b.edge(prev, pk[static_cast<std::size_t>(l)]);
                        }
                    }
                }
            }
        }
    }

    for (std::size_t q = 0; q < c.constraints.size(); ++q) {
        const auto& con = c.constraints[static_cast<std::size_t>(q)];
        int ci = static_cast<int>(q) + 1;
        int j = con.bag;
        std::vector<VertexId> clique;
        for (const auto& tuple : sorted_tuples(con)) {
            VertexId y = b.vertex(constraint_role(ci, tuple_text(tuple) + "/y"));
            clique.push_back(y);
            for (std::size_t a = 0; a < con.vars.size(); ++a) {
                int vid = con.vars[a];
                int val = tuple[a];
                const CspVariable& var = *c.find_var(vid);
                if (var.cls == 1) {
                    switch (val) {
                        case 1: b.edge(y, b.handles.at(block_role(vid, j, "p3"))); break;
                        case 2:
                            b.edge(y, b.handles.at(block_role(vid, j, "p1")));
                            b.edge(y, b.handles.at(block_role(vid, j, "p4")));
                            break;
                        case 3: b.edge(y, b.handles.at(block_role(vid, j, "p2"))); break;
                        default: throw input_error("induced gadget: value outside [1,3]");
                    }
                } else {
                    for (int k = 1; k <= 3; ++k) {
                        if (k == val) continue;
                        b.edge(y, b.handles.at(block_role(vid, j, "p" + std::to_string(k))));
                    }
                }
            }
        }
        VertexId w = b.vertex(constraint_role(ci, "w"));
        for (VertexId y : clique) b.edge(w, y);
        for (std::size_t x = 0; x < clique.size(); ++x) {
            for (std::size_t y = x + 1; y < clique.size(); ++y) b.edge(clique[x], clique[y]);
        }
    }

    GadgetInstance inst;
    inst.graph = b.finish();
    inst.kind = "induced";
    inst.ell = blocks_v1 + blocks_v2 + c.constraints.size();
    inst.handles = b.handles;

    // Bag-by-bag arrangement: each bag's variable blocks (V1 consecutively
    // p1..p4, V2 in id order), then the bag's constraint gadget in id order.
    LinearArrangement arr;
    std::vector<char> placed(static_cast<std::size_t>(inst.graph.n()) + 1, 0);
    auto place = [&](VertexId v) {
        if (!placed[static_cast<std::size_t>(v)]) {
            placed[static_cast<std::size_t>(v)] = 1;
            arr.order.push_back(v);
        }
    };
    for (int j = 1; j <= static_cast<int>(c.bags.size()); ++j) {
        auto bag = c.bags[static_cast<std::size_t>(j) - 1];
        std::sort(bag.begin(), bag.end());
        for (int id : bag) {
            const CspVariable& var = *c.find_var(id);
            if (var.cls == 1) {
                for (const char* part : {"p1", "p2", "p3", "p4"}) {
                    place(inst.handles.at(block_role(id, j, part)));
                }
            } else {
                std::vector<VertexId> vs;
                for (const char* part : {"p", "p1", "p2", "p3"}) {
                    vs.push_back(inst.handles.at(block_role(id, j, part)));
                }
                std::sort(vs.begin(), vs.end());
                for (VertexId v : vs) place(v);
            }
        }
        for (std::size_t q = 0; q < c.constraints.size(); ++q) {
            if (c.constraints[q].bag != j) continue;
            int ci = static_cast<int>(q) + 1;
            std::vector<VertexId> vs;
            vs.push_back(inst.handles.at(constraint_role(ci, "w")));
            for (const auto& tuple : sorted_tuples(c.constraints[q])) {
                vs.push_back(inst.handles.at(constraint_role(ci, tuple_text(tuple) + "/y")));
            }
            std::sort(vs.begin(), vs.end());
            for (VertexId v : vs) place(v);
        }
    }
    if (static_cast<int>(arr.order.size()) != inst.graph.n()) {
        throw internal_error("induced gadget arrangement misses vertices");
    }
    inst.ordering = std::move(arr);
    return inst;
}

GadgetInstance gen_acyclic_instance(const CspInstance& c) {
    require_valid(c, 5, "acyclic");
    GraphBuilder b;
    std::uint64_t xor_count = 0, blocks_v1 = 0, blocks_v2 = 0;
    std::vector<Edge> xor_pairs;

    auto xor_connect = [&](VertexId v1, VertexId v2) {
        ++xor_count;
        std::string tag = "xor" + std::to_string(xor_count);
        VertexId q1 = b.vertex(tag + "/p1");
        VertexId q2 = b.vertex(tag + "/p2");
        b.edge(v1, v2);
        b.edge(v1, q1);
        b.edge(q1, q2);
        b.edge(q2, v2);
        xor_pairs.emplace_back(q1, q2);
    };

    VertexId root = b.vertex("root");
    VertexId root_leaf = b.vertex("root_leaf");
    b.edge(root, root_leaf);

    for (int id : sorted_var_ids(c)) {
        const CspVariable& var = *c.find_var(id);
        auto occ = c.bags_of(id);
        for (std::size_t t = 0; t < occ.size(); ++t) {
            int j = occ[t];
            if (var.cls == 1) {
                ++blocks_v1;
                VertexId a;
                if (t == 0) {
                    a = b.vertex(block_role(id, j, "a"));
                } else {
                    a = b.handles.at(block_role(id, occ[t - 1], "aprime"));
                    b.alias(block_role(id, j, "a"), a);
                }
                VertexId aprime = b.vertex(block_role(id, j, "aprime"));
                VertexId chi1 = b.vertex(block_role(id, j, "chi1"));
                VertexId chi2 = b.vertex(block_role(id, j, "chi2"));
                VertexId y1 = b.vertex(block_role(id, j, "y1"));
                VertexId y2 = b.vertex(block_role(id, j, "y2"));
                VertexId b1 = b.vertex(block_role(id, j, "b1"));
                VertexId b2 = b.vertex(block_role(id, j, "b2"));
                VertexId l1 = b.vertex(block_role(id, j, "l1"));
                VertexId l2 = b.vertex(block_role(id, j, "l2"));
                b.edge(chi1, l1);
                b.edge(chi2, l2);
                b.edge(a, chi1);
                b.edge(a, y1);
                b.edge(aprime, chi2);
                b.edge(aprime, y2);
                b.edge(root, chi1);
                b.edge(root, chi2);
                b.edge(b1, b2);
                xor_connect(a, b1);
                xor_connect(aprime, b2);
                xor_connect(chi1, chi2);
                xor_connect(y1, y2);
            } else {
                ++blocks_v2;
                VertexId u = b.vertex(block_role(id, j, "u"));
                std::array<VertexId, 6> uk{};
                for (int k = 1; k <= 5; ++k) {
                    uk[static_cast<std::size_t>(k)] = b.vertex(block_role(id, j, "u" + std::to_string(k)));
                    b.edge(u, uk[static_cast<std::size_t>(k)]);
                }
                for (int k1 = 1; k1 <= 5; ++k1) {
                    for (int k2 = k1 + 1; k2 <= 5; ++k2) {
                        xor_connect(uk[static_cast<std::size_t>(k1)], uk[static_cast<std::size_t>(k2)]);
                    }
                }
                if (t > 0) {
                    for (int k1 = 1; k1 <= 5; ++k1) {
                        VertexId prev = b.handles.at(block_role(id, occ[t - 1], "u" + std::to_string(k1)));
                        for (int k2 = 1; k2 <= 5; ++k2) {
                            if (k2 == k1) continue;
                            xor_connect(prev, uk[static_cast<std::size_t>(k2)]);
                        }
                    }
                }
            }
        }
    }

    for (std::size_t q = 0; q < c.constraints.size(); ++q) {
        const auto& con = c.constraints[q];
        int ci = static_cast<int>(q) + 1;
        int j = con.bag;
        std::vector<VertexId> tuple_vertices;
        for (const auto& tuple : sorted_tuples(con)) {
            VertexId v = b.vertex(constraint_role(ci, tuple_text(tuple) + "/v"));
            for (VertexId prev : tuple_vertices) xor_connect(prev, v);
            tuple_vertices.push_back(v);
            for (std::size_t a = 0; a < con.vars.size(); ++a) {
                int vid = con.vars[a];
                int val = tuple[a];
                const CspVariable& var = *c.find_var(vid);
                if (var.cls == 1) {
                    std::vector<const char*> targets;
                    switch (val) {
                        case 1: targets = {"b1", "b2", "chi2", "y2"}; break;
                        case 2: targets = {"b1", "b2", "chi1", "y2"}; break;
                        case 3: targets = {"a", "aprime", "y1", "y2"}; break;
                        case 4: targets = {"b1", "b2", "chi2", "y1"}; break;
                        case 5: targets = {"b1", "b2", "chi1", "y1"}; break;
                        default: throw input_error("acyclic gadget: value outside [1,5]");
                    }
                    for (const char* part : targets) {
                        xor_connect(v, b.handles.at(block_role(vid, j, part)));
                    }
                } else {
                    for (int k = 1; k <= 5; ++k) {
                        if (k == val) continue;
                        xor_connect(v, b.handles.at(block_role(vid, j, "u" + std::to_string(k))));
                    }
                }
            }
        }
        VertexId vc = b.vertex(constraint_role(ci, "v"));
        for (VertexId tv : tuple_vertices) b.edge(vc, tv);
    }

    GadgetInstance inst;
    inst.graph = b.finish();
    inst.kind = "acyclic";
    inst.ell = 1 + xor_count + 2 * blocks_v1 + blocks_v2 + c.constraints.size();
    inst.handles = b.handles;
    inst.xor_pairs = std::move(xor_pairs);
    return inst;
}

namespace {

std::vector<int> restrict_assignment(const CspConstraint& con, const std::map<int, int>& assignment) {
    std::vector<int> tuple;
    for (int id : con.vars) {
        auto it = assignment.find(id);
        if (it == assignment.end()) {
            throw input_error("witness: assignment misses variable " + std::to_string(id));
        }
        tuple.push_back(it->second);
    }
    return tuple;
}

}  // namespace

Matching induced_witness(const GadgetInstance& inst, const CspInstance& c,
                         const std::map<int, int>& assignment) {
    Matching m;
    for (int id : sorted_var_ids(c)) {
        const CspVariable& var = *c.find_var(id);
        int val = assignment.at(id);
        for (int j : c.bags_of(id)) {
            if (var.cls == 1) {
                VertexId u = inst.handle(block_role(id, j, "p" + std::to_string(val)));
                VertexId v = inst.handle(block_role(id, j, "p" + std::to_string(val + 1)));
                m.edges.emplace_back(std::min(u, v), std::max(u, v));
            } else {
                VertexId u = inst.handle(block_role(id, j, "p"));
                VertexId v = inst.handle(block_role(id, j, "p" + std::to_string(val)));
                m.edges.emplace_back(std::min(u, v), std::max(u, v));
            }
        }
    }
    for (std::size_t q = 0; q < c.constraints.size(); ++q) {
        const auto& con = c.constraints[q];
        auto tuple = restrict_assignment(con, assignment);
        auto tuples = sorted_tuples(con);
        if (std::find(tuples.begin(), tuples.end(), tuple) == tuples.end()) {
            throw input_error("witness: assignment does not satisfy constraint " + std::to_string(q + 1));
        }
        int ci = static_cast<int>(q) + 1;
        VertexId y = inst.handle(constraint_role(ci, tuple_text(tuple) + "/y"));
        VertexId w = inst.handle(constraint_role(ci, "w"));
        m.edges.emplace_back(std::min(y, w), std::max(y, w));
    }
    return m;
}

Matching acyclic_witness(const GadgetInstance& inst, const CspInstance& c,
                         const std::map<int, int>& assignment) {
    Matching m;
    m.edges.emplace_back(std::min(inst.handle("root"), inst.handle("root_leaf")),
                         std::max(inst.handle("root"), inst.handle("root_leaf")));
    for (const auto& [q1, q2] : inst.xor_pairs) m.edges.emplace_back(q1, q2);

    auto add = [&](VertexId u, VertexId v) {
        m.edges.emplace_back(std::min(u, v), std::max(u, v));
    };
    for (int id : sorted_var_ids(c)) {
        const CspVariable& var = *c.find_var(id);
        int val = assignment.at(id);
        for (int j : c.bags_of(id)) {
            if (var.cls == 2) {
                add(inst.handle(block_role(id, j, "u")),
                    inst.handle(block_role(id, j, "u" + std::to_string(val))));
                continue;
            }
            switch (val) {
                case 1:
                    add(inst.handle(block_role(id, j, "y1")), inst.handle(block_role(id, j, "a")));
                    add(inst.handle(block_role(id, j, "chi1")), inst.handle(block_role(id, j, "l1")));
                    break;
                case 2:
                    add(inst.handle(block_role(id, j, "y1")), inst.handle(block_role(id, j, "a")));
                    add(inst.handle(block_role(id, j, "chi2")), inst.handle(block_role(id, j, "l2")));
                    break;
                case 3:
                    add(inst.handle(block_role(id, j, "b1")), inst.handle(block_role(id, j, "b2")));
                    add(inst.handle(block_role(id, j, "chi1")), inst.handle(block_role(id, j, "l1")));
                    break;
                case 4:
                    add(inst.handle(block_role(id, j, "y2")), inst.handle(block_role(id, j, "aprime")));
                    add(inst.handle(block_role(id, j, "chi1")), inst.handle(block_role(id, j, "l1")));
                    break;
                case 5:
                    add(inst.handle(block_role(id, j, "y2")), inst.handle(block_role(id, j, "aprime")));
                    add(inst.handle(block_role(id, j, "chi2")), inst.handle(block_role(id, j, "l2")));
                    break;
                default:
                    throw input_error("witness: value outside [1,5]");
            }
        }
    }
    for (std::size_t q = 0; q < c.constraints.size(); ++q) {
        const auto& con = c.constraints[q];
        auto tuple = restrict_assignment(con, assignment);
        auto tuples = sorted_tuples(con);
        if (std::find(tuples.begin(), tuples.end(), tuple) == tuples.end()) {
            throw input_error("witness: assignment does not satisfy constraint " + std::to_string(q + 1));
        }
        int ci = static_cast<int>(q) + 1;
        add(inst.handle(constraint_role(ci, "v")),
            inst.handle(constraint_role(ci, tuple_text(tuple) + "/v")));
    }
    return m;
}

}  // namespace cwmatch
