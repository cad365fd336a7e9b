#include <doctest.h>

#include "cwmatch/gadgets.hpp"
#include "fixtures.hpp"
#include "test_helpers.hpp"

using namespace cwmatch;
using namespace cwmatch::testing;

namespace {

int oracle_max_induced(const Graph& g, const OracleLimits& limits = {}) {
    auto counts = count_induced_oracle(g, limits);
    int best = 0;
    for (std::size_t l = 0; l < counts.size(); ++l) {
        if (counts[l] > 0) best = static_cast<int>(l);
    }
    return best;
}

}  // namespace

TEST_CASE("validate_csp catches shape violations") {
    CspInstance ok = csp(3, {{1, 1}, {2, 2}}, {{1}, {1, 2}}, {{{1, 2}, {{1, 1}}, 2}});
    CHECK(validate_csp(ok).ok());
    CHECK(validate_csp(ok).max_v2_per_bag == 1);

    CspInstance bad_nice = csp(3, {{1, 1}, {2, 1}, {3, 1}}, {{1}, {1, 2, 3}}, {});
    CHECK_FALSE(validate_csp(bad_nice).ok());

    CspInstance gap = csp(3, {{1, 1}, {2, 1}}, {{1}, {1, 2}, {1}, {1, 2}}, {});
    CHECK_FALSE(validate_csp(gap).ok());  // variable 2 interval not contiguous

    CspInstance outside = csp(3, {{1, 1}, {2, 1}}, {{1}, {1, 2}}, {{{2}, {{1}}, 1}});
    CHECK_FALSE(validate_csp(outside).ok());  // constraint var not in its bag

    CspInstance reuse = csp(3, {{1, 1}}, {{1}}, {{{1}, {{1}}, 1}, {{1}, {{2}}, 1}});
    CHECK_FALSE(validate_csp(reuse).ok());  // b not injective

    CspInstance big_arity = csp(3, {{1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}},
                                {{1, 2, 3, 4, 5}}, {{{1, 2, 3, 4, 5}, {}, 1}});
    CHECK_FALSE(validate_csp(big_arity).ok());

    CspInstance bad_value = csp(3, {{1, 1}}, {{1}}, {{{1}, {{7}}, 1}});
    CHECK_FALSE(validate_csp(bad_value).ok());
}

TEST_CASE("csp_brute_solve") {
    CspInstance pick2 = csp(3, {{1, 1}}, {{1}}, {{{1}, {{2}}, 1}});
    auto r = csp_brute_solve(pick2);
    CHECK(r.satisfiable);
    CHECK(r.assignment.at(1) == 2);

    CspInstance empty_allowed = csp(3, {{1, 1}}, {{1}}, {{{1}, {}, 1}});
    CHECK_FALSE(csp_brute_solve(empty_allowed).satisfiable);

    CspInstance diseq = csp(3, {{1, 1}, {2, 1}}, {{1, 2}},
                            {{{1, 2}, {{1, 2}, {1, 3}, {2, 1}, {2, 3}, {3, 1}, {3, 2}}, 1}});
    CHECK(csp_brute_solve(diseq).satisfiable);

    CspInstance huge = csp(3, std::vector<CspVariable>(20, {1, 1}), {{}}, {});
    for (int i = 0; i < 20; ++i) huge.vars[static_cast<std::size_t>(i)].id = i + 1;
    CHECK_THROWS_AS(csp_brute_solve(huge, 1000), limit_error);
}

TEST_CASE("single-block shapes: P4 and K4") {
    GadgetInstance p4 = gen_induced_instance(csp(3, {{1, 1}}, {{1}}, {}));
    CHECK(p4.graph.n() == 4);
    CHECK(p4.ell == 1);
    CHECK(p4.graph.edges() == make_path(4).edges());
    REQUIRE(p4.ordering.has_value());
    CHECK(p4.ordering->order == std::vector<VertexId>{1, 2, 3, 4});

    GadgetInstance k4 = gen_induced_instance(csp(3, {{1, 2}}, {{1}}, {}));
    CHECK(k4.graph.n() == 4);
    CHECK(k4.ell == 1);
    CHECK(k4.graph.edges() == make_complete(4).edges());
}

TEST_CASE("induced structural counts") {
    // a V1 variable over q bags contributes 3q + 1 vertices; x1 enters at bag
    // 1 and stays while companions arrive one per bag (niceness).
    for (int q = 1; q <= 4; ++q) {
        std::vector<CspVariable> vars;
        std::vector<std::vector<int>> bags;
        std::vector<int> cur;
        for (int i = 1; i <= q; ++i) {
            vars.push_back({i, 1});
            cur.push_back(i);
            bags.push_back(cur);
        }
        CspInstance c = csp(3, vars, bags, {});
        REQUIRE(validate_csp(c).ok());
        GadgetInstance g = gen_induced_instance(c);
        int v1_vertices = 0;
        for (const auto& [v, name] : g.graph.names()) {
            if (name.rfind("x1/", 0) == 0) ++v1_vertices;
        }
        CHECK(v1_vertices == 3 * q + 1);
    }
    // a V2 variable over q bags contributes 4q vertices and 6 + 10(q-1) edges
    GadgetInstance v2 = gen_induced_instance(csp(3, {{1, 2}, {2, 1}}, {{1}, {1, 2}}, {}));
    int v2_vertices = 0;
    for (const auto& [v, name] : v2.graph.names()) {
        if (name.rfind("x1/", 0) == 0) ++v2_vertices;
    }
    CHECK(v2_vertices == 8);
    int cross = 0, inner = 0;
    for (const auto& [u, v] : v2.graph.edges()) {
        const std::string* nu = v2.graph.name(u);
        const std::string* nv = v2.graph.name(v);
        if (nu->rfind("x1/bag1", 0) == 0 && nv->rfind("x1/bag2", 0) == 0) ++cross;
        if (nu->rfind("x1/bag2", 0) == 0 && nv->rfind("x1/bag1", 0) == 0) ++cross;
        if (nu->rfind("x1/bag1", 0) == 0 && nv->rfind("x1/bag1", 0) == 0) ++inner;
    }
    CHECK(cross == 6);  // p_k to the two differently indexed successors
    CHECK(inner == 6);  // the 4-clique
}

TEST_CASE("induced fixtures: soundness and completeness at oracle scale") {
    auto fixtures = induced_fixtures();
    CHECK(fixtures.size() >= 15);
    for (const auto& fx : fixtures) {
        CAPTURE(fx.name);
        REQUIRE(validate_csp(fx.csp).ok());
        auto solved = csp_brute_solve(fx.csp);
        CHECK(solved.satisfiable == fx.expect_satisfiable);
        GadgetInstance inst = gen_induced_instance(fx.csp);
        CHECK(inst.graph.n() <= 16);
        REQUIRE(inst.ordering.has_value());
        int best = oracle_max_induced(inst.graph);
        if (solved.satisfiable) {
            Matching w = induced_witness(inst, fx.csp, solved.assignment);
            CHECK(w.edges.size() == inst.ell);
            CHECK(is_induced_matching(inst.graph, w));
            CHECK(best >= static_cast<int>(inst.ell));
        } else {
            CHECK(best < static_cast<int>(inst.ell));
        }
    }
}

TEST_CASE("acyclic fixtures: soundness and completeness at oracle scale") {
    auto fixtures = acyclic_fixtures();
    CHECK(fixtures.size() >= 4);
    OracleLimits limits{24, 30};
    for (const auto& fx : fixtures) {
        CAPTURE(fx.name);
        REQUIRE(validate_csp(fx.csp).ok());
        auto solved = csp_brute_solve(fx.csp);
        CHECK(solved.satisfiable == fx.expect_satisfiable);
        GadgetInstance inst = gen_acyclic_instance(fx.csp);
        CHECK(inst.graph.n() <= 20);
        CHECK_FALSE(inst.ordering.has_value());
        auto best = max_acyclic_oracle(inst.graph, limits);
        if (solved.satisfiable) {
            Matching w = acyclic_witness(inst, fx.csp, solved.assignment);
            CHECK(w.edges.size() == inst.ell);
            CHECK(is_acyclic_matching(inst.graph, w));
            CHECK(best.max_size >= inst.ell);
        } else {
            CHECK(best.max_size < inst.ell);
        }
    }
}

TEST_CASE("acyclic 20-vertex block instance matches the hand count") {
    GadgetInstance inst = gen_acyclic_instance(csp(5, {{1, 1}}, {{1}}, {}));
    CHECK(inst.graph.n() == 20);  // 2 root + 8 block + 2 leaves + 8 XOR privates
    CHECK(inst.xor_pairs.size() == 4);
    CHECK(inst.ell == 1 + 4 + 2);
}

TEST_CASE("acyclic empty CSP is the single root edge") {
    GadgetInstance inst = gen_acyclic_instance(csp(5, {}, {{}}, {}));
    CHECK(inst.graph.n() == 2);
    CHECK(inst.graph.edge_count() == 1);
    CHECK(inst.ell == 1);
}

TEST_CASE("acyclic V2 block and larger V1 instances validate by witness") {
    // Whole-instance oracles are out of reach here; the explicit witness and
    // the structural counts still pin the construction.
    CspInstance v2 = csp(5, {{1, 2}}, {{1}}, {});
    GadgetInstance inst = gen_acyclic_instance(v2);
    CHECK(inst.graph.n() == 2 + 6 + 20);  // root pair, 5-fan, 10 XOR gadgets
    CHECK(inst.xor_pairs.size() == 10);
    CHECK(inst.ell == 1 + 10 + 1);
    auto solved = csp_brute_solve(v2);
    REQUIRE(solved.satisfiable);
    Matching w = acyclic_witness(inst, v2, solved.assignment);
    CHECK(w.edges.size() == inst.ell);
    CHECK(is_acyclic_matching(inst.graph, w));

    CspInstance two_bags = csp(5, {{1, 1}, {2, 1}}, {{1}, {1, 2}}, {});
    GadgetInstance inst2 = gen_acyclic_instance(two_bags);
    auto solved2 = csp_brute_solve(two_bags);
    Matching w2 = acyclic_witness(inst2, two_bags, solved2.assignment);
    CHECK(w2.edges.size() == inst2.ell);
    CHECK(is_acyclic_matching(inst2.graph, w2));

    // cross-bag XOR count: 10 per block + 20 between consecutive blocks
    CspInstance v2_two = csp(5, {{1, 2}, {2, 1}}, {{1}, {1, 2}}, {});
    GadgetInstance inst3 = gen_acyclic_instance(v2_two);
    CHECK(inst3.xor_pairs.size() == 10 + 10 + 20 + 4);  // two V2 blocks, cross, one V1 block
    Matching w3 = acyclic_witness(inst3, v2_two, csp_brute_solve(v2_two).assignment);
    CHECK(w3.edges.size() == inst3.ell);
    CHECK(is_acyclic_matching(inst3.graph, w3));
}

TEST_CASE("constraint attachments route through the right block vertices") {
    // V1 value 2 connects y to p1 and p4; values 1/3 to p3/p2.
    CspInstance one = csp(3, {{1, 1}}, {{1}}, {{{1}, {{1}, {2}, {3}}, 1}});
    GadgetInstance inst = gen_induced_instance(one);
    auto edge = [&](const std::string& a, const std::string& b) {
        return inst.graph.has_edge(inst.handle(a), inst.handle(b));
    };
    CHECK(edge("c1/sigma(1)/y", "x1/bag1/p3"));
    CHECK(edge("c1/sigma(2)/y", "x1/bag1/p1"));
    CHECK(edge("c1/sigma(2)/y", "x1/bag1/p4"));
    CHECK(edge("c1/sigma(3)/y", "x1/bag1/p2"));
    CHECK_FALSE(edge("c1/sigma(1)/y", "x1/bag1/p2"));
    // constraint gadget is a clique on {w, y_sigma}
    CHECK(edge("c1/w", "c1/sigma(1)/y"));
    CHECK(edge("c1/sigma(1)/y", "c1/sigma(2)/y"));

    // V2 value k connects y to the other two p's
    CspInstance two = csp(3, {{1, 2}}, {{1}}, {{{1}, {{2}}, 1}});
    GadgetInstance inst2 = gen_induced_instance(two);
    CHECK(inst2.graph.has_edge(inst2.handle("c1/sigma(2)/y"), inst2.handle("x1/bag1/p1")));
    CHECK(inst2.graph.has_edge(inst2.handle("c1/sigma(2)/y"), inst2.handle("x1/bag1/p3")));
    CHECK_FALSE(inst2.graph.has_edge(inst2.handle("c1/sigma(2)/y"), inst2.handle("x1/bag1/p2")));
}

TEST_CASE("monotone value drift across bags is feasible in the graph") {
    // Classically unsatisfiable (x must be 1 at bag 1 and 3 at bag 2) but the
    // reduction's multi-assignment semantics allow increasing values, so the
    // instance still reaches ell.
    CspInstance drift = csp(3, {{1, 1}, {2, 1}}, {{1}, {1, 2}},
                            {{{1}, {{1}}, 1}, {{1}, {{3}}, 2}});
    REQUIRE(validate_csp(drift).ok());
    CHECK_FALSE(csp_brute_solve(drift).satisfiable);
    GadgetInstance inst = gen_induced_instance(drift);
    CHECK(oracle_max_induced(inst.graph) >= static_cast<int>(inst.ell));
}

TEST_CASE("generator input checks") {
    CHECK_THROWS_AS(gen_induced_instance(csp(5, {{1, 1}}, {{1}}, {})), input_error);
    CHECK_THROWS_AS(gen_acyclic_instance(csp(3, {{1, 1}}, {{1}}, {})), input_error);
    CspInstance broken = csp(3, {{1, 1}}, {{1}, {1}}, {});  // bags differ by zero
    CHECK_THROWS_AS(gen_induced_instance(broken), input_error);
}

TEST_CASE("emitted ordering cutwidth tracks the decomposition width") {
    // Chain family: v2_count V2 variables alive throughout, then p V1
    // variables entering one by one and leaving one by one. Middle bags carry
    // ~p live variable paths plus the V2 cross edges.
    auto family = [](int p, int v2_count) {
        std::vector<CspVariable> vars;
        std::vector<std::vector<int>> bags;
        std::vector<int> cur;
        for (int i = 1; i <= v2_count; ++i) {
            vars.push_back({i, 2});
            cur.push_back(i);
            bags.push_back(cur);
        }
        for (int i = v2_count + 1; i <= v2_count + p; ++i) {
            vars.push_back({i, 1});
            cur.push_back(i);
            bags.push_back(cur);
        }
        while (static_cast<int>(cur.size()) > v2_count + 1) {
            cur.erase(cur.begin() + v2_count);
            bags.push_back(cur);
        }
        std::vector<CspConstraint> cons{{{v2_count + 1}, {{1}, {2}, {3}}, v2_count + 1}};
        return csp(3, vars, bags, cons);
    };

    auto run = [&](bool with_v2) {
        std::vector<int> excesses;
        for (int p : {8, 16, 32, 64}) {
            int v2_count = 0;
            if (with_v2) {
                for (int q = p; q > 1; q >>= 1) ++v2_count;  // ~log2(p)
            }
            CspInstance c = family(p, v2_count);
            REQUIRE(validate_csp(c).ok());
            GadgetInstance inst = gen_induced_instance(c);
            REQUIRE(inst.ordering.has_value());
            int ctw = compute_cutwidth(inst.graph, *inst.ordering);
            excesses.push_back(ctw - p);
            MESSAGE("v2=", with_v2, " p=", p, " ctw=", ctw, " excess=", ctw - p);
        }
        for (std::size_t i = 0; i + 2 < excesses.size(); ++i) {
            int slope_a = excesses[i + 1] - excesses[i];
            int slope_b = excesses[i + 2] - excesses[i + 1];
            CHECK(slope_b <= slope_a);
        }
    };
    run(false);
    run(true);
}
