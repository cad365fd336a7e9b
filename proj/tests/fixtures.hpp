#pragma once

#include <string>
#include <vector>

#include "cwmatch/csp.hpp"

namespace cwmatch::testing {

struct CspFixture {
    std::string name;
    CspInstance csp;
    bool expect_satisfiable;
};

inline CspInstance csp(int alphabet, std::vector<CspVariable> vars,
                       std::vector<std::vector<int>> bags, std::vector<CspConstraint> constraints) {
    CspInstance c;
    c.alphabet = alphabet;
    c.vars = std::move(vars);
    c.bags = std::move(bags);
    c.constraints = std::move(constraints);
    return c;
}

/// Tiny CSPs whose induced-matching instances stay within 16 vertices.
inline std::vector<CspFixture> induced_fixtures() {
    std::vector<CspFixture> out;
    auto add = [&](std::string name, CspInstance c, bool sat) {
        out.push_back({std::move(name), std::move(c), sat});
    };

    add("v1-single-bag", csp(3, {{1, 1}}, {{1}}, {}), true);                       // P4
    add("v2-single-bag", csp(3, {{1, 2}}, {{1}}, {}), true);                       // K4
    add("v1-two-bags", csp(3, {{1, 1}, {2, 1}}, {{1}, {1, 2}}, {}), true);         // P7 + P4
    add("v2-two-bags", csp(3, {{1, 2}, {2, 1}}, {{1}, {1, 2}}, {}), true);
    add("v1-unary-sat", csp(3, {{1, 1}}, {{1}}, {{{1}, {{1}}, 1}}), true);
    add("v1-unary-unsat", csp(3, {{1, 1}}, {{1}}, {{{1}, {}, 1}}), false);
    add("v1-unary-two-values", csp(3, {{1, 1}}, {{1}}, {{{1}, {{2}, {3}}, 1}}), true);
    add("v2-unary-sat", csp(3, {{1, 2}}, {{1}}, {{{1}, {{3}}, 1}}), true);
    add("v2-unary-unsat", csp(3, {{1, 2}}, {{1}}, {{{1}, {}, 1}}), false);
    add("two-v1-equal", csp(3, {{1, 1}, {2, 1}}, {{1, 2}}, {{{1, 2}, {{1, 1}, {2, 2}, {3, 3}}, 1}}),
        true);
    add("two-v1-less-than",
        csp(3, {{1, 1}, {2, 1}}, {{1, 2}}, {{{1, 2}, {{1, 2}, {1, 3}, {2, 3}}, 1}}), true);
    add("two-v1-empty-unsat", csp(3, {{1, 1}, {2, 1}}, {{1, 2}}, {{{1, 2}, {}, 1}}), false);
    add("v1-v2-diseq",
        csp(3, {{1, 1}, {2, 2}}, {{1, 2}},
            {{{1, 2}, {{1, 2}, {1, 3}, {2, 1}, {2, 3}, {3, 1}, {3, 2}}, 1}}),
        true);
    add("two-v1-chained-bags", csp(3, {{1, 1}, {2, 1}}, {{1}, {1, 2}, {2}}, {}), true);
    add("v1-monotone-conflict",
        csp(3, {{1, 1}, {2, 1}}, {{1}, {1, 2}},
            {{{1}, {{3}}, 1}, {{1}, {{1}}, 2}}),  // value must drop 3 -> 1 along the path
        false);
    add("zero-ary-true", csp(3, {}, {{}}, {{{}, {{}}, 1}}), true);
    add("zero-ary-false", csp(3, {}, {{}}, {{{}, {}, 1}}), false);
    add("three-v1-free", csp(3, {{1, 1}, {2, 1}, {3, 1}}, {{1, 2, 3}}, {}), true);
    add("v2-three-bags", csp(3, {{1, 2}, {2, 1}}, {{1}, {1, 2}, {1}}, {}), true);
    add("ternary-diagonal",
        csp(3, {{1, 1}, {2, 1}, {3, 1}}, {{1, 2, 3}},
            {{{1, 2, 3}, {{1, 1, 1}, {2, 2, 2}, {3, 3, 3}}, 1}}),
        true);
    add("ternary-unsat", csp(3, {{1, 1}, {2, 1}, {3, 1}}, {{1, 2, 3}}, {{{1, 2, 3}, {}, 1}}),
        false);
    return out;
}

/// Tiny CSPs whose acyclic-matching instances stay within 20 vertices.
inline std::vector<CspFixture> acyclic_fixtures() {
    std::vector<CspFixture> out;
    auto add = [&](std::string name, CspInstance c, bool sat) {
        out.push_back({std::move(name), std::move(c), sat});
    };
    add("empty", csp(5, {}, {{}}, {}), true);                         // just the root edge
    add("zero-ary-true", csp(5, {}, {{}}, {{{}, {{}}, 1}}), true);    // root + one constraint pair
    add("zero-ary-false", csp(5, {}, {{}}, {{{}, {}, 1}}), false);    // isolated partner vertex
    add("v1-single-bag", csp(5, {{1, 1}}, {{1}}, {}), true);          // 20-vertex block instance
    return out;
}

}  // namespace cwmatch::testing
