#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cwmatch/util.hpp"

namespace cwmatch {

struct CspVariable {
    int id = 0;
    int cls = 1;  // 1 or 2
};

struct CspConstraint {
    std::vector<int> vars;                  // at most 4 variable ids
    std::vector<std::vector<int>> allowed;  // satisfying tuples, one value per var
    int bag = 0;                            // 1-based bag index via the injective map b
};

/// Arity-<=4 CSP with a nice path decomposition and a V1/V2 variable split.
struct CspInstance {
    int alphabet = 3;  // 3 for induced-matching gadgets, 5 for acyclic
    std::vector<CspVariable> vars;
    std::vector<std::vector<int>> bags;  // bags[j-1] = variable ids of bag j
    std::vector<CspConstraint> constraints;

    const CspVariable* find_var(int id) const;
    /// 1-based bag indices containing `id`, ascending.
    std::vector<int> bags_of(int id) const;
};

struct CspValidation {
    std::vector<std::string> violations;
    int max_v2_per_bag = 0;  // informational, not an error
    bool ok() const { return violations.empty(); }
};

/// Checks all CspInstance invariants: ids/classes, niceness (consecutive bags
/// differ by one insertion or deletion), contiguous bag intervals, arity <= 4,
/// tuple shapes and value ranges, injective b with constraint vars inside
/// their bag.
CspValidation validate_csp(const CspInstance& c);

struct CspSolveResult {
    bool satisfiable = false;
    std::map<int, int> assignment;  // var id -> value, set when satisfiable
};

/// Exhaustive search over classic single assignments (not multi-assignments).
/// Throws limit_error when B^#vars exceeds `limit`.
CspSolveResult csp_brute_solve(const CspInstance& c, std::uint64_t limit = 10000000);

}  // namespace cwmatch
