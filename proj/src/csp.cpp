#include "cwmatch/csp.hpp"

#include <algorithm>
#include <set>

namespace cwmatch {

const CspVariable* CspInstance::find_var(int id) const {
    for (const auto& v : vars) {
        if (v.id == id) return &v;
    }
    return nullptr;
}

std::vector<int> CspInstance::bags_of(int id) const {
    std::vector<int> out;
    for (std::size_t j = 0; j < bags.size(); ++j) {
        if (std::find(bags[j].begin(), bags[j].end(), id) != bags[j].end()) {
            out.push_back(static_cast<int>(j) + 1);
        }
    }
    return out;
}

CspValidation validate_csp(const CspInstance& c) {
    CspValidation out;
    auto note = [&](std::string msg) { out.violations.push_back(std::move(msg)); };

    if (c.alphabet < 2) note("alphabet size must be at least 2");
    std::set<int> ids;
    for (const auto& v : c.vars) {
        if (!ids.insert(v.id).second) note("duplicate variable id " + std::to_string(v.id));
        if (v.cls != 1 && v.cls != 2) {
            note("variable " + std::to_string(v.id) + " has class " + std::to_string(v.cls) +
                 ", expected 1 or 2");
        }
    }
    if (c.bags.empty()) note("path decomposition needs at least one bag");

    for (std::size_t j = 0; j < c.bags.size(); ++j) {
        std::set<int> seen;
        int v2 = 0;
        for (int id : c.bags[j]) {
            if (!ids.count(id)) {
                note("bag " + std::to_string(j + 1) + " mentions unknown variable " + std::to_string(id));
            } else if (!seen.insert(id).second) {
                note("bag " + std::to_string(j + 1) + " repeats variable " + std::to_string(id));
            }
            const CspVariable* var = c.find_var(id);
            if (var && var->cls == 2) ++v2;
        }
        out.max_v2_per_bag = std::max(out.max_v2_per_bag, v2);
    }

    // Niceness: consecutive bags differ by exactly one insertion or deletion.
    for (std::size_t j = 0; j + 1 < c.bags.size(); ++j) {
        std::set<int> a(c.bags[j].begin(), c.bags[j].end());
        std::set<int> b(c.bags[j + 1].begin(), c.bags[j + 1].end());
        std::size_t only_a = 0, only_b = 0;
        for (int id : a) only_a += b.count(id) ? 0 : 1;
        for (int id : b) only_b += a.count(id) ? 0 : 1;
        bool one_insert = only_a == 0 && only_b == 1;
        bool one_delete = only_a == 1 && only_b == 0;
        if (!one_insert && !one_delete) {
            note("bags " + std::to_string(j + 1) + " and " + std::to_string(j + 2) +
                 " do not differ by exactly one insertion or deletion");
        }
    }

    for (const auto& v : c.vars) {
        auto occ = c.bags_of(v.id);
        if (occ.empty()) {
            note("variable " + std::to_string(v.id) + " appears in no bag");
            continue;
        }
        for (std::size_t t = 0; t + 1 < occ.size(); ++t) {
            if (occ[t + 1] != occ[t] + 1) {
                note("variable " + std::to_string(v.id) + " has non-contiguous bag interval");
                break;
            }
        }
    }

    std::set<int> used_bags;
    for (std::size_t q = 0; q < c.constraints.size(); ++q) {
        const auto& con = c.constraints[q];
        std::string tag = "constraint " + std::to_string(q + 1);
        if (con.vars.size() > 4) note(tag + " has arity " + std::to_string(con.vars.size()) + " > 4");
        if (con.bag < 1 || con.bag > static_cast<int>(c.bags.size())) {
            note(tag + " points at bag " + std::to_string(con.bag) + " outside the decomposition");
            continue;
        }
        if (!used_bags.insert(con.bag).second) {
            note(tag + " reuses bag " + std::to_string(con.bag) + "; b must be injective");
        }
        const auto& bag = c.bags[static_cast<std::size_t>(con.bag) - 1];
        for (int id : con.vars) {
            if (!ids.count(id)) {
                note(tag + " mentions unknown variable " + std::to_string(id));
            } else if (std::find(bag.begin(), bag.end(), id) == bag.end()) {
                note(tag + " has variable " + std::to_string(id) + " outside bag " +
                     std::to_string(con.bag));
            }
        }
        std::set<int> cvars(con.vars.begin(), con.vars.end());
        if (cvars.size() != con.vars.size()) note(tag + " repeats a variable");
        for (const auto& tuple : con.allowed) {
            if (tuple.size() != con.vars.size()) {
                note(tag + " has an allowed tuple of wrong arity");
                break;
            }
            for (int val : tuple) {
                if (val < 1 || val > c.alphabet) {
                    note(tag + " allows value " + std::to_string(val) + " outside [1, " +
                         std::to_string(c.alphabet) + "]");
                    break;
                }
            }
        }
    }
    return out;
}

CspSolveResult csp_brute_solve(const CspInstance& c, std::uint64_t limit) {
    std::vector<int> order;
    for (const auto& v : c.vars) order.push_back(v.id);
    std::sort(order.begin(), order.end());

    std::uint64_t space = 1;
    for (std::size_t i = 0; i < order.size(); ++i) {
        space *= static_cast<std::uint64_t>(c.alphabet);
        if (space > limit) {
            throw limit_error("csp_brute_solve: " + std::to_string(c.alphabet) + "^" +
                              std::to_string(order.size()) + " assignments exceed limit " +
                              std::to_string(limit));
        }
    }

    std::map<int, int> assignment;
    std::function<bool(std::size_t)> rec = [&](std::size_t idx) -> bool {
        if (idx == order.size()) {
            for (const auto& con : c.constraints) {
                std::vector<int> tuple;
                tuple.reserve(con.vars.size());
                for (int id : con.vars) tuple.push_back(assignment.at(id));
                if (std::find(con.allowed.begin(), con.allowed.end(), tuple) == con.allowed.end()) {
                    return false;
                }
            }
            return true;
        }
        for (int val = 1; val <= c.alphabet; ++val) {
            assignment[order[idx]] = val;
            if (rec(idx + 1)) return true;
        }
        assignment.erase(order[idx]);
        return false;
    };

    CspSolveResult res;
    res.satisfiable = rec(0);
    if (res.satisfiable) res.assignment = assignment;
    return res;
}

}  // namespace cwmatch
