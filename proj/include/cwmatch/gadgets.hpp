#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cwmatch/csp.hpp"
#include "cwmatch/graph.hpp"

namespace cwmatch {

/// Generated lower-bound instance. `handles` maps structured vertex roles
/// (e.g. "x3/bag5/p2", "c1/sigma(1,2)/y") to vertex ids; shared vertices are
/// reachable under every role they play. `xor_pairs` lists the private-vertex
/// pair of every XOR gadget (acyclic kind only).
struct GadgetInstance {
    Graph graph;
    std::uint64_t ell = 0;
    std::string kind;  // "induced" | "acyclic"
    std::optional<LinearArrangement> ordering;  // induced kind only

    std::map<std::string, VertexId> handles;
    std::vector<Edge> xor_pairs;

    VertexId handle(const std::string& role) const;
};

/// Builds the induced-matching instance of a B=3 CSP: V1 occurrences become
/// 4-paths chained through shared endpoints, V2 occurrences 4-cliques with
/// index-crossing edges between consecutive bags, constraints a clique of one
/// vertex per satisfying tuple plus a partner vertex, attached to the blocks
/// of bag b(c) by value. Also emits the bag-by-bag linear arrangement.
/// ell = #V1 blocks + #V2 blocks + #constraints.
GadgetInstance gen_induced_instance(const CspInstance& c);

/// Builds the acyclic-matching instance of a B=5 CSP: a root edge, V1 blocks
/// of 8 vertices + 2 leaves wired by XOR gadgets, V2 blocks of a 5-fan with
/// all-pairs and cross-bag XOR gadgets, and per-constraint tuple vertices
/// XOR-attached to the value-forbidden block vertices.
/// ell = 1 + #XOR gadgets + 2*#V1 blocks + #V2 blocks + #constraints.
GadgetInstance gen_acyclic_instance(const CspInstance& c);

/// The explicit matching built from a satisfying assignment: one block edge
/// per occurrence (two for acyclic V1 blocks), one constraint edge per
/// constraint, plus root edge and all XOR private pairs for the acyclic kind.
Matching induced_witness(const GadgetInstance& inst, const CspInstance& c,
                         const std::map<int, int>& assignment);
Matching acyclic_witness(const GadgetInstance& inst, const CspInstance& c,
                         const std::map<int, int>& assignment);

}  // namespace cwmatch
