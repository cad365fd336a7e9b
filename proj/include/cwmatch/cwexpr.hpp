#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cwmatch/graph.hpp"

namespace cwmatch {

enum class CwOp : std::uint8_t { Intro, Union, Join, Relabel };

struct CwNode {
    CwOp op;
    int a = 0;        // Intro: label; Join/Relabel: first label
    int b = 0;        // Join/Relabel: second label
    int child0 = -1;  // Union/Join/Relabel
    int child1 = -1;  // Union
    int line = 0, col = 0;
};

/// Clique-width expression: intro `(v i)`, disjoint union `(oplus a b)`,
/// join `(eta i j a)`, relabel `(rho i j a)`. Immutable after construction.
/// Intro leaves are numbered 1..n in left-to-right order; a Union offsets the
/// right subtree's vertex ids by the left subtree's vertex count.
class CwExpr {
public:
    /// Parses the s-expression format; `;` starts a comment until end of line.
    /// Throws input_error with line/column on syntax errors, labels < 1, or
    /// eta/rho with i = j.
    static CwExpr parse(std::string_view text);

    /// Builders used by the generators. Labels are validated as in parse.
    static CwExpr intro(int label);
    static CwExpr unite(CwExpr left, CwExpr right);
    static CwExpr join(int i, int j, CwExpr child);
    static CwExpr relabel(int i, int j, CwExpr child);

    std::string serialize() const;

    int root() const { return root_; }
    std::size_t size() const { return nodes_.size(); }
    const CwNode& node(int idx) const { return nodes_[static_cast<std::size_t>(idx)]; }

    /// Largest label mentioned anywhere in the expression.
    int width() const { return width_; }
    /// Number of Intro leaves.
    int vertex_count() const;

    bool structurally_equal(const CwExpr& other) const;

private:
    std::vector<CwNode> nodes_;
    int root_ = -1;
    int width_ = 0;

    int append(const CwExpr& sub);  // returns new index of sub's root
    friend class CwParser;
};

struct LabeledGraph {
    Graph graph;
    std::vector<int> labels;  // labels[v] for v in 1..n (index 0 unused)
    int width = 0;

    int label(VertexId v) const { return labels[static_cast<std::size_t>(v)]; }
    std::vector<VertexId> label_class(int i) const;
};

LabeledGraph evaluate(const CwExpr& e);

/// Per-node evaluation results for tests: node i of the expression evaluates
/// to `graphs[i]`, whose local vertex v corresponds to the root graph's vertex
/// v + vertex_offset[i].
struct NodeEvaluations {
    std::vector<LabeledGraph> graphs;
    std::vector<int> vertex_offset;
};
NodeEvaluations evaluate_all_nodes(const CwExpr& e);

struct IrredundancyViolation {
    int node_index;
    int label_i, label_j;
    int line, col;
};

/// nullopt when every eta is applied with no pre-existing edge between its
/// two label classes; otherwise the first violating join in post order.
std::optional<IrredundancyViolation> check_irredundant(const CwExpr& e);

/// Removes joins whose classes are already completely joined. Throws
/// input_error (partial redundancy) when a join faces some but not all of its
/// cross edges; such expressions must be rewritten by the caller.
CwExpr normalize(const CwExpr& e);

enum class FamilyKind { Path, Cycle, Complete, CompleteBipartite, Star };

std::optional<FamilyKind> family_kind_from_string(std::string_view s);

/// Irredundant expression of the n-vertex family member with canonical
/// numbering: paths/cycles 1-2-...-n, complete graphs K_n, stars with center 1,
/// complete bipartite with sides {1..ceil(n/2)} and the rest.
CwExpr gen_family(FamilyKind kind, int n);

/// Pseudo-random valid irredundant expression; bit-reproducible in `seed`.
/// `ops` bounds the number of random construction steps (and hence vertices).
CwExpr gen_random_expr(int width, int ops, std::uint64_t seed);

}  // namespace cwmatch
