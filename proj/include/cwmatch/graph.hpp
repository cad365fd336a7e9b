#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "cwmatch/util.hpp"

namespace cwmatch {

using VertexId = int;  // vertices are 1..n
using Edge = std::pair<VertexId, VertexId>;  // canonical form u < v

/// Undirected simple graph with per-vertex natural weights (default 1) and
/// optional provenance names. No loops, no multi-edges.
class Graph {
public:
    Graph() = default;
    explicit Graph(int n);
    Graph(const Graph& other);
    Graph(Graph&& other) noexcept;
    Graph& operator=(const Graph& other);
    Graph& operator=(Graph&& other) noexcept;

    int n() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    /// Adds {u,v}; throws input_error on loops, duplicates, or ids outside [1,n].
    void add_edge(VertexId u, VertexId v);
    bool has_edge(VertexId u, VertexId v) const;

    /// Edges in canonical (u<v) form, sorted lexicographically. Safe to call
    /// concurrently once construction is done.
    const std::vector<Edge>& edges() const;
    const std::vector<VertexId>& neighbors(VertexId v) const;

    std::uint64_t weight(VertexId v) const;
    void set_weight(VertexId v, std::uint64_t w);

    const std::string* name(VertexId v) const;
    void set_name(VertexId v, std::string name);
    /// Id of the vertex carrying `name`, if any (names are unique when set by
    /// the gadget generators).
    std::optional<VertexId> vertex_by_name(const std::string& name) const;
    const std::map<VertexId, std::string>& names() const { return names_; }

private:
    void check_vertex(VertexId v) const;
    void sort_edges() const;

    int n_ = 0;
    mutable std::vector<Edge> edges_;
    mutable bool edges_sorted_ = true;
    mutable std::mutex sort_mutex_;
    std::vector<std::vector<VertexId>> adj_;
    std::vector<std::uint64_t> weights_;
    std::map<VertexId, std::string> names_;
};

/// A set of pairwise endpoint-disjoint edges.
struct Matching {
    std::vector<Edge> edges;
};

/// Vertex ordering: order[pos] is the vertex placed at position pos (0-based).
struct LinearArrangement {
    std::vector<VertexId> order;
};

/// Union of the endpoints of m's edges, sorted ascending.
std::vector<VertexId> vertices_of(const Matching& m);

/// True iff m is a matching (throws input_error if edges repeat a vertex).
bool is_matching(const Matching& m);

/// True iff the subgraph induced by vertices_of(m) is 1-regular.
/// Throws input_error if an edge of m is absent from g or m is not a matching.
bool is_induced_matching(const Graph& g, const Matching& m);

/// True iff the subgraph induced by vertices_of(m) is acyclic.
bool is_acyclic_matching(const Graph& g, const Matching& m);

/// Enumeration limits for the brute-force oracles. An instance is admissible
/// when n <= max_vertices or |E| <= max_subset_bits.
struct OracleLimits {
    int max_vertices = 16;
    int max_subset_bits = 24;
};

/// counts[l] = number of induced matchings of size l, l in [0, n/2].
/// Exhaustive over edge subsets in lexicographic order with early pruning.
std::vector<mpz_class> count_induced_oracle(const Graph& g, const OracleLimits& limits = {});

struct MaxAcyclicResult {
    std::size_t max_size = 0;
    Matching witness;
};

/// Maximum acyclic matching size plus one witness attaining it.
MaxAcyclicResult max_acyclic_oracle(const Graph& g, const OracleLimits& limits = {});

/// max over prefix cuts of the number of crossing edges.
/// Throws input_error if a is not a permutation of g's vertices.
int compute_cutwidth(const Graph& g, const LinearArrangement& a);

}  // namespace cwmatch
