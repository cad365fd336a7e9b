#include "cwmatch/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace cwmatch {

Graph::Graph(int n) : n_(n) {
    if (n < 0) throw input_error("graph: negative vertex count");
    adj_.assign(static_cast<std::size_t>(n) + 1, {});
    weights_.assign(static_cast<std::size_t>(n) + 1, 1);
}

Graph::Graph(const Graph& other) {
    std::lock_guard<std::mutex> lock(other.sort_mutex_);
    n_ = other.n_;
    edges_ = other.edges_;
    edges_sorted_ = other.edges_sorted_;
    adj_ = other.adj_;
    weights_ = other.weights_;
    names_ = other.names_;
}

Graph::Graph(Graph&& other) noexcept {
    std::lock_guard<std::mutex> lock(other.sort_mutex_);
    n_ = other.n_;
    edges_ = std::move(other.edges_);
    edges_sorted_ = other.edges_sorted_;
    adj_ = std::move(other.adj_);
    weights_ = std::move(other.weights_);
    names_ = std::move(other.names_);
}

Graph& Graph::operator=(const Graph& other) {
    if (this != &other) {
        Graph tmp(other);
        *this = std::move(tmp);
    }
    return *this;
}

Graph& Graph::operator=(Graph&& other) noexcept {
    if (this != &other) {
        std::lock_guard<std::mutex> lock(other.sort_mutex_);
        n_ = other.n_;
        edges_ = std::move(other.edges_);
        edges_sorted_ = other.edges_sorted_;
        adj_ = std::move(other.adj_);
        weights_ = std::move(other.weights_);
        names_ = std::move(other.names_);
    }
    return *this;
}

void Graph::check_vertex(VertexId v) const {
    if (v < 1 || v > n_) {
        throw input_error("graph: vertex id " + std::to_string(v) + " outside [1, " +
                          std::to_string(n_) + "]");
    }
}

void Graph::add_edge(VertexId u, VertexId v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw input_error("graph: self-loop at vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
    if (has_edge(u, v)) {
        throw input_error("graph: duplicate edge {" + std::to_string(u) + "," + std::to_string(v) + "}");
    }
    edges_.emplace_back(u, v);
    edges_sorted_ = false;
    adj_[static_cast<std::size_t>(u)].push_back(v);
    adj_[static_cast<std::size_t>(v)].push_back(u);
}

bool Graph::has_edge(VertexId u, VertexId v) const {
    check_vertex(u);
    check_vertex(v);
    if (u == v) return false;
    const auto& nu = adj_[static_cast<std::size_t>(u)];
    const auto& nv = adj_[static_cast<std::size_t>(v)];
    const auto& probe = nu.size() <= nv.size() ? nu : nv;
    VertexId target = nu.size() <= nv.size() ? v : u;
    return std::find(probe.begin(), probe.end(), target) != probe.end();
}

void Graph::sort_edges() const {
    std::lock_guard<std::mutex> lock(sort_mutex_);
    if (!edges_sorted_) {
        std::sort(edges_.begin(), edges_.end());
        edges_sorted_ = true;
    }
}

const std::vector<Edge>& Graph::edges() const {
    sort_edges();
    return edges_;
}

const std::vector<VertexId>& Graph::neighbors(VertexId v) const {
    check_vertex(v);
    return adj_[static_cast<std::size_t>(v)];
}

std::uint64_t Graph::weight(VertexId v) const {
    check_vertex(v);
    return weights_[static_cast<std::size_t>(v)];
}

void Graph::set_weight(VertexId v, std::uint64_t w) {
    check_vertex(v);
    weights_[static_cast<std::size_t>(v)] = w;
}

const std::string* Graph::name(VertexId v) const {
    check_vertex(v);
    auto it = names_.find(v);
    return it == names_.end() ? nullptr : &it->second;
}

void Graph::set_name(VertexId v, std::string name) {
    check_vertex(v);
    names_[v] = std::move(name);
}

std::optional<VertexId> Graph::vertex_by_name(const std::string& name) const {
    for (const auto& [v, nm] : names_) {
        if (nm == name) return v;
    }
    return std::nullopt;
}

std::vector<VertexId> vertices_of(const Matching& m) {
    std::set<VertexId> vs;
    for (const auto& [u, v] : m.edges) {
        vs.insert(u);
        vs.insert(v);
    }
    return {vs.begin(), vs.end()};
}

bool is_matching(const Matching& m) {
    std::set<VertexId> seen;
    for (const auto& [u, v] : m.edges) {
        if (u == v) return false;
        if (!seen.insert(u).second) return false;
        if (!seen.insert(v).second) return false;
    }
    return true;
}

namespace {

void check_matching_of(const Graph& g, const Matching& m) {
    for (const auto& [u, v] : m.edges) {
        if (!g.has_edge(u, v)) {
            throw input_error("matching edge {" + std::to_string(u) + "," + std::to_string(v) +
                              "} is not an edge of the graph");
        }
    }
    if (!is_matching(m)) throw input_error("edge set is not a matching");
}

// Edges of g with both endpoints inside s (s given as a sorted vector).
std::vector<Edge> induced_edges(const Graph& g, const std::vector<VertexId>& s) {
    std::vector<char> in(static_cast<std::size_t>(g.n()) + 1, 0);
    for (VertexId v : s) in[static_cast<std::size_t>(v)] = 1;
    std::vector<Edge> out;
    for (const auto& [u, v] : g.edges()) {
        if (in[static_cast<std::size_t>(u)] && in[static_cast<std::size_t>(v)]) out.emplace_back(u, v);
    }
    return out;
}

struct Dsu {
    explicit Dsu(int n) : parent(static_cast<std::size_t>(n) + 1) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[parent[static_cast<std::size_t>(x)]];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    // Returns false if x and y were already connected.
    bool unite(int x, int y) {
        int rx = find(x), ry = find(y);
        if (rx == ry) return false;
        parent[static_cast<std::size_t>(rx)] = ry;
        return true;
    }
    std::vector<int> parent;
};

}  // namespace

bool is_induced_matching(const Graph& g, const Matching& m) {
    check_matching_of(g, m);
    auto vs = vertices_of(m);
    std::vector<int> deg(static_cast<std::size_t>(g.n()) + 1, 0);
    for (const auto& [u, v] : induced_edges(g, vs)) {
        ++deg[static_cast<std::size_t>(u)];
        ++deg[static_cast<std::size_t>(v)];
    }
    for (VertexId v : vs) {
        if (deg[static_cast<std::size_t>(v)] != 1) return false;
    }
    return true;
}

bool is_acyclic_matching(const Graph& g, const Matching& m) {
    check_matching_of(g, m);
    auto vs = vertices_of(m);
    Dsu dsu(g.n());
    for (const auto& [u, v] : induced_edges(g, vs)) {
        if (!dsu.unite(u, v)) return false;
    }
    return true;
}

namespace {

void check_oracle_limits(const Graph& g, const OracleLimits& limits) {
    if (g.n() <= limits.max_vertices) return;
    if (g.edge_count() <= limits.max_subset_bits) return;
    throw limit_error("oracle refuses instance with n=" + std::to_string(g.n()) + ", |E|=" +
                      std::to_string(g.edge_count()) + " (limits: n <= " +
                      std::to_string(limits.max_vertices) + " or 2^|E| <= 2^" +
                      std::to_string(limits.max_subset_bits) + ")");
}

// Shared state for the subset enumerations. Edge subsets are scanned in
// lexicographic order; branches die as soon as the partial set stops being a
// matching of the required kind (supersets cannot recover).
struct OracleScan {
    const Graph& g;
    std::vector<char> used;      // endpoint already matched
    std::vector<VertexId> in_m;  // current V_M, unsorted

    explicit OracleScan(const Graph& g)
        : g(g), used(static_cast<std::size_t>(g.n()) + 1, 0) {}

    bool endpoints_free(const Edge& e) const {
        return !used[static_cast<std::size_t>(e.first)] && !used[static_cast<std::size_t>(e.second)];
    }
    // True iff u has a graph edge into the current V_M.
    bool touches_vm(VertexId u) const {
        for (VertexId w : g.neighbors(u)) {
            if (used[static_cast<std::size_t>(w)]) return true;
        }
        return false;
    }
    void push(const Edge& e) {
        used[static_cast<std::size_t>(e.first)] = used[static_cast<std::size_t>(e.second)] = 1;
        in_m.push_back(e.first);
        in_m.push_back(e.second);
    }
    void pop(const Edge& e) {
        used[static_cast<std::size_t>(e.first)] = used[static_cast<std::size_t>(e.second)] = 0;
        in_m.pop_back();
        in_m.pop_back();
    }
};

void count_induced_rec(OracleScan& st, std::size_t next, std::size_t depth,
                       std::vector<std::uint64_t>& counts) {
    ++counts[depth];
    const auto& edges = st.g.edges();
    for (std::size_t idx = next; idx < edges.size(); ++idx) {
        const Edge& e = edges[idx];
        if (!st.endpoints_free(e)) continue;
        // A new pair may not see any already matched vertex, otherwise some
        // matched vertex gains degree >= 2 in the induced subgraph.
        if (st.touches_vm(e.first) || st.touches_vm(e.second)) continue;
        st.push(e);
        count_induced_rec(st, idx + 1, depth + 1, counts);
        st.pop(e);
    }
}

// Acyclicity of G[V_M] is monotone-breaking: once a cycle exists, every
// superset keeps it, so the branch is cut.
bool forest_after_adding(const Graph& g, const std::vector<VertexId>& vm) {
    Dsu dsu(g.n());
    std::vector<char> in(static_cast<std::size_t>(g.n()) + 1, 0);
    for (VertexId v : vm) in[static_cast<std::size_t>(v)] = 1;
    for (VertexId v : vm) {
        for (VertexId w : g.neighbors(v)) {
            if (w > v && in[static_cast<std::size_t>(w)]) {
                if (!dsu.unite(v, w)) return false;
            }
        }
    }
    return true;
}

void max_acyclic_rec(OracleScan& st, std::size_t next, std::vector<Edge>& current,
                     MaxAcyclicResult& best) {
    if (current.size() > best.max_size) {
        best.max_size = current.size();
        best.witness.edges = current;
    }
    const auto& edges = st.g.edges();
    // Simple bound: even taking every remaining edge cannot beat the best.
    if (current.size() + (edges.size() - next) <= best.max_size) return;
    for (std::size_t idx = next; idx < edges.size(); ++idx) {
        const Edge& e = edges[idx];
        if (!st.endpoints_free(e)) continue;
        st.push(e);
        if (forest_after_adding(st.g, st.in_m)) {
            current.push_back(e);
            max_acyclic_rec(st, idx + 1, current, best);
            current.pop_back();
        }
        st.pop(e);
    }
}

}  // namespace

std::vector<mpz_class> count_induced_oracle(const Graph& g, const OracleLimits& limits) {
    check_oracle_limits(g, limits);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(g.n() / 2) + 1, 0);
    OracleScan st(g);
    count_induced_rec(st, 0, 0, counts);
    std::vector<mpz_class> out;
    out.reserve(counts.size());
    for (std::uint64_t c : counts) out.emplace_back(static_cast<unsigned long>(c));
    return out;
}

MaxAcyclicResult max_acyclic_oracle(const Graph& g, const OracleLimits& limits) {
    check_oracle_limits(g, limits);
    MaxAcyclicResult best;
    OracleScan st(g);
    std::vector<Edge> current;
    max_acyclic_rec(st, 0, current, best);
    return best;
}

int compute_cutwidth(const Graph& g, const LinearArrangement& a) {
    if (static_cast<int>(a.order.size()) != g.n()) {
        throw input_error("arrangement size " + std::to_string(a.order.size()) +
                          " does not match vertex count " + std::to_string(g.n()));
    }
    std::vector<int> pos(static_cast<std::size_t>(g.n()) + 1, -1);
    for (std::size_t i = 0; i < a.order.size(); ++i) {
        VertexId v = a.order[i];
        if (v < 1 || v > g.n() || pos[static_cast<std::size_t>(v)] != -1) {
            throw input_error("arrangement is not a permutation of [1, n]");
        }
        pos[static_cast<std::size_t>(v)] = static_cast<int>(i);
    }
    // Sweep the prefix cuts: an edge {u,v} crosses cuts i in [pos_u+1, pos_v]
    // (1-based cut index i counts the first i placed vertices).
    std::vector<int> delta(static_cast<std::size_t>(g.n()) + 2, 0);
    for (const auto& [u, v] : g.edges()) {
        int pu = pos[static_cast<std::size_t>(u)], pv = pos[static_cast<std::size_t>(v)];
        if (pu > pv) std::swap(pu, pv);
        delta[static_cast<std::size_t>(pu) + 1] += 1;
        delta[static_cast<std::size_t>(pv) + 1] -= 1;
    }
    int cur = 0, best = 0;
    for (int i = 0; i <= g.n(); ++i) {
        cur += delta[static_cast<std::size_t>(i)];
        best = std::max(best, cur);
    }
    return best;
}

}  // namespace cwmatch
