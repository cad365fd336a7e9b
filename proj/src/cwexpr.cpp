#include "cwmatch/cwexpr.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <set>
#include <sstream>

namespace cwmatch {

namespace {

void check_label(int label, int line, int col) {
    if (label < 1) {
        throw input_error("label " + std::to_string(label) + " must be >= 1 (line " +
                          std::to_string(line) + ", col " + std::to_string(col) + ")");
    }
}

void check_label_pair(int i, int j, int line, int col) {
    check_label(i, line, col);
    check_label(j, line, col);
    if (i == j) {
        throw input_error("labels must differ, got i = j = " + std::to_string(i) + " (line " +
                          std::to_string(line) + ", col " + std::to_string(col) + ")");
    }
}

}  // namespace

class CwParser {
public:
    explicit CwParser(std::string_view text) : text_(text) {}

    CwExpr run() {
        CwExpr e;
        e.root_ = parse_expr(e);
        skip_ws();
        if (pos_ < text_.size()) fail("trailing input after expression");
        for (const auto& n : e.nodes_) {
            e.width_ = std::max({e.width_, n.a, n.b});
        }
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;

    [[noreturn]] void fail(const std::string& msg) const {
        throw input_error("parse error at line " + std::to_string(line_) + ", col " +
                          std::to_string(col_) + ": " + msg);
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != c) {
            fail(std::string("expected '") + c + "'");
        }
        advance();
    }

    std::string symbol() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_' || text_[pos_] == '-')) {
            advance();
        }
        if (start == pos_) fail("expected a symbol");
        return std::string(text_.substr(start, pos_ - start));
    }

    int integer() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < text_.size() && text_[pos_] == '-') advance();
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
        if (start == pos_) fail("expected an integer");
        return std::stoi(std::string(text_.substr(start, pos_ - start)));
    }

    int parse_expr(CwExpr& e) {
        skip_ws();
        int at_line = line_, at_col = col_;
        expect('(');
        std::string head = symbol();
        CwNode node;
        node.line = at_line;
        node.col = at_col;
        if (head == "v") {
            node.op = CwOp::Intro;
            node.a = integer();
            check_label(node.a, at_line, at_col);
        } else if (head == "oplus") {
            node.op = CwOp::Union;
            node.child0 = parse_expr(e);
            node.child1 = parse_expr(e);
        } else if (head == "eta" || head == "rho") {
            node.op = head == "eta" ? CwOp::Join : CwOp::Relabel;
            node.a = integer();
            node.b = integer();
            check_label_pair(node.a, node.b, at_line, at_col);
            node.child0 = parse_expr(e);
        } else {
            fail("unknown operator '" + head + "'");
        }
        expect(')');
        e.nodes_.push_back(node);
        return static_cast<int>(e.nodes_.size()) - 1;
    }
};

CwExpr CwExpr::parse(std::string_view text) { return CwParser(text).run(); }

int CwExpr::append(const CwExpr& sub) {
    int offset = static_cast<int>(nodes_.size());
    for (CwNode n : sub.nodes_) {
        if (n.child0 >= 0) n.child0 += offset;
        if (n.child1 >= 0) n.child1 += offset;
        nodes_.push_back(n);
    }
    width_ = std::max(width_, sub.width_);
    return sub.root_ + offset;
}

CwExpr CwExpr::intro(int label) {
    check_label(label, 0, 0);
    CwExpr e;
    e.nodes_.push_back({CwOp::Intro, label, 0, -1, -1, 0, 0});
    e.root_ = 0;
    e.width_ = label;
    return e;
}

CwExpr CwExpr::unite(CwExpr left, CwExpr right) {
    CwExpr e = std::move(left);
    int r = e.append(right);
    e.nodes_.push_back({CwOp::Union, 0, 0, e.root_, r, 0, 0});
    e.root_ = static_cast<int>(e.nodes_.size()) - 1;
    return e;
}

CwExpr CwExpr::join(int i, int j, CwExpr child) {
    check_label_pair(i, j, 0, 0);
    CwExpr e = std::move(child);
    e.nodes_.push_back({CwOp::Join, i, j, e.root_, -1, 0, 0});
    e.root_ = static_cast<int>(e.nodes_.size()) - 1;
    e.width_ = std::max({e.width_, i, j});
    return e;
}

CwExpr CwExpr::relabel(int i, int j, CwExpr child) {
    check_label_pair(i, j, 0, 0);
    CwExpr e = std::move(child);
    e.nodes_.push_back({CwOp::Relabel, i, j, e.root_, -1, 0, 0});
    e.root_ = static_cast<int>(e.nodes_.size()) - 1;
    e.width_ = std::max({e.width_, i, j});
    return e;
}

namespace {

void serialize_rec(const CwExpr& e, int idx, std::ostringstream& out) {
    const CwNode& n = e.node(idx);
    switch (n.op) {
        case CwOp::Intro:
            out << "(v " << n.a << ")";
            break;
        case CwOp::Union:
            out << "(oplus ";
            serialize_rec(e, n.child0, out);
            out << " ";
            serialize_rec(e, n.child1, out);
            out << ")";
            break;
        case CwOp::Join:
        case CwOp::Relabel:
            out << (n.op == CwOp::Join ? "(eta " : "(rho ") << n.a << " " << n.b << " ";
            serialize_rec(e, n.child0, out);
            out << ")";
            break;
    }
}

}  // namespace

std::string CwExpr::serialize() const {
    std::ostringstream out;
    serialize_rec(*this, root_, out);
    return out.str();
}

int CwExpr::vertex_count() const {
    int c = 0;
    for (const auto& n : nodes_) {
        if (n.op == CwOp::Intro) ++c;
    }
    return c;
}

namespace {

bool structurally_equal_rec(const CwExpr& a, int ia, const CwExpr& b, int ib) {
    const CwNode& na = a.node(ia);
    const CwNode& nb = b.node(ib);
    if (na.op != nb.op || na.a != nb.a || na.b != nb.b) return false;
    if (na.child0 >= 0 && !structurally_equal_rec(a, na.child0, b, nb.child0)) return false;
    if (na.child1 >= 0 && !structurally_equal_rec(a, na.child1, b, nb.child1)) return false;
    return true;
}

}  // namespace

bool CwExpr::structurally_equal(const CwExpr& other) const {
    return structurally_equal_rec(*this, root_, other, other.root_);
}

std::vector<VertexId> LabeledGraph::label_class(int i) const {
    std::vector<VertexId> out;
    for (VertexId v = 1; v <= graph.n(); ++v) {
        if (label(v) == i) out.push_back(v);
    }
    return out;
}

namespace {

// Working state while folding an expression bottom-up: labels indexed by
// local vertex id (1..n_local) and the accumulated edge set.
struct EvalState {
    std::vector<int> labels{0};  // slot 0 unused
    std::set<Edge> edges;

    int n() const { return static_cast<int>(labels.size()) - 1; }

    std::vector<VertexId> label_class(int i) const {
        std::vector<VertexId> out;
        for (VertexId v = 1; v <= n(); ++v) {
            if (labels[static_cast<std::size_t>(v)] == i) out.push_back(v);
        }
        return out;
    }
};

// Hook invoked at each join with (existing i-j edge count, possible pairs).
using JoinHook = std::function<void(int node_idx, int existing, long long pairs)>;

EvalState eval_rec(const CwExpr& e, int idx, const JoinHook* hook) {
    const CwNode& n = e.node(idx);
    switch (n.op) {
        case CwOp::Intro: {
            EvalState st;
            st.labels.push_back(n.a);
            return st;
        }
        case CwOp::Union: {
            EvalState left = eval_rec(e, n.child0, hook);
            EvalState right = eval_rec(e, n.child1, hook);
            int off = left.n();
            for (std::size_t v = 1; v < right.labels.size(); ++v) {
                left.labels.push_back(right.labels[v]);
            }
            for (const auto& [u, v] : right.edges) {
                left.edges.emplace(u + off, v + off);
            }
            return left;
        }
        case CwOp::Join: {
            EvalState st = eval_rec(e, n.child0, hook);
            auto ci = st.label_class(n.a);
            auto cj = st.label_class(n.b);
            if (hook) {
                int existing = 0;
                for (VertexId u : ci) {
                    for (VertexId v : cj) {
                        Edge key{std::min(u, v), std::max(u, v)};
                        if (st.edges.count(key)) ++existing;
                    }
                }
                (*hook)(idx, existing, static_cast<long long>(ci.size()) * static_cast<long long>(cj.size()));
            }
            for (VertexId u : ci) {
                for (VertexId v : cj) {
                    st.edges.emplace(std::min(u, v), std::max(u, v));
                }
            }
            return st;
        }
        case CwOp::Relabel: {
            EvalState st = eval_rec(e, n.child0, hook);
            for (std::size_t v = 1; v < st.labels.size(); ++v) {
                if (st.labels[v] == n.a) st.labels[v] = n.b;
            }
            return st;
        }
    }
    throw internal_error("unreachable expression node kind");
}

LabeledGraph to_labeled_graph(EvalState&& st, int width) {
    LabeledGraph lg;
    lg.graph = Graph(st.n());
    for (const auto& [u, v] : st.edges) lg.graph.add_edge(u, v);
    lg.labels = std::move(st.labels);
    lg.width = width;
    return lg;
}

}  // namespace

LabeledGraph evaluate(const CwExpr& e) {
    return to_labeled_graph(eval_rec(e, e.root(), nullptr), e.width());
}

NodeEvaluations evaluate_all_nodes(const CwExpr& e) {
    NodeEvaluations out;
    out.graphs.resize(e.size());
    out.vertex_offset.assign(e.size(), 0);
    // Offsets follow the left-to-right leaf numbering: within a union, the
    // right child's vertices come after the left child's.
    struct Rec {
        const CwExpr& e;
        NodeEvaluations& out;
        int walk(int idx, int offset) {  // returns subtree vertex count
            const CwNode& n = e.node(idx);
            out.vertex_offset[static_cast<std::size_t>(idx)] = offset;
            int count = 0;
            switch (n.op) {
                case CwOp::Intro:
                    count = 1;
                    break;
                case CwOp::Union: {
                    int left = walk(n.child0, offset);
                    int right = walk(n.child1, offset + left);
                    count = left + right;
                    break;
                }
                case CwOp::Join:
                case CwOp::Relabel:
                    count = walk(n.child0, offset);
                    break;
            }
            out.graphs[static_cast<std::size_t>(idx)] =
                to_labeled_graph(eval_rec(e, idx, nullptr), e.width());
            return count;
        }
    } rec{e, out};
    rec.walk(e.root(), 0);
    return out;
}

std::optional<IrredundancyViolation> check_irredundant(const CwExpr& e) {
    std::optional<IrredundancyViolation> violation;
    JoinHook hook = [&](int idx, int existing, long long) {
        if (existing > 0 && !violation) {
            const CwNode& n = e.node(idx);
            violation = IrredundancyViolation{idx, n.a, n.b, n.line, n.col};
        }
    };
    eval_rec(e, e.root(), &hook);
    return violation;
}

namespace {

struct NormalizeRec {
    const CwExpr& in;
    // Rebuilt expression; drop[] marks joins to remove.
    std::vector<char> drop;

    CwExpr rebuild(int idx) const {
        const CwNode& n = in.node(idx);
        switch (n.op) {
            case CwOp::Intro:
                return CwExpr::intro(n.a);
            case CwOp::Union:
                return CwExpr::unite(rebuild(n.child0), rebuild(n.child1));
            case CwOp::Join:
                if (drop[static_cast<std::size_t>(idx)]) return rebuild(n.child0);
                return CwExpr::join(n.a, n.b, rebuild(n.child0));
            case CwOp::Relabel:
                return CwExpr::relabel(n.a, n.b, rebuild(n.child0));
        }
        throw internal_error("unreachable expression node kind");
    }
};

}  // namespace

CwExpr normalize(const CwExpr& e) {
    NormalizeRec rec{e, std::vector<char>(e.size(), 0)};
    JoinHook hook = [&](int idx, int existing, long long pairs) {
        if (existing == pairs) {
            rec.drop[static_cast<std::size_t>(idx)] = 1;  // complete no-op
        } else if (existing > 0) {
            const CwNode& n = e.node(idx);
            throw input_error("partial redundancy: eta " + std::to_string(n.a) + " " +
                              std::to_string(n.b) + " at line " + std::to_string(n.line) +
                              ", col " + std::to_string(n.col) + " faces " +
                              std::to_string(existing) + " of " + std::to_string(pairs) +
                              " possible edges; supply an irredundant expression");
        }
    };
    eval_rec(e, e.root(), &hook);
    return rec.rebuild(e.root());
}

std::optional<FamilyKind> family_kind_from_string(std::string_view s) {
    if (s == "path") return FamilyKind::Path;
    if (s == "cycle") return FamilyKind::Cycle;
    if (s == "complete") return FamilyKind::Complete;
    if (s == "complete_bipartite") return FamilyKind::CompleteBipartite;
    if (s == "star") return FamilyKind::Star;
    return std::nullopt;
}

namespace {

// Grow a path by one vertex: the active end carries label 2, the fresh vertex
// label 3, interior vertices label 1.
CwExpr path_extend(CwExpr e) {
    e = CwExpr::unite(std::move(e), CwExpr::intro(3));
    e = CwExpr::join(2, 3, std::move(e));
    e = CwExpr::relabel(2, 1, std::move(e));
    e = CwExpr::relabel(3, 2, std::move(e));
    return e;
}

}  // namespace

CwExpr gen_family(FamilyKind kind, int n) {
    int min_n = kind == FamilyKind::Cycle ? 3 : 1;
    if (n < min_n) {
        throw input_error("family size n = " + std::to_string(n) + " out of range (minimum " +
                          std::to_string(min_n) + ")");
    }
    switch (kind) {
        case FamilyKind::Path: {
            if (n == 1) return CwExpr::intro(1);
            CwExpr e = CwExpr::intro(2);
            for (int k = 2; k <= n; ++k) e = path_extend(std::move(e));
            return e;
        }
        case FamilyKind::Cycle: {
            // Vertex 1 keeps label 4 until the closing join.
            CwExpr e = CwExpr::unite(CwExpr::intro(4), CwExpr::intro(2));
            e = CwExpr::join(4, 2, std::move(e));
            for (int k = 3; k <= n; ++k) e = path_extend(std::move(e));
            return CwExpr::join(2, 4, std::move(e));
        }
        case FamilyKind::Complete: {
            CwExpr e = CwExpr::intro(1);
            for (int k = 2; k <= n; ++k) {
                e = CwExpr::unite(std::move(e), CwExpr::intro(2));
                e = CwExpr::join(1, 2, std::move(e));
                e = CwExpr::relabel(2, 1, std::move(e));
            }
            return e;
        }
        case FamilyKind::Star: {
            CwExpr e = CwExpr::intro(1);
            if (n == 1) return e;
            for (int k = 2; k <= n; ++k) e = CwExpr::unite(std::move(e), CwExpr::intro(2));
            return CwExpr::join(1, 2, std::move(e));
        }
        case FamilyKind::CompleteBipartite: {
            int a = (n + 1) / 2;
            CwExpr e = CwExpr::intro(1);
            for (int k = 2; k <= a; ++k) e = CwExpr::unite(std::move(e), CwExpr::intro(1));
            if (a == n) return e;
            for (int k = a + 1; k <= n; ++k) e = CwExpr::unite(std::move(e), CwExpr::intro(2));
            return CwExpr::join(1, 2, std::move(e));
        }
    }
    throw internal_error("unreachable family kind");
}

namespace {

// Bounded draw without std::uniform_int_distribution, whose mapping is
// implementation-defined; plain modulo keeps output identical across
// standard libraries.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

// Label-class bookkeeping per pooled subtree, enough to decide irredundancy
// without materializing graphs: class sizes and cross-class edge counts.
struct PoolEntry {
    CwExpr expr;
    std::vector<long long> size;                // 1..width
    std::vector<std::vector<long long>> cross;  // cross[i][j] for i<j

    explicit PoolEntry(int width)
        : size(static_cast<std::size_t>(width) + 1, 0),
          cross(static_cast<std::size_t>(width) + 1,
                std::vector<long long>(static_cast<std::size_t>(width) + 1, 0)) {}

    long long& xr(int i, int j) {
        return i < j ? cross[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                     : cross[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    }
};

}  // namespace

CwExpr gen_random_expr(int width, int ops, std::uint64_t seed) {
    if (width < 2) throw input_error("gen_random_expr: width must be >= 2");
    if (ops < 1) throw input_error("gen_random_expr: ops must be >= 1");
    std::mt19937_64 rng(seed);
    std::vector<PoolEntry> pool;

    auto add_intro = [&] {
        int label = 1 + static_cast<int>(draw(rng, static_cast<std::uint64_t>(width)));
        PoolEntry t(width);
        t.expr = CwExpr::intro(label);
        t.size[static_cast<std::size_t>(label)] = 1;
        pool.push_back(std::move(t));
    };

    add_intro();
    for (int step = 1; step < ops; ++step) {
        // Feasible (tree, i, j) moves per action.
        std::vector<std::array<int, 3>> joins, relabels;
        for (int t = 0; t < static_cast<int>(pool.size()); ++t) {
            auto& pe = pool[static_cast<std::size_t>(t)];
            for (int i = 1; i <= width; ++i) {
                if (pe.size[static_cast<std::size_t>(i)] == 0) continue;
                for (int j = 1; j <= width; ++j) {
                    if (j == i) continue;
                    if (pe.size[static_cast<std::size_t>(j)] > 0 && i < j && pe.xr(i, j) == 0) {
                        joins.push_back({t, i, j});
                    }
                    relabels.push_back({t, i, j});
                }
            }
        }
        // Weighted action choice among the feasible ones.
        std::vector<std::pair<int, int>> actions;  // (action id, weight)
        actions.emplace_back(0, 4);                // intro
        if (!joins.empty()) actions.emplace_back(1, 3);
        if (!relabels.empty()) actions.emplace_back(2, 2);
        if (pool.size() >= 2) actions.emplace_back(3, 2);
        int total = 0;
        for (auto& [id, w] : actions) total += w;
        int pick = static_cast<int>(draw(rng, static_cast<std::uint64_t>(total)));
        int action = 0;
        for (auto& [id, w] : actions) {
            if (pick < w) {
                action = id;
                break;
            }
            pick -= w;
        }

        if (action == 0) {
            add_intro();
        } else if (action == 1) {
            auto [t, i, j] = joins[draw(rng, joins.size())];
            auto& pe = pool[static_cast<std::size_t>(t)];
            pe.expr = CwExpr::join(i, j, std::move(pe.expr));
            pe.xr(i, j) = pe.size[static_cast<std::size_t>(i)] * pe.size[static_cast<std::size_t>(j)];
        } else if (action == 2) {
            auto [t, i, j] = relabels[draw(rng, relabels.size())];
            auto& pe = pool[static_cast<std::size_t>(t)];
            pe.expr = CwExpr::relabel(i, j, std::move(pe.expr));
            pe.size[static_cast<std::size_t>(j)] += pe.size[static_cast<std::size_t>(i)];
            pe.size[static_cast<std::size_t>(i)] = 0;
            for (int w = 1; w <= width; ++w) {
                if (w == i || w == j) continue;
                pe.xr(j, w) += pe.xr(i, w);
                pe.xr(i, w) = 0;
            }
            pe.xr(i, j) = 0;  // former i-j edges are now internal to class j
        } else {
            std::size_t a = draw(rng, pool.size());
            std::size_t b = draw(rng, pool.size() - 1);
            if (b >= a) ++b;
            if (a > b) std::swap(a, b);
            auto& pa = pool[a];
            auto& pb = pool[b];
            pa.expr = CwExpr::unite(std::move(pa.expr), std::move(pb.expr));
            for (int i = 1; i <= width; ++i) {
                pa.size[static_cast<std::size_t>(i)] += pb.size[static_cast<std::size_t>(i)];
                for (int j = i + 1; j <= width; ++j) pa.xr(i, j) += pb.xr(i, j);
            }
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(b));
        }
    }

    while (pool.size() > 1) {
        pool[0].expr = CwExpr::unite(std::move(pool[0].expr), std::move(pool[1].expr));
        pool.erase(pool.begin() + 1);
    }
    return std::move(pool[0].expr);
}

}  // namespace cwmatch
