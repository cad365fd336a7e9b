#include "cwmatch/acyclic.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <numeric>
#include <set>

namespace cwmatch {

const char* gamma_name(Gamma g) {
    switch (g) {
        case Gamma::Zero: return "g0";
        case Gamma::TildeOne: return "g~1";
        case Gamma::One: return "g1";
        case Gamma::TildeTwo: return "g~2";
        case Gamma::Two: return "g2";
        case Gamma::MinusTwo: return "g-2";
    }
    return "?";
}

namespace {

using GammaPair = std::pair<Gamma, Gamma>;

constexpr Gamma G0 = Gamma::Zero;
constexpr Gamma G1t = Gamma::TildeOne;
constexpr Gamma G1 = Gamma::One;
constexpr Gamma G2t = Gamma::TildeTwo;
constexpr Gamma G2 = Gamma::Two;
constexpr Gamma G2m = Gamma::MinusTwo;

std::size_t gidx(Gamma g) { return static_cast<std::size_t>(g); }

// Join transition table f : Gamma x Gamma -> subsets of Gamma x Gamma, row =
// state of label i, column = state of label j before eta_{i,j}.
const std::array<std::array<std::vector<GammaPair>, 6>, 6>& f_table() {
    static const auto table = [] {
        std::array<std::array<std::vector<GammaPair>, 6>, 6> t;
        for (Gamma b : {G0, G1t, G1, G2t, G2, G2m}) t[gidx(G0)][gidx(b)] = {{G0, b}};
        t[gidx(G1t)][gidx(G0)] = {{G1t, G0}};
        t[gidx(G1t)][gidx(G1t)] = {{G1t, G1t}, {G1, G1}};
        t[gidx(G1t)][gidx(G1)] = {{G1t, G1}};
        t[gidx(G1t)][gidx(G2t)] = {{G1, G2m}};
        t[gidx(G1t)][gidx(G2)] = {{G1t, G2m}};
        t[gidx(G1)][gidx(G0)] = {{G1, G0}};
        t[gidx(G1)][gidx(G1t)] = {{G1, G1t}};
        t[gidx(G1)][gidx(G1)] = {{G1, G1}};
        t[gidx(G1)][gidx(G2)] = {{G1, G2m}};
        t[gidx(G2t)][gidx(G0)] = {{G2t, G0}};
        t[gidx(G2t)][gidx(G1t)] = {{G2m, G1}};
        t[gidx(G2)][gidx(G0)] = {{G2, G0}};
        t[gidx(G2)][gidx(G1t)] = {{G2m, G1t}};
        t[gidx(G2)][gidx(G1)] = {{G2m, G1}};
        t[gidx(G2m)][gidx(G0)] = {{G2m, G0}};
        return t;
    }();
    return table;
}

// Relabel/union merge table g : Gamma x Gamma -> subsets of Gamma.
const std::array<std::array<std::vector<Gamma>, 6>, 6>& g_table() {
    static const auto table = [] {
        std::array<std::array<std::vector<Gamma>, 6>, 6> t;
        for (Gamma b : {G0, G1t, G1, G2t, G2, G2m}) t[gidx(G0)][gidx(b)] = {b};
        t[gidx(G1t)][gidx(G0)] = {G1t};
        t[gidx(G1t)][gidx(G1)] = {G2t};
        t[gidx(G1t)][gidx(G2)] = {G2t};
        t[gidx(G1)][gidx(G0)] = {G1};
        t[gidx(G1)][gidx(G1t)] = {G2t};
        t[gidx(G1)][gidx(G1)] = {G2, G2m};
        t[gidx(G1)][gidx(G2t)] = {G2t};
        t[gidx(G1)][gidx(G2)] = {G2};
        t[gidx(G1)][gidx(G2m)] = {G2m};
        t[gidx(G2t)][gidx(G0)] = {G2t};
        t[gidx(G2t)][gidx(G1)] = {G2t};
        t[gidx(G2t)][gidx(G2)] = {G2t};
        t[gidx(G2)][gidx(G0)] = {G2};
        t[gidx(G2)][gidx(G1t)] = {G2t};
        t[gidx(G2)][gidx(G1)] = {G2};
        t[gidx(G2)][gidx(G2t)] = {G2t};
        t[gidx(G2)][gidx(G2)] = {G2};
        t[gidx(G2m)][gidx(G0)] = {G2m};
        t[gidx(G2m)][gidx(G1)] = {G2m};
        t[gidx(G2m)][gidx(G2m)] = {G2m};
        return t;
    }();
    return table;
}

}  // namespace

const std::vector<std::pair<Gamma, Gamma>>& acdp_f(Gamma a, Gamma b) {
    return f_table()[gidx(a)][gidx(b)];
}

std::vector<std::pair<Gamma, Gamma>> acdp_f_preimages(Gamma a, Gamma b) {
    std::vector<GammaPair> out;
    for (Gamma x : {G0, G1t, G1, G2t, G2, G2m}) {
        for (Gamma y : {G0, G1t, G1, G2t, G2, G2m}) {
            for (const auto& image : acdp_f(x, y)) {
                if (image == GammaPair{a, b}) out.emplace_back(x, y);
            }
        }
    }
    return out;
}

const std::vector<Gamma>& acdp_g(Gamma a, Gamma b) { return g_table()[gidx(a)][gidx(b)]; }

std::vector<std::pair<Gamma, Gamma>> acdp_g_preimages(Gamma merged) {
    std::vector<GammaPair> out;
    for (Gamma x : {G0, G1t, G1, G2t, G2, G2m}) {
        for (Gamma y : {G0, G1t, G1, G2t, G2, G2m}) {
            for (Gamma image : acdp_g(x, y)) {
                if (image == merged) out.emplace_back(x, y);
            }
        }
    }
    return out;
}

std::uint64_t pow6(int e) {
    static const auto table = [] {
        std::array<std::uint64_t, 25> t{};
        t[0] = 1;
        for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * 6;
        return t;
    }();
    return table[static_cast<std::size_t>(e)];
}

GammaCode gamma_with_digit(GammaCode code, int label, Gamma g) {
    std::uint64_t step = pow6(label - 1);
    std::uint64_t old = static_cast<std::uint64_t>(gamma_digit(code, label));
    return code - old * step + static_cast<std::uint64_t>(g) * step;
}

std::string gamma_code_to_string(GammaCode code, int width) {
    std::string out = "(";
    for (int w = 1; w <= width; ++w) {
        if (w > 1) out += ",";
        out += gamma_name(gamma_digit(code, w));
    }
    return out + ")";
}

AtomSet gamma_ground(GammaCode code, int width) {
    AtomSet ground = atom_bit(kV0);
    for (int w = 1; w <= width; ++w) {
        if (gamma_live(gamma_digit(code, w))) ground |= atom_bit(w);
    }
    return ground;
}

const WeightedPartitionSet* AcyclicTable::find(GammaCode code) const {
    auto it = slots_.find(code);
    return it == slots_.end() ? nullptr : &it->second;
}

void AcyclicTable::set(GammaCode code, WeightedPartitionSet s) {
    if (s.empty()) {
        slots_.erase(code);
        return;
    }
    if (s.ground != gamma_ground(code, width_)) {
        throw internal_error("acyclic table: ground set does not match signature " +
                             gamma_code_to_string(code, width_));
    }
    slots_[code] = std::move(s);
}

std::size_t AcyclicTable::entry_count() const {
    std::size_t total = 0;
    for (const auto& [code, s] : slots_) total += s.size();
    return total;
}

AcyclicTable acdp_singleton(int width, int label, std::uint64_t vertex_weight) {
    AcyclicTable t(width);
    WeightedPartitionSet empty_sol;
    empty_sol.ground = atom_bit(kV0);
    empty_sol.items.push_back({Partition::single_block(atom_bit(kV0)), 0});
    t.set(0, std::move(empty_sol));

    // The vertex may or may not take the v0-edge into E0.
    AtomSet ground = atom_bit(kV0) | atom_bit(label);
    WeightedPartitionSet with_vertex;
    with_vertex.ground = ground;
    with_vertex.items.push_back({Partition::single_block(ground), vertex_weight});
    with_vertex.items.push_back({Partition::singletons(ground), vertex_weight});
    with_vertex.sort_canonical();
    t.set(gamma_with_digit(0, label, G1t), std::move(with_vertex));
    return t;
}

namespace {

// {({{i,j}}, 0)}: the connectivity effect of fusing classes i and j.
WeightedPartitionSet pair_block(int i, int j) {
    WeightedPartitionSet s;
    s.ground = atom_bit(i) | atom_bit(j);
    s.items.push_back({Partition::single_block(s.ground), 0});
    return s;
}

void accumulate(WeightedPartitionSet& into, const WeightedPartitionSet& from, AtomSet expect_ground) {
    if (from.ground != expect_ground) {
        throw internal_error("acyclic DP: contribution ground mismatch");
    }
    if (into.items.empty()) into.ground = from.ground;
    into.items.insert(into.items.end(), from.items.begin(), from.items.end());
}

}  // namespace

AcyclicTable acdp_join(const AcyclicTable& t, int i, int j, AcreduceBackend backend) {
    if (i == j) throw input_error("join labels must differ");
    AcyclicTable out(t.width());
    std::map<GammaCode, WeightedPartitionSet> copies;
    std::map<GammaCode, WeightedPartitionSet> accum;

    for (const auto& [code, set] : t.slots()) {
        Gamma a = gamma_digit(code, i), b = gamma_digit(code, j);
        if (a == G0 || b == G0) {
            copies[code] = set;  // eta with an empty side changes nothing
            continue;
        }
        for (const auto& [alpha, beta] : acdp_f(a, b)) {
            GammaCode target = gamma_with_digit(gamma_with_digit(code, i, alpha), j, beta);
            WeightedPartitionSet joined = acjoin(set, pair_block(i, j));
            AtomSet drop = 0;
            if (alpha == G2m) drop |= atom_bit(i);
            if (beta == G2m) drop |= atom_bit(j);
            WeightedPartitionSet contrib = proj(joined, drop);
            accumulate(accum[target], contrib, gamma_ground(target, t.width()));
        }
    }
    for (auto& [code, set] : copies) out.set(code, std::move(set));
    for (auto& [code, set] : accum) out.set(code, acreduce(set, backend));
    return out;
}

AcyclicTable acdp_relabel(const AcyclicTable& t, int i, int j, AcreduceBackend backend) {
    if (i == j) throw input_error("relabel labels must differ");
    AcyclicTable out(t.width());
    std::map<GammaCode, WeightedPartitionSet> accum;

    for (const auto& [code, set] : t.slots()) {
        Gamma a = gamma_digit(code, i), b = gamma_digit(code, j);
        if (a == G0) {
            // Solutions untouched by the relabel.
            accumulate(accum[code], set, gamma_ground(code, t.width()));
            continue;
        }
        if (b == G0) {
            // The class moves wholesale from label i to label j.
            GammaCode target = gamma_with_digit(gamma_with_digit(code, i, G0), j, a);
            if (a == G2m) {
                accumulate(accum[target], set, gamma_ground(target, t.width()));
            } else {
                WeightedPartitionSet contrib = proj(acjoin(set, pair_block(i, j)), atom_bit(i));
                accumulate(accum[target], contrib, gamma_ground(target, t.width()));
            }
            continue;
        }
        // Both classes occupied: they merge into label j.
        for (Gamma merged : acdp_g(a, b)) {
            GammaCode target = gamma_with_digit(gamma_with_digit(code, i, G0), j, merged);
            WeightedPartitionSet contrib;
            if (merged == G2m) {
                contrib = proj(set, (atom_bit(i) | atom_bit(j)) & set.ground);
            } else {  // TildeTwo or Two: a future join fuses the merged class
                contrib = proj(acjoin(set, pair_block(i, j)), atom_bit(i));
            }
            accumulate(accum[target], contrib, gamma_ground(target, t.width()));
        }
    }
    for (auto& [code, set] : accum) out.set(code, acreduce(set, backend));
    return out;
}

AcyclicTable acdp_union(const AcyclicTable& t1, const AcyclicTable& t2, AcreduceBackend backend,
                        int threads) {
    if (t1.width() != t2.width()) throw internal_error("union of tables with different widths");
    int width = t1.width();
    AcyclicTable out(width);

    std::vector<const std::pair<const GammaCode, WeightedPartitionSet>*> entries1;
    for (const auto& e : t1.slots()) entries1.push_back(&e);

    std::vector<std::map<GammaCode, WeightedPartitionSet>> staged(entries1.size());
    parallel_for(entries1.size(), threads, [&](std::size_t idx) {
        const auto& [code1, set1] = *entries1[idx];
        auto& local = staged[idx];
        for (const auto& [code2, set2] : t2.slots()) {
            // Options per label; empty cell kills the pairing.
            std::vector<const std::vector<Gamma>*> options(static_cast<std::size_t>(width));
            bool dead = false;
            for (int w = 1; w <= width; ++w) {
                const auto& opts = acdp_g(gamma_digit(code1, w), gamma_digit(code2, w));
                if (opts.empty()) {
                    dead = true;
                    break;
                }
                options[static_cast<std::size_t>(w - 1)] = &opts;
            }
            if (dead) continue;
            // Enumerate all agreeing output signatures.
            std::vector<std::size_t> pick(static_cast<std::size_t>(width), 0);
            while (true) {
                GammaCode target = 0;
                AtomSet drop = 0;
                for (int w = 1; w <= width; ++w) {
                    Gamma s = (*options[static_cast<std::size_t>(w - 1)])[pick[static_cast<std::size_t>(w - 1)]];
                    target += static_cast<std::uint64_t>(s) * pow6(w - 1);
                    if (s == G2m) drop |= atom_bit(w);
                }
                WeightedPartitionSet p1 = proj(set1, drop & set1.ground);
                WeightedPartitionSet p2 = proj(set2, drop & set2.ground);
                WeightedPartitionSet contrib = acjoin(p1, p2);
                accumulate(local[target], contrib, gamma_ground(target, width));

                int w = 0;
                for (; w < width; ++w) {
                    auto wi = static_cast<std::size_t>(w);
                    if (++pick[wi] < options[wi]->size()) break;
                    pick[wi] = 0;
                }
                if (w == width) break;
            }
        }
    });

    std::map<GammaCode, WeightedPartitionSet> accum;
    for (auto& local : staged) {
        for (auto& [code, set] : local) {
            if (set.empty()) continue;
            accumulate(accum[code], set, gamma_ground(code, width));
        }
    }
    for (auto& [code, set] : accum) out.set(code, acreduce(set, backend));
    return out;
}

namespace {

struct AcyclicSolveCtx {
    const CwExpr& e;
    const AcyclicSolveOptions& opts;
    NodeStats stats;

    AcyclicTable run(int idx) {
        const CwNode& n = e.node(idx);
        switch (n.op) {
            case CwOp::Intro: {
                StopWatch sw;
                auto t = acdp_singleton(e.width(), n.a, 1);
                stats.singleton_ms += sw.elapsed_ms();
                ++stats.singleton_nodes;
                stats.note_table(t.entry_count());
                return t;
            }
            case CwOp::Join: {
                auto child = run(n.child0);
                StopWatch sw;
                auto t = acdp_join(child, n.a, n.b, opts.backend);
                stats.join_ms += sw.elapsed_ms();
                ++stats.join_nodes;
                stats.note_table(t.entry_count());
                return t;
            }
            case CwOp::Relabel: {
                auto child = run(n.child0);
                StopWatch sw;
                auto t = acdp_relabel(child, n.a, n.b, opts.backend);
                stats.relabel_ms += sw.elapsed_ms();
                ++stats.relabel_nodes;
                stats.note_table(t.entry_count());
                return t;
            }
            case CwOp::Union: {
                auto left = run(n.child0);
                auto right = run(n.child1);
                StopWatch sw;
                auto t = acdp_union(left, right, opts.backend, opts.threads);
                stats.union_ms += sw.elapsed_ms();
                ++stats.union_nodes;
                stats.note_table(t.entry_count());
                return t;
            }
        }
        throw internal_error("unreachable expression node kind");
    }
};

}  // namespace

AcyclicResult solve_max_acyclic(const CwExpr& e, const AcyclicSolveOptions& opts) {
    if (e.width() > opts.max_width) {
        throw limit_error("expression width " + std::to_string(e.width()) +
                          " exceeds configured maximum " + std::to_string(opts.max_width));
    }
    if (auto violation = check_irredundant(e)) {
        throw input_error("expression is not irredundant: eta " + std::to_string(violation->label_i) +
                          " " + std::to_string(violation->label_j) + " at line " +
                          std::to_string(violation->line) + ", col " + std::to_string(violation->col));
    }
    AcyclicSolveCtx ctx{e, opts, {}};
    AcyclicTable root = ctx.run(e.root());

    std::uint64_t best = 0;
    std::uint64_t relaxed_best = 0;  // Two reinterpreted as MinusTwo
    for (const auto& [code, set] : root.slots()) {
        bool open = false;      // states still expecting future vertices/joins
        bool has_two = false;
        AtomSet two_atoms = 0;
        for (int w = 1; w <= e.width(); ++w) {
            Gamma g = gamma_digit(code, w);
            if (g == G1t || g == G2t) open = true;
            if (g == G2) {
                has_two = true;
                two_atoms |= atom_bit(w);
            }
        }
        if (open) continue;
        if (!has_two) {
            Partition target = Partition::single_block(set.ground);
            for (const auto& [p, w] : set.items) {
                if (p == target && w > best) best = w;
            }
        }
        // Sanity bound: dropping pending-join promises must never win.
        WeightedPartitionSet flattened = proj(set, two_atoms);
        Partition target = Partition::single_block(flattened.ground);
        for (const auto& [p, w] : flattened.items) {
            if (p == target && w > relaxed_best) relaxed_best = w;
        }
    }
    if (relaxed_best > best) {
        throw internal_error("acyclic DP: discarding pending-join promises increased the optimum");
    }

    AcyclicResult res;
    res.max_weight = best;
    if (best % 2 != 0) throw internal_error("acyclic DP: odd optimum under unit weights");
    res.max_matching_size = static_cast<int>(best / 2);
    res.stats = ctx.stats;
    return res;
}

std::vector<std::vector<Gamma>> gamma_state_options(const LabeledGraph& h,
                                                    const std::vector<VertexId>& s,
                                                    const Matching& m) {
    std::vector<char> in(static_cast<std::size_t>(h.graph.n()) + 1, 0);
    for (VertexId v : s) in[static_cast<std::size_t>(v)] = 1;
    std::vector<char> matched(static_cast<std::size_t>(h.graph.n()) + 1, 0);
    for (const auto& [u, v] : m.edges) {
        matched[static_cast<std::size_t>(u)] = matched[static_cast<std::size_t>(v)] = 1;
    }
    std::vector<std::vector<Gamma>> out(static_cast<std::size_t>(h.width) + 1);
    for (int i = 1; i <= h.width; ++i) {
        int total = 0, unsat = 0;
        for (VertexId v = 1; v <= h.graph.n(); ++v) {
            if (!in[static_cast<std::size_t>(v)] || h.label(v) != i) continue;
            ++total;
            if (!matched[static_cast<std::size_t>(v)]) ++unsat;
        }
        auto& slot = out[static_cast<std::size_t>(i)];
        if (total == 0) {
            slot = {G0};
        } else if (total == 1) {
            slot = {unsat == 1 ? G1t : G1};
        } else if (unsat == 1) {
            slot = {G2t};
        } else if (unsat == 0) {
            slot = {G2, G2m};
        }
        // unsat >= 2: no compatible state, slot stays empty.
    }
    return out;
}

bool CertificateGraph::is_forest() const {
    std::map<VertexId, VertexId> parent;
    for (VertexId v : vertices) parent[v] = v;
    std::function<VertexId(VertexId)> find = [&](VertexId x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& [u, v] : edges) {
        VertexId ru = find(u), rv = find(v);
        if (ru == rv) return false;
        parent[ru] = rv;
    }
    return true;
}

bool CertificateGraph::components_touch_live(const LabeledGraph& h, const std::vector<VertexId>& s,
                                             GammaCode sig) const {
    std::map<VertexId, VertexId> parent;
    for (VertexId v : vertices) parent[v] = v;
    std::function<VertexId(VertexId)> find = [&](VertexId x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& [u, v] : edges) parent[find(u)] = find(v);
    std::set<VertexId> live_roots;
    live_roots.insert(find(0));  // v0
    for (VertexId v : s) {
        if (gamma_live(gamma_digit(sig, h.label(v)))) live_roots.insert(find(v));
    }
    for (VertexId v : vertices) {
        if (!live_roots.count(find(v))) return false;
    }
    return true;
}

CertificateGraph build_certificate_graph(const LabeledGraph& h, const std::vector<VertexId>& s,
                                         const std::vector<VertexId>& e0_targets, GammaCode sig) {
    CertificateGraph cg;
    std::vector<char> in(static_cast<std::size_t>(h.graph.n()) + 1, 0);
    for (VertexId v : s) in[static_cast<std::size_t>(v)] = 1;
    cg.vertices.push_back(0);  // v0
    for (VertexId v : s) cg.vertices.push_back(v);
    for (const auto& [u, v] : h.graph.edges()) {
        if (in[static_cast<std::size_t>(u)] && in[static_cast<std::size_t>(v)]) cg.edges.emplace_back(u, v);
    }
    for (VertexId v : e0_targets) cg.edges.emplace_back(0, v);
    for (int i = 1; i <= h.width; ++i) {
        Gamma g = gamma_digit(sig, i);
        if (g != G2t && g != G2) continue;
        VertexId plus = h.graph.n() + i;
        cg.vertices.push_back(plus);
        for (VertexId v : s) {
            if (h.label(v) == i) cg.edges.emplace_back(v, plus);
        }
    }
    return cg;
}

Partition certificate_partition(const LabeledGraph& h, const std::vector<VertexId>& s,
                                const CertificateGraph& cg, GammaCode sig) {
    std::map<VertexId, VertexId> parent;
    for (VertexId v : cg.vertices) parent[v] = v;
    std::function<VertexId(VertexId)> find = [&](VertexId x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& [u, v] : cg.edges) parent[find(u)] = find(v);

    AtomSet ground = gamma_ground(sig, h.width);
    std::map<VertexId, AtomSet> group;
    group[find(0)] |= atom_bit(kV0);
    for (VertexId v : s) {
        int lbl = h.label(v);
        if (gamma_live(gamma_digit(sig, lbl))) group[find(v)] |= atom_bit(lbl);
    }
    std::vector<AtomSet> blocks;
    for (auto& [root, atoms] : group) {
        if (atoms) blocks.push_back(atoms);
    }
    Partition p = Partition::from_blocks(std::move(blocks));
    if (p.ground() != ground) {
        throw internal_error("certificate partition does not cover the signature ground set");
    }
    return p;
}

}  // namespace cwmatch
