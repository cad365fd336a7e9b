#include "cwmatch/induced.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <tuple>

namespace cwmatch {

std::uint64_t pow3(int e) {
    static const auto table = [] {
        std::array<std::uint64_t, 41> t{};
        t[0] = 1;
        for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * 3;
        return t;
    }();
    return table[static_cast<std::size_t>(e)];
}

std::optional<Signature> signature_of(const LabeledGraph& h, const std::vector<VertexId>& s) {
    std::vector<char> in(static_cast<std::size_t>(h.graph.n()) + 1, 0);
    for (VertexId v : s) in[static_cast<std::size_t>(v)] = 1;
    std::vector<int> deg(static_cast<std::size_t>(h.graph.n()) + 1, 0);
    for (const auto& [u, v] : h.graph.edges()) {
        if (in[static_cast<std::size_t>(u)] && in[static_cast<std::size_t>(v)]) {
            ++deg[static_cast<std::size_t>(u)];
            ++deg[static_cast<std::size_t>(v)];
        }
    }
    Signature sig(static_cast<std::size_t>(h.width), 0);
    std::vector<int> in_class(static_cast<std::size_t>(h.width) + 1, 0);
    std::vector<int> unsat(static_cast<std::size_t>(h.width) + 1, 0);
    std::vector<char> all_deg1(static_cast<std::size_t>(h.width) + 1, 1);
    for (VertexId v = 1; v <= h.graph.n(); ++v) {
        if (!in[static_cast<std::size_t>(v)]) continue;
        int lbl = h.label(v);
        ++in_class[static_cast<std::size_t>(lbl)];
        int d = deg[static_cast<std::size_t>(v)];
        if (d != 1) all_deg1[static_cast<std::size_t>(lbl)] = 0;
        if (d == 0) ++unsat[static_cast<std::size_t>(lbl)];
        if (d > 1) return std::nullopt;  // not even a partial matching
    }
    for (int i = 1; i <= h.width; ++i) {
        auto li = static_cast<std::size_t>(i);
        if (in_class[li] == 0) {
            sig[li - 1] = 0;
        } else if (all_deg1[li]) {
            sig[li - 1] = 1;
        } else if (in_class[li] == 1 && unsat[li] == 1) {
            sig[li - 1] = 2;
        } else {
            return std::nullopt;
        }
    }
    return sig;
}

void SigRow::add(SigCode code, const mpz_class& v) {
    if (dense_) {
        mpz_class& slot = dense_vals_[code];
        bool was_zero = slot == 0;
        slot += v;
        if (was_zero && slot != 0) ++dense_nonzero_;
        else if (!was_zero && slot == 0) --dense_nonzero_;
        return;
    }
    auto [it, inserted] = sparse_.emplace(code, v);
    if (!inserted) it->second += v;
}

void SigRow::for_each(const std::function<void(SigCode, const mpz_class&)>& fn) const {
    if (dense_) {
        for (SigCode c = 0; c < dense_vals_.size(); ++c) {
            if (dense_vals_[c] != 0) fn(c, dense_vals_[c]);
        }
    } else {
        for (const auto& [c, v] : sparse_) {
            if (v != 0) fn(c, v);
        }
    }
}

const mpz_class* SigRow::find(SigCode code) const {
    if (dense_) {
        const mpz_class& v = dense_vals_[code];
        return v == 0 ? nullptr : &v;
    }
    auto it = sparse_.find(code);
    return it == sparse_.end() || it->second == 0 ? nullptr : &it->second;
}

std::size_t SigRow::entry_count() const {
    if (dense_) return dense_nonzero_;
    std::size_t c = 0;
    for (const auto& [code, v] : sparse_) {
        if (v != 0) ++c;
    }
    return c;
}

void SigRow::finalize(std::uint64_t total_codes) {
    if (dense_) return;
    for (auto it = sparse_.begin(); it != sparse_.end();) {
        if (it->second == 0) {
            it = sparse_.erase(it);
            continue;
        }
        if (it->second < 0) throw internal_error("negative count in signature table");
        ++it;
    }
    // Dense pays off once >= 5% of all codes are populated (and is capped so a
    // single row cannot exhaust memory at large widths).
    if (total_codes <= (1u << 24) && sparse_.size() * 20 >= total_codes) {
        dense_vals_.assign(total_codes, mpz_class(0));
        dense_nonzero_ = sparse_.size();
        for (auto& [c, v] : sparse_) dense_vals_[c] = std::move(v);
        sparse_.clear();
        dense_ = true;
    }
}

SignatureTable::SignatureTable(int width, int max_k)
    : width_(width), max_k_(max_k), rows_(static_cast<std::size_t>(max_k) + 1) {}

std::size_t SignatureTable::entry_count() const {
    std::size_t total = 0;
    for (const auto& r : rows_) total += r.entry_count();
    return total;
}

void SignatureTable::finalize() {
    for (auto& r : rows_) r.finalize(pow3(width_));
}

bool SignatureTable::equal(const SignatureTable& other) const {
    if (width_ != other.width_ || max_k_ != other.max_k_) return false;
    for (int k = 0; k <= max_k_; ++k) {
        bool same = true;
        row(k).for_each([&](SigCode c, const mpz_class& v) {
            const mpz_class* o = other.row(k).find(c);
            if (!o || *o != v) same = false;
        });
        other.row(k).for_each([&](SigCode c, const mpz_class& v) {
            const mpz_class* o = row(k).find(c);
            if (!o || *o != v) same = false;
        });
        if (!same) return false;
    }
    return true;
}

SignatureTable dp_singleton(int width, int label, int max_k) {
    SignatureTable t(width, max_k);
    t.add(0, 0, 1);
    t.add(1, sig_with_digit(0, label, 2), 1);
    t.finalize();
    return t;
}

SignatureTable dp_join(const SignatureTable& t, int i, int j) {
    if (i == j) throw input_error("join labels must differ");
    SignatureTable out(t.width(), t.max_k());
    for (int k = 0; k <= t.max_k(); ++k) {
        t.row(k).for_each([&](SigCode code, const mpz_class& v) {
            int di = sig_digit(code, i), dj = sig_digit(code, j);
            if (di == 0 || dj == 0) {
                out.add(k, code, v);
            } else if (di == 2 && dj == 2) {
                out.add(k, sig_with_digit(sig_with_digit(code, i, 1), j, 1), v);
            }
            // (1,1), (1,2), (2,1): the new edges force a degree >= 2, no image.
        });
    }
    out.finalize();
    return out;
}

SignatureTable dp_relabel(const SignatureTable& t, int i, int j) {
    if (i == j) throw input_error("relabel labels must differ");
    SignatureTable out(t.width(), t.max_k());
    for (int k = 0; k <= t.max_k(); ++k) {
        t.row(k).for_each([&](SigCode code, const mpz_class& v) {
            int di = sig_digit(code, i), dj = sig_digit(code, j);
            int merged;
            if (di == 0 || dj == 0) {
                merged = std::max(di, dj);
            } else if (di == 1 && dj == 1) {
                merged = 1;
            } else {
                return;  // an unsaturated vertex would share the class with others
            }
            out.add(k, sig_with_digit(sig_with_digit(code, i, 0), j, merged), v);
        });
    }
    out.finalize();
    return out;
}

SignatureTable zeta_expand(const SignatureTable& t) {
    SignatureTable cur = t;
    for (int w = 1; w <= t.width(); ++w) {
        SignatureTable next(t.width(), t.max_k());
        std::uint64_t step = pow3(w - 1);
        for (int k = 0; k <= t.max_k(); ++k) {
            cur.row(k).for_each([&](SigCode code, const mpz_class& v) {
                next.add(k, code, v);
                if (sig_digit(code, w) == 0) next.add(k, code + step, v);
            });
        }
        next.finalize();
        cur = std::move(next);
    }
    return cur;
}

SignatureTable mobius_contract(const SignatureTable& t) {
    SignatureTable cur = t;
    for (int w = 1; w <= t.width(); ++w) {
        SignatureTable next(t.width(), t.max_k());
        std::uint64_t step = pow3(w - 1);
        mpz_class neg;
        for (int k = 0; k <= t.max_k(); ++k) {
            cur.row(k).for_each([&](SigCode code, const mpz_class& v) {
                next.add(k, code, v);
                if (sig_digit(code, w) == 0) {
                    neg = -v;
                    next.add(k, code + step, neg);
                }
            });
        }
        next.finalize();  // throws on negatives
        cur = std::move(next);
    }
    return cur;
}

namespace {

// Entries of one row grouped by the mask of merged (~1) coordinates.
using MaskBuckets = std::map<std::uint64_t, std::vector<std::pair<SigCode, const mpz_class*>>>;

MaskBuckets bucket_by_mask(const SigRow& row, int width) {
    MaskBuckets out;
    row.for_each([&](SigCode code, const mpz_class& v) {
        std::uint64_t mask = 0;
        for (int w = 1; w <= width; ++w) {
            if (sig_digit(code, w) == 1) mask |= 1ull << (w - 1);
        }
        out[mask].emplace_back(code, &v);
    });
    return out;
}

// bin_A packing: bit j of the index corresponds to the j-th non-merged
// coordinate in ascending label order, set iff that digit is 2.
std::uint64_t encode_bin(SigCode code, const std::vector<int>& free_labels) {
    std::uint64_t bin = 0;
    for (std::size_t j = 0; j < free_labels.size(); ++j) {
        if (sig_digit(code, free_labels[j]) == 2) bin |= 1ull << j;
    }
    return bin;
}

SigCode decode_bin(std::uint64_t bin, std::uint64_t mask, const std::vector<int>& free_labels) {
    SigCode code = 0;
    for (int w = 0; w < 64; ++w) {
        if (mask & (1ull << w)) code += pow3(w);  // digit 1 = merged
    }
    for (std::size_t j = 0; j < free_labels.size(); ++j) {
        if (bin & (1ull << j)) code += 2 * pow3(free_labels[j] - 1);
    }
    return code;
}

}  // namespace

SignatureTable union_convolve(const SignatureTable& ta, const SignatureTable& tb, int n_total,
                              const ConvOptions& conv, int threads) {
    int width = ta.width();
    if (width != tb.width()) throw internal_error("union of tables with different widths");
    SignatureTable out(width, n_total);

    std::vector<MaskBuckets> buckets_a(static_cast<std::size_t>(ta.max_k()) + 1);
    std::vector<MaskBuckets> buckets_b(static_cast<std::size_t>(tb.max_k()) + 1);
    std::vector<std::uint64_t> masks;
    for (int k = 0; k <= ta.max_k(); ++k) {
        buckets_a[static_cast<std::size_t>(k)] = bucket_by_mask(ta.row(k), width);
        for (const auto& [m, es] : buckets_a[static_cast<std::size_t>(k)]) masks.push_back(m);
    }
    for (int k = 0; k <= tb.max_k(); ++k) {
        buckets_b[static_cast<std::size_t>(k)] = bucket_by_mask(tb.row(k), width);
        for (const auto& [m, es] : buckets_b[static_cast<std::size_t>(k)]) masks.push_back(m);
    }
    std::sort(masks.begin(), masks.end());
    masks.erase(std::unique(masks.begin(), masks.end()), masks.end());

    // Distinct masks address disjoint code ranges, so each is an independent
    // work item; contributions are staged per mask and merged afterwards.
    std::vector<std::vector<std::tuple<int, SigCode, mpz_class>>> staged(masks.size());

    parallel_for(masks.size(), threads, [&](std::size_t mi) {
        std::uint64_t mask = masks[mi];
        std::vector<int> free_labels;
        for (int w = 1; w <= width; ++w) {
            if (!(mask & (1ull << (w - 1)))) free_labels.push_back(w);
        }
        int m = static_cast<int>(free_labels.size());
        std::size_t poly_len = 1ull << m;
        auto& sink = staged[mi];

        for (int k1 = 0; k1 <= ta.max_k(); ++k1) {
            auto ita = buckets_a[static_cast<std::size_t>(k1)].find(mask);
            if (ita == buckets_a[static_cast<std::size_t>(k1)].end()) continue;
            // Pack side A once per k1: full coefficient vector plus per-popcount split.
            std::vector<std::vector<mpz_class>> pa(static_cast<std::size_t>(m) + 1,
                                                   std::vector<mpz_class>(poly_len, mpz_class(0)));
            std::vector<char> pa_used(static_cast<std::size_t>(m) + 1, 0);
            for (const auto& [code, pv] : ita->second) {
                std::uint64_t bin = encode_bin(code, free_labels);
                int r = std::popcount(bin);
                pa[static_cast<std::size_t>(r)][bin] = *pv;
                pa_used[static_cast<std::size_t>(r)] = 1;
            }
            for (int k2 = 0; k2 + k1 <= n_total && k2 <= tb.max_k(); ++k2) {
                auto itb = buckets_b[static_cast<std::size_t>(k2)].find(mask);
                if (itb == buckets_b[static_cast<std::size_t>(k2)].end()) continue;
                std::vector<std::vector<mpz_class>> pb(static_cast<std::size_t>(m) + 1,
                                                       std::vector<mpz_class>(poly_len, mpz_class(0)));
                std::vector<char> pb_used(static_cast<std::size_t>(m) + 1, 0);
                for (const auto& [code, pv] : itb->second) {
                    std::uint64_t bin = encode_bin(code, free_labels);
                    int r = std::popcount(bin);
                    pb[static_cast<std::size_t>(r)][bin] = *pv;
                    pb_used[static_cast<std::size_t>(r)] = 1;
                }
                for (int r1 = 0; r1 <= m; ++r1) {
                    if (!pa_used[static_cast<std::size_t>(r1)]) continue;
                    for (int r2 = 0; r1 + r2 <= m; ++r2) {
                        if (!pb_used[static_cast<std::size_t>(r2)]) continue;
                        Poly prod = multiply(pa[static_cast<std::size_t>(r1)],
                                             pb[static_cast<std::size_t>(r2)], conv);
                        int r = r1 + r2;
                        for (std::uint64_t e = 0; e < poly_len && e < prod.size(); ++e) {
                            if (std::popcount(e) != r || prod[e] == 0) continue;
                            sink.emplace_back(k1 + k2, decode_bin(e, mask, free_labels),
                                              std::move(prod[e]));
                        }
                    }
                }
            }
        }
    });

    for (auto& sink : staged) {
        for (auto& [k, code, v] : sink) out.add(k, code, v);
    }
    out.finalize();
    return out;
}

namespace {

struct SolveCtx {
    const CwExpr& e;
    const InducedSolveOptions& opts;
    NodeStats stats;

    // Returns (table, subtree vertex count).
    std::pair<SignatureTable, int> run(int idx) {
        const CwNode& n = e.node(idx);
        switch (n.op) {
            case CwOp::Intro: {
                StopWatch sw;
                auto t = dp_singleton(e.width(), n.a, 1);
                stats.singleton_ms += sw.elapsed_ms();
                ++stats.singleton_nodes;
                stats.note_table(t.entry_count());
                return {std::move(t), 1};
            }
            case CwOp::Join: {
                auto [child, cnt] = run(n.child0);
                StopWatch sw;
                auto t = dp_join(child, n.a, n.b);
                stats.join_ms += sw.elapsed_ms();
                ++stats.join_nodes;
                stats.note_table(t.entry_count());
                return {std::move(t), cnt};
            }
            case CwOp::Relabel: {
                auto [child, cnt] = run(n.child0);
                StopWatch sw;
                auto t = dp_relabel(child, n.a, n.b);
                stats.relabel_ms += sw.elapsed_ms();
                ++stats.relabel_nodes;
                stats.note_table(t.entry_count());
                return {std::move(t), cnt};
            }
            case CwOp::Union: {
                auto [left, cl] = run(n.child0);
                auto [right, cr] = run(n.child1);
                StopWatch sw;
                auto za = zeta_expand(left);
                stats.note_table(za.entry_count());
                auto zb = zeta_expand(right);
                stats.note_table(zb.entry_count());
                auto conv = union_convolve(za, zb, cl + cr, opts.conv, opts.threads);
                stats.note_table(conv.entry_count());
                auto t = mobius_contract(conv);
                stats.union_ms += sw.elapsed_ms();
                ++stats.union_nodes;
                stats.note_table(t.entry_count());
                return {std::move(t), cl + cr};
            }
        }
        throw internal_error("unreachable expression node kind");
    }
};

}  // namespace

InducedResult solve_counts(const CwExpr& e, const InducedSolveOptions& opts) {
    if (e.width() > opts.max_width) {
        throw limit_error("expression width " + std::to_string(e.width()) +
                          " exceeds configured maximum " + std::to_string(opts.max_width));
    }
    if (auto violation = check_irredundant(e)) {
        throw input_error("expression is not irredundant: eta " + std::to_string(violation->label_i) +
                          " " + std::to_string(violation->label_j) + " at line " +
                          std::to_string(violation->line) + ", col " + std::to_string(violation->col));
    }
    SolveCtx ctx{e, opts, {}};
    auto [table, n] = ctx.run(e.root());

    InducedResult res;
    res.stats = ctx.stats;
    res.counts.assign(static_cast<std::size_t>(n / 2) + 1, mpz_class(0));
    for (int l = 0; 2 * l <= n; ++l) {
        mpz_class sum = 0;
        table.row(2 * l).for_each([&](SigCode code, const mpz_class& v) {
            for (int w = 1; w <= e.width(); ++w) {
                if (sig_digit(code, w) == 2) return;
            }
            sum += v;
        });
        res.counts[static_cast<std::size_t>(l)] = sum;
        if (sum > 0) res.max_size = l;
    }
    return res;
}

}  // namespace cwmatch
