#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "cwmatch/bigint_poly.hpp"
#include "cwmatch/cwexpr.hpp"
#include "cwmatch/node_stats.hpp"

namespace cwmatch {

/// Per-label state of a partial matching: 0 = label class disjoint from S,
/// 1 = class meets S and every such vertex is saturated, 2 = class meets S in
/// exactly one unsaturated vertex.
using Signature = std::vector<std::uint8_t>;

/// Signature of S in h, or nullopt when some label admits no state (e.g. two
/// unsaturated vertices sharing a label).
std::optional<Signature> signature_of(const LabeledGraph& h, const std::vector<VertexId>& s);

/// Signatures are addressed as radix-3 integers, label 1 least significant.
/// In expanded (pseudosignature) tables digit 1 stands for the merged state
/// "0 or 1" instead of exact 1.
using SigCode = std::uint64_t;

std::uint64_t pow3(int e);
inline int sig_digit(SigCode code, int label) {
    return static_cast<int>(code / pow3(label - 1) % 3);
}
inline SigCode sig_with_digit(SigCode code, int label, int digit) {
    return code + (digit - sig_digit(code, label)) * pow3(label - 1);
}

/// One k-slice of a table: map signature code -> count. Stored sparsely until
/// finalize() observes at least 5% of the 3^width codes populated, then
/// switched to a dense array.
class SigRow {
public:
    void add(SigCode code, const mpz_class& v);
    void for_each(const std::function<void(SigCode, const mpz_class&)>& fn) const;
    const mpz_class* find(SigCode code) const;
    std::size_t entry_count() const;
    bool dense() const { return dense_; }
    bool empty() const { return entry_count() == 0; }

    /// Drops zero entries, rejects negatives, and picks the representation
    /// (`total_codes` = 3^width).
    void finalize(std::uint64_t total_codes);

private:
    bool dense_ = false;
    std::map<SigCode, mpz_class> sparse_;
    std::vector<mpz_class> dense_vals_;
    std::size_t dense_nonzero_ = 0;
};

/// DP table of one expression node: rows indexed by partial-matching size k.
class SignatureTable {
public:
    SignatureTable() = default;
    SignatureTable(int width, int max_k);

    int width() const { return width_; }
    int max_k() const { return max_k_; }
    SigRow& row(int k) { return rows_[static_cast<std::size_t>(k)]; }
    const SigRow& row(int k) const { return rows_[static_cast<std::size_t>(k)]; }

    void add(int k, SigCode code, const mpz_class& v) { row(k).add(code, v); }
    std::size_t entry_count() const;
    void finalize();
    bool equal(const SignatureTable& other) const;

private:
    int width_ = 0;
    int max_k_ = 0;
    std::vector<SigRow> rows_;
};

SignatureTable dp_singleton(int width, int label, int max_k);
SignatureTable dp_join(const SignatureTable& t, int i, int j);
SignatureTable dp_relabel(const SignatureTable& t, int i, int j);

/// Step 1 of the union node: after one pass per coordinate, digit 1 means
/// "compatible with 0 or 1"; digits 0 and 2 keep exact meaning.
SignatureTable zeta_expand(const SignatureTable& t);

/// Step 3: exact inverse of zeta_expand. Throws internal_error if a count
/// would go negative.
SignatureTable mobius_contract(const SignatureTable& t);

/// Step 2: combines two expanded tables. For every subset A of merged
/// coordinates the 0/2 pattern is packed into bits (ascending label order,
/// least significant first) and the bit-count-restricted polynomials are
/// multiplied exactly.
SignatureTable union_convolve(const SignatureTable& ta, const SignatureTable& tb, int n_total,
                              const ConvOptions& conv = {}, int threads = 1);

struct InducedSolveOptions {
    ConvOptions conv;
    int max_width = 20;
    int threads = 1;
};

struct InducedResult {
    std::vector<mpz_class> counts;  // counts[l] for l in [0, n/2]
    int max_size = 0;               // largest l with counts[l] > 0
    NodeStats stats;
};

/// Counts induced matchings of every size over an irredundant expression.
/// Throws input_error on redundant input, limit_error when width exceeds
/// opts.max_width.
InducedResult solve_counts(const CwExpr& e, const InducedSolveOptions& opts = {});

}  // namespace cwmatch
