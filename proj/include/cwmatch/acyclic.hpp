#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cwmatch/cwexpr.hpp"
#include "cwmatch/node_stats.hpp"
#include "cwmatch/partitions.hpp"

namespace cwmatch {

/// Per-label state of a partial solution (S, M): index = |S ∩ class|
/// capped at 2, tilde = one unsaturated vertex present, and for fully
/// saturated classes of size >= 2 whether the class still awaits exactly one
/// join (Two) or no further join (MinusTwo).
enum class Gamma : std::uint8_t { Zero = 0, TildeOne, One, TildeTwo, Two, MinusTwo };

constexpr int kGammaCount = 6;

const char* gamma_name(Gamma g);

/// True for states whose label participates in partition ground sets.
inline bool gamma_live(Gamma g) {
    return g == Gamma::TildeOne || g == Gamma::One || g == Gamma::TildeTwo || g == Gamma::Two;
}

/// Join helper: possible (state_i, state_j) after eta_{i,j} given the child
/// states. Empty when the join kills every such partial solution.
const std::vector<std::pair<Gamma, Gamma>>& acdp_f(Gamma a, Gamma b);
/// Preimages: child-state pairs that eta_{i,j} can turn into (a, b).
std::vector<std::pair<Gamma, Gamma>> acdp_f_preimages(Gamma a, Gamma b);
/// Relabel/union helper: possible merged states of two classes fused into one.
const std::vector<Gamma>& acdp_g(Gamma a, Gamma b);
/// Preimages: state pairs whose fusion can produce `merged`.
std::vector<std::pair<Gamma, Gamma>> acdp_g_preimages(Gamma merged);

/// Signatures are packed as radix-6 integers, label 1 least significant.
using GammaCode = std::uint64_t;

std::uint64_t pow6(int e);
inline Gamma gamma_digit(GammaCode code, int label) {
    return static_cast<Gamma>(code / pow6(label - 1) % 6);
}
GammaCode gamma_with_digit(GammaCode code, int label, Gamma g);
std::string gamma_code_to_string(GammaCode code, int width);

/// Ground set dictated by a signature: live labels plus v0.
AtomSet gamma_ground(GammaCode code, int width);

/// Sparse table: signature -> ac-representative set of weighted partitions.
/// Only signatures with nonempty sets are stored.
class AcyclicTable {
public:
    AcyclicTable() = default;
    explicit AcyclicTable(int width) : width_(width) {}

    int width() const { return width_; }
    const std::map<GammaCode, WeightedPartitionSet>& slots() const { return slots_; }
    const WeightedPartitionSet* find(GammaCode code) const;
    /// Inserts/overwrites a slot (drops it when the set is empty); asserts the
    /// ground-set contract ground = live(s) ∪ {v0}.
    void set(GammaCode code, WeightedPartitionSet s);

    /// Total weighted partitions stored across slots.
    std::size_t entry_count() const;

private:
    int width_ = 0;
    std::map<GammaCode, WeightedPartitionSet> slots_;
};

AcyclicTable acdp_singleton(int width, int label, std::uint64_t vertex_weight);
AcyclicTable acdp_join(const AcyclicTable& t, int i, int j,
                       AcreduceBackend backend = AcreduceBackend::RmcOnly);
AcyclicTable acdp_relabel(const AcyclicTable& t, int i, int j,
                          AcreduceBackend backend = AcreduceBackend::RmcOnly);
AcyclicTable acdp_union(const AcyclicTable& t1, const AcyclicTable& t2,
                        AcreduceBackend backend = AcreduceBackend::RmcOnly, int threads = 1);

struct AcyclicSolveOptions {
    AcreduceBackend backend = AcreduceBackend::RmcOnly;
    int max_width = 20;
    int threads = 1;
};

struct AcyclicResult {
    std::uint64_t max_weight = 0;    // best wc(S) over acyclic matchings
    int max_matching_size = 0;       // max_weight / 2 under unit weights
    NodeStats stats;
};

/// Maximum acyclic matching over an irredundant expression (unit weights).
AcyclicResult solve_max_acyclic(const CwExpr& e, const AcyclicSolveOptions& opts = {});

// ---- test-oracle support ----------------------------------------------------

/// Gamma states compatible with (S, M) per label; for a fully saturated class
/// of size >= 2 both Two and MinusTwo are listed (the future-join commitment
/// is a guess, not a property of the pair).
std::vector<std::vector<Gamma>> gamma_state_options(const LabeledGraph& h,
                                                    const std::vector<VertexId>& s,
                                                    const Matching& m);

/// Certificate graph of (H[S], E0) w.r.t. a signature: H[S] plus v0 (vertex 0)
/// with edges E0, plus one synthetic vertex per TildeTwo/Two label adjacent to
/// every S-vertex of that label. Encoded as an edge list over vertex ids
/// {0} ∪ S ∪ {n+i : plus-vertex of label i}.
struct CertificateGraph {
    std::vector<VertexId> vertices;
    std::vector<Edge> edges;
    bool is_forest() const;
    /// True iff each component has a vertex in a live label class or v0.
    bool components_touch_live(const LabeledGraph& h, const std::vector<VertexId>& s,
                               GammaCode sig) const;
};

CertificateGraph build_certificate_graph(const LabeledGraph& h, const std::vector<VertexId>& s,
                                         const std::vector<VertexId>& e0_targets, GammaCode sig);

/// Condition (4) of the table definition: live labels ∪ {v0} quotiented by
/// connectivity inside the certificate graph.
Partition certificate_partition(const LabeledGraph& h, const std::vector<VertexId>& s,
                                const CertificateGraph& cg, GammaCode sig);

}  // namespace cwmatch
