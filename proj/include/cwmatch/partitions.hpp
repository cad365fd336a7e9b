#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cwmatch/util.hpp"

namespace cwmatch {

/// Ground-set atoms are small nonnegative integers; the universal helper
/// vertex v0 is atom 0 and DP label i is atom i. Sets of atoms are bitmasks.
using Atom = int;
using AtomSet = std::uint32_t;

constexpr Atom kV0 = 0;

inline AtomSet atom_bit(Atom a) { return AtomSet(1) << a; }

/// Partition of a ground set, canonical form: blocks ordered by minimum atom.
/// The empty partition is the unique partition of the empty ground set.
class Partition {
public:
    Partition() = default;
    static Partition singletons(AtomSet ground);
    static Partition single_block(AtomSet ground);
    /// Validates disjointness/nonemptiness and canonicalizes.
    static Partition from_blocks(std::vector<AtomSet> blocks);

    AtomSet ground() const { return ground_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    const std::vector<AtomSet>& blocks() const { return blocks_; }
    AtomSet block_of(Atom a) const;

    /// Finest common coarsening (lattice join); ground sets must match.
    Partition join(const Partition& q) const;
    /// p restricted to `keep` (drops emptied blocks).
    Partition restrict_to(AtomSet keep) const;
    /// p lifted with singleton blocks for atoms of `extra` not in the ground.
    Partition lift(AtomSet extra) const;
    /// True iff every block lies inside X or misses X.
    bool refines_cut(AtomSet x) const;

    bool operator==(const Partition& o) const { return blocks_ == o.blocks_; }
    bool operator<(const Partition& o) const { return blocks_ < o.blocks_; }
    std::string to_string() const;

private:
    std::vector<AtomSet> blocks_;
    AtomSet ground_ = 0;
};

/// acy(p, q): |L| + block(p ⊔ q) − block(p) − block(q) = 0, i.e. merging the
/// two component structures creates no cycle.
bool acy(const Partition& p, const Partition& q);

struct WeightedPartition {
    Partition partition;
    std::uint64_t weight = 0;

    bool operator==(const WeightedPartition&) const = default;
};

/// Set of weighted partitions over one ground set. Kept sorted by partition
/// (then weight) so downstream output is deterministic.
struct WeightedPartitionSet {
    AtomSet ground = 0;
    std::vector<WeightedPartition> items;

    std::size_t size() const { return items.size(); }
    bool empty() const { return items.empty(); }
    void sort_canonical();
    std::string to_string() const;  // one line per pair: blocks | weight
};

/// Keeps only the maximum weight per distinct partition.
WeightedPartitionSet rmc(const WeightedPartitionSet& s);

/// All pairwise acyclic combinations over the merged ground set; weights add.
/// Result is not rmc-reduced.
WeightedPartitionSet acjoin(const WeightedPartitionSet& a, const WeightedPartitionSet& b);

/// Drops pairs with a block fully inside X, removes X from the rest.
/// Throws input_error when X is not a subset of the ground set.
WeightedPartitionSet proj(const WeightedPartitionSet& s, AtomSet x);

/// Best weight over pairs whose join with q is the single-block partition and
/// which pass acy; nullopt plays the role of -infinity.
std::optional<std::uint64_t> acopt(const WeightedPartitionSet& s, const Partition& q);

/// Exhaustive acopt comparison over all partitions of the ground set.
/// Throws limit_error when the ground set is larger than max_atoms.
bool ac_represents(const WeightedPartitionSet& small_set, const WeightedPartitionSet& big_set,
                   int max_atoms = 6);

enum class AcreduceBackend {
    RmcOnly,  // baseline: weight-dominated duplicates removed
    Rank,     // GF(2) cut-matrix basis per block count, <= |L| * 2^(|L|-1) rows
};

AcreduceBackend acreduce_backend_from_string(std::string_view s);

/// Returns a subset of s that ac-represents s.
WeightedPartitionSet acreduce(const WeightedPartitionSet& s,
                              AcreduceBackend backend = AcreduceBackend::RmcOnly);

/// All partitions of `ground`, for tests and ac_represents.
std::vector<Partition> all_partitions(AtomSet ground);

}  // namespace cwmatch
