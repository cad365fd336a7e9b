#include "cwmatch/partitions.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <sstream>

namespace cwmatch {

namespace {

std::vector<Atom> atoms_of(AtomSet s) {
    std::vector<Atom> out;
    for (Atom a = 0; a < 32; ++a) {
        if (s & atom_bit(a)) out.push_back(a);
    }
    return out;
}

}  // namespace

Partition Partition::singletons(AtomSet ground) {
    Partition p;
    p.ground_ = ground;
    for (Atom a : atoms_of(ground)) p.blocks_.push_back(atom_bit(a));
    return p;
}

Partition Partition::single_block(AtomSet ground) {
    Partition p;
    p.ground_ = ground;
    if (ground != 0) p.blocks_.push_back(ground);
    return p;
}

Partition Partition::from_blocks(std::vector<AtomSet> blocks) {
    Partition p;
    for (AtomSet b : blocks) {
        if (b == 0) throw input_error("partition block must be nonempty");
        if (b & p.ground_) throw input_error("partition blocks must be disjoint");
        p.ground_ |= b;
    }
    std::sort(blocks.begin(), blocks.end(),
              [](AtomSet a, AtomSet b) { return std::countr_zero(a) < std::countr_zero(b); });
    p.blocks_ = std::move(blocks);
    return p;
}

AtomSet Partition::block_of(Atom a) const {
    for (AtomSet b : blocks_) {
        if (b & atom_bit(a)) return b;
    }
    return 0;
}

Partition Partition::join(const Partition& q) const {
    if (ground_ != q.ground_) throw input_error("lattice join: ground sets differ");
    // Union-find over atoms, merging within every block of both inputs.
    std::array<Atom, 32> parent{};
    for (Atom a = 0; a < 32; ++a) parent[static_cast<std::size_t>(a)] = a;
    std::function<Atom(Atom)> find = [&](Atom x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    auto merge_block = [&](AtomSet b) {
        auto as = atoms_of(b);
        for (std::size_t i = 1; i < as.size(); ++i) {
            Atom r0 = find(as[0]), ri = find(as[i]);
            if (r0 != ri) parent[static_cast<std::size_t>(ri)] = r0;
        }
    };
    for (AtomSet b : blocks_) merge_block(b);
    for (AtomSet b : q.blocks_) merge_block(b);

    std::map<Atom, AtomSet> groups;
    for (Atom a : atoms_of(ground_)) groups[find(a)] |= atom_bit(a);
    std::vector<AtomSet> blocks;
    blocks.reserve(groups.size());
    for (auto& [root, b] : groups) blocks.push_back(b);
    return from_blocks(std::move(blocks));
}

Partition Partition::restrict_to(AtomSet keep) const {
    std::vector<AtomSet> blocks;
    for (AtomSet b : blocks_) {
        AtomSet nb = b & keep;
        if (nb) blocks.push_back(nb);
    }
    Partition p = from_blocks(std::move(blocks));
    p.ground_ = ground_ & keep;
    return p;
}

Partition Partition::lift(AtomSet extra) const {
    Partition p = *this;
    AtomSet fresh = extra & ~ground_;
    for (Atom a : atoms_of(fresh)) p.blocks_.push_back(atom_bit(a));
    p.ground_ |= fresh;
    std::sort(p.blocks_.begin(), p.blocks_.end(),
              [](AtomSet a, AtomSet b) { return std::countr_zero(a) < std::countr_zero(b); });
    return p;
}

bool Partition::refines_cut(AtomSet x) const {
    for (AtomSet b : blocks_) {
        if ((b & x) != 0 && (b & ~x) != 0) return false;
    }
    return true;
}

std::string Partition::to_string() const {
    std::ostringstream out;
    for (AtomSet b : blocks_) {
        out << "{";
        bool first = true;
        for (Atom a : atoms_of(b)) {
            if (!first) out << ",";
            first = false;
            out << a;
        }
        out << "}";
    }
    return out.str();
}

bool acy(const Partition& p, const Partition& q) {
    if (p.ground() != q.ground()) throw input_error("acy: ground sets differ");
    int atoms = std::popcount(p.ground());
    return atoms + p.join(q).block_count() - (p.block_count() + q.block_count()) == 0;
}

void WeightedPartitionSet::sort_canonical() {
    std::sort(items.begin(), items.end(), [](const WeightedPartition& a, const WeightedPartition& b) {
        if (a.partition.blocks() != b.partition.blocks()) return a.partition < b.partition;
        return a.weight < b.weight;
    });
}

std::string WeightedPartitionSet::to_string() const {
    std::ostringstream out;
    for (const auto& [p, w] : items) out << p.to_string() << " | " << w << "\n";
    return out.str();
}

WeightedPartitionSet rmc(const WeightedPartitionSet& s) {
    std::map<Partition, std::uint64_t> best;
    for (const auto& [p, w] : s.items) {
        auto [it, inserted] = best.emplace(p, w);
        if (!inserted && it->second < w) it->second = w;
    }
    WeightedPartitionSet out;
    out.ground = s.ground;
    out.items.reserve(best.size());
    for (const auto& [p, w] : best) out.items.push_back({p, w});
    return out;  // map iteration is already canonical
}

WeightedPartitionSet acjoin(const WeightedPartitionSet& a, const WeightedPartitionSet& b) {
    WeightedPartitionSet out;
    out.ground = a.ground | b.ground;
    for (const auto& [p, w1] : a.items) {
        Partition pl = p.lift(b.ground);
        for (const auto& [q, w2] : b.items) {
            Partition ql = q.lift(a.ground);
            if (!acy(pl, ql)) continue;
            out.items.push_back({pl.join(ql), w1 + w2});
        }
    }
    return out;
}

WeightedPartitionSet proj(const WeightedPartitionSet& s, AtomSet x) {
    if ((x & ~s.ground) != 0) throw input_error("proj: X is not a subset of the ground set");
    WeightedPartitionSet out;
    out.ground = s.ground & ~x;
    for (const auto& [p, w] : s.items) {
        bool dead_block = false;
        for (AtomSet b : p.blocks()) {
            if ((b & ~x) == 0) {
                dead_block = true;
                break;
            }
        }
        if (dead_block) continue;
        out.items.push_back({p.restrict_to(out.ground), w});
    }
    return out;
}

std::optional<std::uint64_t> acopt(const WeightedPartitionSet& s, const Partition& q) {
    if (!s.empty() && s.ground != q.ground()) throw input_error("acopt: ground sets differ");
    std::optional<std::uint64_t> best;
    for (const auto& [p, w] : s.items) {
        if (p.join(q).block_count() != (q.ground() == 0 ? 0 : 1)) continue;
        if (!acy(p, q)) continue;
        if (!best || *best < w) best = w;
    }
    return best;
}

std::vector<Partition> all_partitions(AtomSet ground) {
    auto atoms = atoms_of(ground);
    std::vector<Partition> out;
    // Restricted growth strings over the atom list.
    std::vector<int> rgs(atoms.size(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int max_used) {
        if (i == atoms.size()) {
            int blocks = max_used + 1;
            std::vector<AtomSet> bl(static_cast<std::size_t>(atoms.empty() ? 0 : blocks), 0);
            for (std::size_t j = 0; j < atoms.size(); ++j) {
                bl[static_cast<std::size_t>(rgs[j])] |= atom_bit(atoms[j]);
            }
            out.push_back(Partition::from_blocks(std::move(bl)));
            return;
        }
        for (int c = 0; c <= max_used + 1; ++c) {
            rgs[i] = c;
            rec(i + 1, std::max(max_used, c));
        }
    };
    if (atoms.empty()) {
        out.push_back(Partition());
        return out;
    }
    rec(0, -1);
    return out;
}

bool ac_represents(const WeightedPartitionSet& small_set, const WeightedPartitionSet& big_set,
                   int max_atoms) {
    AtomSet ground = big_set.ground;
    if (std::popcount(ground) > max_atoms) {
        throw limit_error("ac_represents: ground set larger than " + std::to_string(max_atoms) +
                          " atoms");
    }
    for (const Partition& q : all_partitions(ground)) {
        if (acopt(small_set, q) != acopt(big_set, q)) return false;
    }
    return true;
}

AcreduceBackend acreduce_backend_from_string(std::string_view s) {
    if (s == "off") return AcreduceBackend::RmcOnly;
    if (s == "rank") return AcreduceBackend::Rank;
    throw input_error("unknown acreduce backend '" + std::string(s) + "'");
}

namespace {

// Rank-based pruning. For a fixed block count, acy with a completing q is
// implied by p ⊔ q = {L} (the block counts then satisfy the rank identity),
// so the classic GF(2) cut-matrix basis per block count yields an
// ac-representative subset of at most |L| * 2^(|L|-1) rows.
WeightedPartitionSet acreduce_rank(const WeightedPartitionSet& s) {
    if (s.ground == 0 || s.items.size() <= 1) return s;
    auto atoms = atoms_of(s.ground);
    Atom pivot = atoms[0];
    // Cut columns: subsets X of the ground set containing the pivot atom.
    std::vector<AtomSet> columns;
    AtomSet rest = s.ground & ~atom_bit(pivot);
    for (AtomSet sub = rest;; sub = (sub - 1) & rest) {
        columns.push_back(sub | atom_bit(pivot));
        if (sub == 0) break;
    }

    auto row_vector = [&](const Partition& p) {
        std::vector<std::uint64_t> bits((columns.size() + 63) / 64, 0);
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (p.refines_cut(columns[c])) bits[c / 64] |= 1ull << (c % 64);
        }
        return bits;
    };

    auto leading_bit = [](const std::vector<std::uint64_t>& v) -> std::optional<std::size_t> {
        for (std::size_t w = v.size(); w-- > 0;) {
            if (v[w]) return w * 64 + (63 - static_cast<std::size_t>(std::countl_zero(v[w])));
        }
        return std::nullopt;
    };

    // Per block count: keep rows whose cut vector is independent of the
    // previously kept ones, scanning weights in decreasing order. The basis
    // is kept keyed by leading bit (classic xor basis).
    std::map<int, std::map<std::size_t, std::vector<std::uint64_t>>> bases;
    std::vector<const WeightedPartition*> order;
    order.reserve(s.items.size());
    for (const auto& wp : s.items) order.push_back(&wp);
    std::sort(order.begin(), order.end(), [](const WeightedPartition* a, const WeightedPartition* b) {
        if (a->weight != b->weight) return a->weight > b->weight;
        return a->partition < b->partition;
    });

    WeightedPartitionSet out;
    out.ground = s.ground;
    for (const WeightedPartition* wp : order) {
        auto vec = row_vector(wp->partition);
        auto& basis = bases[wp->partition.block_count()];
        bool independent = false;
        while (auto lead = leading_bit(vec)) {
            auto it = basis.find(*lead);
            if (it == basis.end()) {
                basis.emplace(*lead, std::move(vec));
                independent = true;
                break;
            }
            for (std::size_t w = 0; w < vec.size(); ++w) vec[w] ^= it->second[w];
        }
        if (independent) out.items.push_back(*wp);
    }
    out.sort_canonical();
    return out;
}

}  // namespace

WeightedPartitionSet acreduce(const WeightedPartitionSet& s, AcreduceBackend backend) {
    WeightedPartitionSet reduced = rmc(s);
    if (backend == AcreduceBackend::RmcOnly) return reduced;
    return acreduce_rank(reduced);
}

}  // namespace cwmatch
