#pragma once

#include <algorithm>
#include <cstddef>

namespace cwmatch {

/// Wall time and size accounting per expression node kind.
struct NodeStats {
    double singleton_ms = 0, join_ms = 0, relabel_ms = 0, union_ms = 0;
    std::size_t singleton_nodes = 0, join_nodes = 0, relabel_nodes = 0, union_nodes = 0;
    std::size_t peak_table_entries = 0;

    void note_table(std::size_t entries) {
        peak_table_entries = std::max(peak_table_entries, entries);
    }
};

}  // namespace cwmatch
