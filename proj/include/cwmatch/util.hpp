#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace cwmatch {

/// Malformed or inconsistent input (bad JSON, broken invariants, parse errors).
/// The CLI maps this to exit code 2.
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Instance exceeds a configured resource limit. CLI exit code 3.
struct limit_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A violated internal consistency check; signals a bug, not bad input.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

class StopWatch {
public:
    StopWatch() : start_(clock::now()) {}
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(clock::now() - start_).count();
    }
    void reset() { start_ = clock::now(); }

private:
    using clock = std::chrono::steady_clock;
    clock::time_point start_;
};

/// FNV-1a 64-bit digest, used to fingerprint input files in run reports.
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Work is split
/// into contiguous chunks; callers must ensure distinct i touch disjoint state.
inline void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    if (threads <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace cwmatch
