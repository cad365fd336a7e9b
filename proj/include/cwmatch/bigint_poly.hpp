#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "cwmatch/util.hpp"

namespace cwmatch {

/// Dense polynomial with arbitrary-precision nonnegative coefficients,
/// coefficient of x^i at index i.
using Poly = std::vector<mpz_class>;

/// Exact product by the direct O(|a|*|b|) method.
Poly schoolbook_multiply(const Poly& a, const Poly& b);

/// Exact product via number-theoretic transforms modulo enough word-sized
/// primes p = c*2^k + 1 to cover the coefficient bound, recombined by CRT.
Poly ntt_multiply(const Poly& a, const Poly& b);

enum class ConvBackend {
    Auto,        // schoolbook below the length threshold, NTT above
    Ntt,         // force NTT
    Schoolbook,  // force schoolbook
    Check,       // run both, throw internal_error on any mismatch
};

ConvBackend conv_backend_from_string(std::string_view s);

struct ConvOptions {
    ConvBackend backend = ConvBackend::Auto;
    std::size_t auto_threshold = 64;  // min max(|a|,|b|) for Auto to pick NTT
};

Poly multiply(const Poly& a, const Poly& b, const ConvOptions& opts = {});

}  // namespace cwmatch
