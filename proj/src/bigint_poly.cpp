#include "cwmatch/bigint_poly.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace cwmatch {

Poly schoolbook_multiply(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, mpz_class(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (b[j] == 0) continue;
            // out[i+j] += a[i] * b[j]
            mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
        }
    }
    return out;
}

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 powmod(u64 base, u64 exp, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

struct NttPrime {
    u64 p;
    u64 root;  // primitive 2^k-th root of unity for the k this prime was made for
    int k;
};

// Primes p = c*2^k + 1 just below 2^62, scanned with descending odd c so the
// sequence is reproducible. The root is any w with w^(2^(k-1)) = -1 (mod p).
std::vector<NttPrime> ntt_primes(int k, std::size_t count) {
    static std::mutex mu;
    static std::map<std::pair<int, std::size_t>, std::vector<NttPrime>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(k, count);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<NttPrime> primes;
    u64 step = 1ull << k;
    u64 c = ((1ull << 62) - 1) / step;
    if ((c & 1) == 0) --c;
    for (; primes.size() < count; c -= 2) {
        if (c == 0) throw internal_error("ran out of NTT prime candidates");
        u64 p = c * step + 1;
        if (!is_prime_u64(p)) continue;
        u64 root = 0;
        for (u64 g = 2; g < p; ++g) {
            u64 w = powmod(g, (p - 1) >> k, p);
            if (k == 0 || powmod(w, 1ull << (k - 1), p) == p - 1) {
                root = w;
                break;
            }
        }
        primes.push_back({p, root, k});
    }
    cache[key] = primes;
    return primes;
}

// In-place radix-2 NTT of length |a| = 2^k (inverse when inv).
void ntt(std::vector<u64>& a, const NttPrime& pr, bool inv) {
    std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        // root of order n, reduced to order len
        u64 w_len = pr.root;
        for (std::size_t l = n; l > len; l >>= 1) w_len = mulmod(w_len, w_len, pr.p);
        if (inv) w_len = powmod(w_len, pr.p - 2, pr.p);
        for (std::size_t i = 0; i < n; i += len) {
            u64 w = 1;
            for (std::size_t j = 0; j < len / 2; ++j) {
                u64 u = a[i + j];
                u64 v = mulmod(a[i + j + len / 2], w, pr.p);
                a[i + j] = u + v < pr.p ? u + v : u + v - pr.p;
                a[i + j + len / 2] = u >= v ? u - v : u + pr.p - v;
                w = mulmod(w, w_len, pr.p);
            }
        }
    }
    if (inv) {
        u64 n_inv = powmod(n % pr.p, pr.p - 2, pr.p);
        for (auto& x : a) x = mulmod(x, n_inv, pr.p);
    }
}

std::size_t max_bits(const Poly& a) {
    std::size_t best = 0;
    for (const auto& c : a) best = std::max(best, mpz_sizeinbase(c.get_mpz_t(), 2));
    return best;
}

}  // namespace

Poly ntt_multiply(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    std::size_t out_len = a.size() + b.size() - 1;
    std::size_t n = 2;  // k >= 1 keeps the prime pattern c*2^k + 1 odd
    int k = 1;
    while (n < out_len) {
        n <<= 1;
        ++k;
    }

    // Product coefficients are bounded by max|a| * max|b| * min(|a|,|b|).
    std::size_t bound_bits = max_bits(a) + max_bits(b);
    std::size_t terms = std::min(a.size(), b.size());
    while (terms) {
        ++bound_bits;
        terms >>= 1;
    }
    std::size_t have_bits = 0;
    std::size_t prime_count = 0;
    while (have_bits <= bound_bits) {
        ++prime_count;
        have_bits += 61;  // conservative: every generated prime exceeds 2^61
    }
    auto primes = ntt_primes(k, prime_count);
    for (const auto& pr : primes) {
        if (pr.p <= (1ull << 61)) throw internal_error("NTT prime below assumed magnitude");
    }

    std::vector<std::vector<u64>> residues;
    residues.reserve(primes.size());
    for (const auto& pr : primes) {
        std::vector<u64> fa(n, 0), fb(n, 0);
        for (std::size_t i = 0; i < a.size(); ++i) fa[i] = mpz_fdiv_ui(a[i].get_mpz_t(), pr.p);
        for (std::size_t i = 0; i < b.size(); ++i) fb[i] = mpz_fdiv_ui(b[i].get_mpz_t(), pr.p);
        ntt(fa, pr, false);
        ntt(fb, pr, false);
        for (std::size_t i = 0; i < n; ++i) fa[i] = mulmod(fa[i], fb[i], pr.p);
        ntt(fa, pr, true);
        residues.push_back(std::move(fa));
    }

    // Garner recombination: x ≡ residues[t][i] (mod primes[t]).
    Poly out(out_len, mpz_class(0));
    std::vector<mpz_class> prefix(primes.size());  // prefix[t] = p_0 * ... * p_{t-1}
    mpz_class acc = 1;
    for (std::size_t t = 0; t < primes.size(); ++t) {
        prefix[t] = acc;
        acc *= mpz_class(static_cast<unsigned long>(primes[t].p));
    }
    std::vector<u64> prefix_inv(primes.size(), 1);
    for (std::size_t t = 1; t < primes.size(); ++t) {
        u64 pm = mpz_fdiv_ui(prefix[t].get_mpz_t(), primes[t].p);
        prefix_inv[t] = powmod(pm, primes[t].p - 2, primes[t].p);
    }
    for (std::size_t i = 0; i < out_len; ++i) {
        mpz_class x = 0;
        for (std::size_t t = 0; t < primes.size(); ++t) {
            u64 xm = mpz_fdiv_ui(x.get_mpz_t(), primes[t].p);
            u64 r = residues[t][i];
            u64 diff = r >= xm ? r - xm : r + primes[t].p - xm;
            u64 coef = mulmod(diff, prefix_inv[t], primes[t].p);
            // x += coef * prefix[t]
            mpz_class term;
            mpz_mul_ui(term.get_mpz_t(), prefix[t].get_mpz_t(), static_cast<unsigned long>(coef));
            x += term;
        }
        out[i] = std::move(x);
    }
    return out;
}

ConvBackend conv_backend_from_string(std::string_view s) {
    if (s == "auto") return ConvBackend::Auto;
    if (s == "ntt") return ConvBackend::Ntt;
    if (s == "schoolbook") return ConvBackend::Schoolbook;
    if (s == "check") return ConvBackend::Check;
    throw input_error("unknown convolution backend '" + std::string(s) + "'");
}

Poly multiply(const Poly& a, const Poly& b, const ConvOptions& opts) {
    switch (opts.backend) {
        case ConvBackend::Schoolbook:
            return schoolbook_multiply(a, b);
        case ConvBackend::Ntt:
            return ntt_multiply(a, b);
        case ConvBackend::Auto:
            if (std::max(a.size(), b.size()) < opts.auto_threshold) return schoolbook_multiply(a, b);
            return ntt_multiply(a, b);
        case ConvBackend::Check: {
            Poly lhs = ntt_multiply(a, b);
            Poly rhs = schoolbook_multiply(a, b);
            if (lhs != rhs) throw internal_error("NTT and schoolbook products disagree");
            return lhs;
        }
    }
    throw internal_error("unreachable convolution backend");
}

}  // namespace cwmatch
