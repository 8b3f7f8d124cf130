#ifndef REGDIGRAPH_EXACT_HPP
#define REGDIGRAPH_EXACT_HPP

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "core.hpp"

namespace regdigraph {

namespace detail {

inline bool is_prime32(std::uint64_t p) {
    if (p < 2) {
        return false;
    }
    for (std::uint64_t q = 2; q * q <= p; ++q) {
        if (p % q == 0) {
            return false;
        }
    }
    return true;
}

/// Largest primes below 2^31, descending. Computed once.
inline const std::vector<std::uint64_t>& large_primes() {
    static const std::vector<std::uint64_t> primes = [] {
        std::vector<std::uint64_t> out;
        for (std::uint64_t p = (1ULL << 31) - 1; out.size() < 64; p -= 2) {
            if (is_prime32(p)) {
                out.push_back(p);
            }
        }
        return out;
    }();
    return primes;
}

inline std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    b %= p;
    while (e) {
        if (e & 1) {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

__extension__ using uint128 = unsigned __int128;

/// x mod p for x < 2^64 and p < 2^32, via a precomputed reciprocal.
struct Barrett {
    std::uint64_t p;
    std::uint64_t m;

    explicit Barrett(std::uint64_t prime) : p(prime), m(~std::uint64_t{0} / prime) {}

    std::uint64_t reduce(std::uint64_t x) const {
        const auto q = static_cast<std::uint64_t>((static_cast<uint128>(x) * m) >> 64);
        std::uint64_t r = x - q * p;
        while (r >= p) {
            r -= p;
        }
        return r;
    }
};

} // namespace detail

/// det(A) mod p by Gaussian elimination over GF(p); p < 2^32.
inline std::uint64_t det_mod(const std::vector<std::vector<std::uint64_t>>& a, std::uint64_t p) {
    const auto n = a.size();
    auto m = a;
    for (auto& row : m) {
        for (auto& x : row) {
            x %= p;
        }
    }
    const detail::Barrett br(p);
    std::uint64_t det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m[piv][c] == 0) {
            ++piv;
        }
        if (piv == n) {
            return 0;
        }
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = (p - det) % p;
        }
        det = det * m[c][c] % p;
        const std::uint64_t inv = detail::pow_mod(m[c][c], p - 2, p);
        for (std::size_t r = c + 1; r < n; ++r) {
            if (m[r][c] == 0) {
                continue;
            }
            const std::uint64_t g = p - m[r][c] * inv % p;
            auto& dst = m[r];
            const auto& src = m[c];
            for (std::size_t k = c; k < n; ++k) {
                dst[k] = br.reduce(dst[k] + g * src[k]);
            }
        }
    }
    return det;
}

/// Number of primes from large_primes() whose product exceeds 2 n^{n/2}.
inline std::size_t primes_needed(std::size_t n) {
    const double bits = 1.0 + 0.5 * static_cast<double>(n) * std::log2(std::max<double>(1.0, static_cast<double>(n)));
    std::size_t k = 0;
    double have = 0.0;
    const auto& primes = detail::large_primes();
    while (have <= bits) {
        if (k == primes.size()) {
            throw RuntimeFailure("exact_singular: matrix too large for the prime table");
        }
        have += std::log2(static_cast<double>(primes[k++]));
    }
    return k;
}

/// det(A) = 0 over the integers. |det| <= n^{n/2} (Hadamard), so det = 0 iff it
/// vanishes modulo primes whose product exceeds twice that bound. Stops at the
/// first nonzero residue.
inline bool exact_singular(const BitMatrix& a) {
    const auto n = a.size();
    if (n == 0) {
        return false;
    }
    std::vector<std::vector<std::uint64_t>> m(n, std::vector<std::uint64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (auto k : a.row(i).to_indices()) {
            m[i][k] = 1;
        }
    }
    const auto k = primes_needed(n);
    const auto& primes = detail::large_primes();
    for (std::size_t t = 0; t < k; ++t) {
        if (det_mod(m, primes[t]) != 0) {
            return false;
        }
    }
    return true;
}

inline bool exact_singular(const RegularDigraphMatrix& a) { return exact_singular(a.bits()); }

} // namespace regdigraph

#endif
