#ifndef REGDIGRAPH_VECTORCLASS_HPP
#define REGDIGRAPH_VECTORCLASS_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "core.hpp"

namespace regdigraph {

/// (delta, rho) for Comp/Incomp and Cons; nu for spread counts.
struct ClassParams {
    double delta = 0.1;
    double rho = 0.1;
    double nu1 = 0.0;
    double nu2 = 0.0;
    double nu3 = 0.0;

    void check() const {
        if (!(delta > 0 && delta < 1 && rho > 0 && rho < 1)) {
            throw ValidationError("ClassParams: delta and rho must lie in (0,1)");
        }
        if (nu2 > nu3) {
            throw ValidationError("ClassParams: nu2 must not exceed nu3");
        }
    }
};

struct SpreadTriple {
    double nu1 = 0.0;
    double nu2 = 0.0;
    double nu3 = 0.0;
};

inline double l2_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

/// Distance from v to the set of k-sparse vectors: the norm of v after
/// zeroing its k largest-magnitude coordinates.
inline double dist_to_sparse(std::span<const double> v, std::size_t k) {
    if (k > v.size()) {
        throw ValidationError("dist_to_sparse: k exceeds dimension");
    }
    std::vector<double> sq(v.size());
    std::transform(v.begin(), v.end(), sq.begin(), [](double x) { return x * x; });
    std::sort(sq.begin(), sq.end());
    double s = 0.0;
    for (std::size_t i = 0; i + k < sq.size(); ++i) {
        s += sq[i];
    }
    return std::sqrt(s);
}

inline std::size_t sparsity_budget(double delta, std::size_t n) {
    return static_cast<std::size_t>(std::floor(delta * static_cast<double>(n) + 1e-12));
}

/// v in Comp_{delta,rho}: strictly within rho of a floor(delta N)-sparse vector.
inline bool is_compressible(std::span<const double> v, double delta, double rho) {
    return dist_to_sparse(v, sparsity_budget(delta, v.size())) < rho;
}

/// v in Cons_{delta,rho}: some open window of half-width rho |v| / sqrt(N)
/// holds at least (1 - delta) N coordinates.
inline bool is_almost_constant(std::span<const double> v, double delta, double rho) {
    const auto n = v.size();
    if (n == 0) {
        throw ValidationError("is_almost_constant: empty vector");
    }
    const double norm = l2_norm(v);
    if (norm == 0.0) {
        throw ValidationError("is_almost_constant: zero vector");
    }
    const double width = 2.0 * rho * norm / std::sqrt(static_cast<double>(n));
    std::vector<double> s(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    std::size_t best = 0;
    std::size_t lo = 0;
    for (std::size_t hi = 0; hi < n; ++hi) {
        while (s[hi] - s[lo] >= width) {
            ++lo;
        }
        best = std::max(best, hi - lo + 1);
    }
    return static_cast<double>(best) >= (1.0 - delta) * static_cast<double>(n) - 1e-12;
}

struct SpreadCount {
    std::size_t pos = 0;
    std::size_t neg = 0;
};

/// Coordinates with v_i sqrt(N) in [nu2, nu3] (pos) and in [-nu3, -nu2] (neg).
inline SpreadCount spread_count(std::span<const double> v, double nu2, double nu3) {
    const double root = std::sqrt(static_cast<double>(v.size()));
    SpreadCount c;
    for (double x : v) {
        const double s = x * root;
        if (s >= nu2 && s <= nu3) {
            ++c.pos;
        } else if (s <= -nu2 && s >= -nu3) {
            ++c.neg;
        }
    }
    return c;
}

/// Signed spread constants obtained from unsigned ones (mu1, mu2, mu3):
/// nu1 = min(mu1/2, mu1^2 mu2^2 / 32), nu2 = min(mu1 mu2 / 8, mu2),
/// nu3 = max(mu3, 4 / (mu1 mu2)).
inline SpreadTriple bispread_constants(double mu1, double mu2, double mu3) {
    if (!(mu1 > 0 && mu2 > 0 && mu3 > 0)) {
        throw ValidationError("bispread_constants needs positive arguments");
    }
    return {std::min(mu1 / 2.0, mu1 * mu1 * mu2 * mu2 / 32.0), std::min(mu1 * mu2 / 8.0, mu2),
            std::max(mu3, 4.0 / (mu1 * mu2))};
}

/// Unsigned spread constants for Incomp_{delta,rho}: at least (rho^2 delta / 2) N
/// coordinates with |v_i| sqrt(N) in [rho / sqrt(2), 1 / sqrt(delta)].
inline SpreadTriple incompressible_spread_constants(double delta, double rho) {
    return {rho * rho * delta / 2.0, rho / std::sqrt(2.0), 1.0 / std::sqrt(delta)};
}

} // namespace regdigraph

#endif
