#ifndef REGDIGRAPH_CLCD_ORACLE_HPP
#define REGDIGRAPH_CLCD_ORACLE_HPP

// Brute-force CLCD used to cross-check the breakpoint sweep in arithmetic.hpp.
// Evaluates the defining predicate on a dense grid and shares no code with the
// sweep beyond difference_vector.

#include <cmath>
#include <span>

#include "arithmetic.hpp"

namespace regdigraph {

inline constexpr std::size_t oracle_max_dimension = 8;
inline constexpr double oracle_max_points = 2e8;

/// Dense scan of theta over (0, thetaMax] with step gridStep / 100, followed by
/// bisection of the first sign change of the predicate down to 1e-13.
inline double oracle_clcd(std::span<const double> v, const ClcdParams& p) {
    p.check();
    if (v.size() > oracle_max_dimension) {
        throw RuntimeFailure("oracle_clcd is limited to N <= 8");
    }
    auto dv = difference_vector(v);
    double s = 0.0;
    for (double x : dv.values) {
        s += x * x;
    }
    const double dNorm = std::sqrt(s);
    if (dNorm == 0.0) {
        return infinity;
    }
    const double step = (p.gridStep > 0 ? p.gridStep : p.gamma / (10.0 * dNorm)) / 100.0;
    const double points = p.thetaMax / step;
    if (points > oracle_max_points) {
        throw RuntimeFailure("oracle_clcd grid budget exceeded");
    }
    auto qualifies = [&](double theta) {
        double dist2 = 0.0;
        for (double x : dv.values) {
            const double y = theta * x;
            const double e = y - std::round(y);
            dist2 += e * e;
        }
        const double cap = std::min(p.gamma * theta * dNorm, p.alpha);
        return std::sqrt(dist2) < cap;
    };
    const auto count = static_cast<std::uint64_t>(std::floor(points));
    for (std::uint64_t j = 1; j <= count; ++j) {
        const double theta = static_cast<double>(j) * step;
        if (!qualifies(theta)) {
            continue;
        }
        double lo = theta - step;
        double hi = theta;
        while (hi - lo > 1e-13 * std::max(1.0, hi)) {
            const double mid = 0.5 * (lo + hi);
            if (qualifies(mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        return lo;
    }
    return infinity;
}

} // namespace regdigraph

#endif
