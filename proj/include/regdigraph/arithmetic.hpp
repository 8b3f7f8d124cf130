#ifndef REGDIGRAPH_ARITHMETIC_HPP
#define REGDIGRAPH_ARITHMETIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "core.hpp"
#include "random.hpp"
#include "vectorclass.hpp"

namespace regdigraph {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Pairwise differences v_i - v_j for i < j, lexicographic in (i, j).
struct DifferenceVector {
    std::size_t baseDimension = 0;
    std::vector<double> values;

    double norm() const { return l2_norm(values); }
};

inline DifferenceVector difference_vector(std::span<const double> v) {
    const auto n = v.size();
    if (n < 2) {
        throw ValidationError("difference_vector needs N >= 2");
    }
    DifferenceVector out;
    out.baseDimension = n;
    out.values.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            out.values.push_back(v[i] - v[j]);
        }
    }
    return out;
}

/// |D(v)|^2 through the identity N |v|^2 - (sum v)^2, without forming D(v).
inline double difference_norm_squared(std::span<const double> v) {
    double sq = 0.0;
    double sum = 0.0;
    for (double x : v) {
        sq += x * x;
        sum += x;
    }
    return std::max(0.0, static_cast<double>(v.size()) * sq - sum * sum);
}

struct ClcdParams {
    double alpha = 1.0;
    double gamma = 0.1;
    double thetaMax = 1e3;
    /// Oracle scan step; 0 means gamma / (10 |D(v)|).
    double gridStep = 0.0;

    void check() const {
        if (!(alpha > 0) || !(gamma > 0 && gamma < 1) || !(thetaMax > 0) || gridStep < 0) {
            throw ValidationError("ClcdParams: need alpha > 0, gamma in (0,1), thetaMax > 0, gridStep >= 0");
        }
    }
};

/// dist(theta d, Z^M) with nearest-integer rounding per coordinate.
inline double lattice_distance(std::span<const double> d, double theta) {
    double s = 0.0;
    for (double x : d) {
        const double y = theta * x;
        const double e = y - std::nearbyint(y);
        s += e * e;
    }
    return std::sqrt(s);
}

/// The defining predicate: dist(theta d, Z^M) < min(gamma |theta d|_2, alpha).
inline bool lcd_predicate(std::span<const double> d, double dNorm, double theta, double alpha, double gamma) {
    return lattice_distance(d, theta) < std::min(gamma * theta * dNorm, alpha);
}

namespace detail {

/// Open interval {theta in (lo, hi) : a theta^2 - 2 b theta + c < 0}, a > 0.
/// Returns (L, U) with L >= U meaning empty.
inline std::pair<double, double> quadratic_negative_part(double a, double b, double c) {
    const double disc = b * b - a * c;
    if (!(disc > 0.0)) {
        return {1.0, 0.0};
    }
    const double root = std::sqrt(disc);
    if (b >= 0.0) {
        const double big = b + root;
        return {c / big, big / a};
    }
    const double small = b - root;
    return {small / a, c / small};
}

} // namespace detail

/// LCD_{alpha,gamma} of an arbitrary vector d: the infimum of theta in
/// (0, thetaMax] with dist(theta d, Z^M) < min(gamma |theta d|_2, alpha),
/// or +infinity when no such theta exists.
///
/// Exact sweep over the breakpoints (m + 1/2) / |d_k| of the nearest-integer
/// map. Between breakpoints the squared distance is the quadratic
/// |d|^2 theta^2 - 2 <n, |d|> theta + |n|^2, so both strict inequalities are
/// solved in closed form on each piece.
inline double lcd(std::span<const double> d, double alpha, double gamma, double thetaMax) {
    std::vector<double> mag;
    mag.reserve(d.size());
    for (double x : d) {
        if (x != 0.0) {
            mag.push_back(std::abs(x));
        }
    }
    double s1 = 0.0;
    for (double a : mag) {
        s1 += a * a;
    }
    if (s1 == 0.0) {
        return infinity;
    }
    const double dNorm = std::sqrt(s1);
    const double g2 = 1.0 - gamma * gamma;

    using Event = std::pair<double, std::uint32_t>;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
    std::vector<std::uint64_t> rounded(mag.size(), 0);
    for (std::uint32_t k = 0; k < mag.size(); ++k) {
        events.emplace(0.5 / mag[k], k);
    }
    double s2 = 0.0; // sum n_k |d_k|
    double s3 = 0.0; // sum n_k^2
    double lo = 0.0;
    while (true) {
        const double hi = events.empty() ? thetaMax : std::min(events.top().first, thetaMax);
        if (hi > lo) {
            auto [r1, r2] = detail::quadratic_negative_part(g2 * s1, s2, s3);
            auto [q1, q2] = detail::quadratic_negative_part(s1, s2, s3 - alpha * alpha);
            const double left = std::max({lo, r1, q1});
            const double right = std::min({hi, r2, q2});
            if (left < right && lcd_predicate(d, dNorm, 0.5 * (left + right), alpha, gamma)) {
                return left;
            }
        }
        if (hi >= thetaMax) {
            return infinity;
        }
        while (!events.empty() && events.top().first <= hi) {
            auto k = events.top().second;
            events.pop();
            s2 += mag[k];
            s3 += 2.0 * static_cast<double>(rounded[k]) + 1.0;
            ++rounded[k];
            events.emplace((static_cast<double>(rounded[k]) + 0.5) / mag[k], k);
        }
        lo = hi;
    }
}

/// CLCD_{alpha,gamma}(v) = LCD_{alpha,gamma}(D(v)); +infinity for constant v.
inline double clcd(std::span<const double> v, const ClcdParams& p) {
    p.check();
    auto dv = difference_vector(v);
    return lcd(dv.values, p.alpha, p.gamma, p.thetaMax);
}

/// Index multifamily {{T_1, ..., T_t}}.
struct RestrictionFamily {
    std::vector<IndexSet> sets;

    std::size_t t() const { return sets.size(); }
};

inline std::vector<double> restrict_to(std::span<const double> v, const IndexSet& idx) {
    std::vector<double> out;
    out.reserve(idx.size());
    for (auto k : idx) {
        out.push_back(v[k]);
    }
    return out;
}

/// CLCD of every restriction v|_T, in family order. Restrictions to fewer
/// than two coordinates have an empty difference vector and count as +infinity.
inline std::vector<double> restricted_clcds(std::span<const double> v, const RestrictionFamily& family,
                                            const ClcdParams& p) {
    std::vector<double> out;
    out.reserve(family.t());
    for (const auto& set : family.sets) {
        if (set.size() < 2) {
            out.push_back(infinity);
            continue;
        }
        auto r = restrict_to(v, set);
        out.push_back(clcd(r, p));
    }
    return out;
}

/// l-th smallest (1-based) of the restricted CLCDs, multiplicities kept.
inline double qclcd(std::span<const double> v, const RestrictionFamily& family, std::size_t ell, const ClcdParams& p) {
    if (ell < 1 || ell > family.t()) {
        throw ValidationError("qclcd: ell must lie in [1, t]");
    }
    auto values = restricted_clcds(v, family, p);
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(ell - 1), values.end());
    return values[ell - 1];
}

struct StabilityReport {
    bool applicable = false;
    bool holds = false;
    double lhs = 0.0; // CLCD_{alpha/2, gamma/2}(w)
    double rhs = 0.0; // min(CLCD_{alpha,gamma}(v), alpha / (4 sqrt(N) |v - w|))
};

/// Relative slack used when comparing two independently computed infima.
inline constexpr double clcd_compare_slack = 1e-9;

/// Checks CLCD_{alpha/2,gamma/2}(w) >= min(CLCD_{alpha,gamma}(v), alpha / (4 sqrt(N) |v-w|))
/// when |v - w| < gamma |D(v)| / (5 sqrt(N)).
inline StabilityReport check_stability(std::span<const double> v, std::span<const double> w, double alpha, double gamma,
                                       double thetaMax) {
    if (v.size() != w.size()) {
        throw ValidationError("check_stability: dimension mismatch");
    }
    const double rootN = std::sqrt(static_cast<double>(v.size()));
    double dist2 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        dist2 += (v[i] - w[i]) * (v[i] - w[i]);
    }
    const double dist = std::sqrt(dist2);
    StabilityReport r;
    r.applicable = dist < gamma * std::sqrt(difference_norm_squared(v)) / (5.0 * rootN);
    if (!r.applicable) {
        return r;
    }
    r.lhs = clcd(w, {alpha / 2.0, gamma / 2.0, thetaMax});
    const double term = dist == 0.0 ? infinity : alpha / (4.0 * rootN * dist);
    r.rhs = std::min(clcd(v, {alpha, gamma, thetaMax}), term);
    r.holds = r.lhs >= r.rhs * (1.0 - clcd_compare_slack);
    return r;
}

/// One draw of W_{t,v} = sum b_i v_i with b uniform on the weight-t slice.
inline double sample_W(std::size_t t, std::span<const double> v, Rng& rng) {
    if (t > v.size()) {
        throw ValidationError("sample_W: t out of range");
    }
    double s = 0.0;
    for (auto k : random_subset(rng, v.size(), t)) {
        s += v[k];
    }
    return s;
}

inline constexpr double z99 = 2.5758293035489004;

struct LevyEstimate {
    double epsilon = 0.0;
    double estimate = 0.0;
    std::size_t sampleCount = 0;
    double halfWidth = 0.0; // 99% normal-approximation binomial half-width
};

/// Empirical Levy concentration: the largest fraction of samples inside any
/// open interval of radius epsilon (two-pointer sweep over sorted samples).
inline LevyEstimate levy_estimate(std::vector<double> samples, double epsilon) {
    if (samples.empty()) {
        throw ValidationError("levy_estimate: no samples");
    }
    if (epsilon < 0) {
        throw ValidationError("levy_estimate: epsilon must be nonnegative");
    }
    std::sort(samples.begin(), samples.end());
    const auto n = samples.size();
    std::size_t best = 0;
    if (epsilon > 0) {
        std::size_t lo = 0;
        for (std::size_t hi = 0; hi < n; ++hi) {
            while (samples[hi] - samples[lo] >= 2.0 * epsilon) {
                ++lo;
            }
            best = std::max(best, hi - lo + 1);
        }
    }
    LevyEstimate out;
    out.epsilon = epsilon;
    out.sampleCount = n;
    out.estimate = static_cast<double>(best) / static_cast<double>(n);
    out.halfWidth = z99 * std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(n));
    return out;
}

struct AntiConcentrationReport {
    bool applicable = false;
    LevyEstimate empirical;
    double clcdValue = infinity;
    double epsilonTerm = 0.0;
    double clcdTerm = 0.0;
    double expTerm = 0.0;
    double fittedC = 0.0; // empirical / (eps + 1/CLCD + exp(-8 t (1-t) alpha^2 / N))
};

struct AntiConcentrationParams {
    double t = 0.5; // slice fraction; the walk uses round(t N) ones
    double epsilon = 0.01;
    double alpha = 1.0;
    double gamma = 0.1;
    double a = 0.1; // hypothesis |D(v)| >= a sqrt(N / (t (1 - t)))
    std::size_t sampleCount = 100000;
    double thetaMax = 1e3;
};

/// Monte Carlo check of L(W_{tN,v}, eps) <= C eps + C / CLCD(v) + C exp(-8 t (1-t) alpha^2 / N),
/// reporting the implied constant.
inline AntiConcentrationReport check_anticoncentration(std::span<const double> v, const AntiConcentrationParams& p,
                                                       Rng& rng) {
    const auto n = v.size();
    if (!(p.t > 0 && p.t < 1)) {
        throw ValidationError("check_anticoncentration: t must lie in (0,1)");
    }
    const auto ones = static_cast<std::size_t>(std::llround(p.t * static_cast<double>(n)));
    AntiConcentrationReport r;
    const double nn = static_cast<double>(n);
    r.applicable = std::sqrt(difference_norm_squared(v)) >= p.a * std::sqrt(nn / (p.t * (1.0 - p.t)));
    if (!r.applicable) {
        return r;
    }
    std::vector<double> samples(p.sampleCount);
    for (auto& s : samples) {
        s = sample_W(ones, v, rng);
    }
    r.empirical = levy_estimate(std::move(samples), p.epsilon);
    r.clcdValue = clcd(v, {p.alpha, p.gamma, p.thetaMax});
    r.epsilonTerm = p.epsilon;
    r.clcdTerm = std::isinf(r.clcdValue) ? 0.0 : 1.0 / r.clcdValue;
    r.expTerm = std::exp(-8.0 * p.t * (1.0 - p.t) * p.alpha * p.alpha / nn);
    r.fittedC = r.empirical.estimate / (r.epsilonTerm + r.clcdTerm + r.expTerm);
    return r;
}

/// Membership in L_{H,chi,mu}: x not almost-constant, |x| in [chi, 1], and
/// H <= CLCD_{mu N, gamma}(x) <= 2H.
struct LevelSetParams {
    double chi = 0.1;
    double mu = 0.1;
    double delta = 0.1;
    double rho = 0.1;
    double gamma = 0.1;
    double thetaMax = 1e3;
};

inline bool clcd_level_membership(std::span<const double> x, double h, const LevelSetParams& p) {
    if (!(h > 0)) {
        throw ValidationError("clcd_level_membership: H must be positive");
    }
    const double norm = l2_norm(x);
    if (norm == 0.0 || norm < p.chi || norm > 1.0) {
        return false;
    }
    if (is_almost_constant(x, p.delta, p.rho)) {
        return false;
    }
    const double value = clcd(x, {p.mu * static_cast<double>(x.size()), p.gamma, p.thetaMax});
    return value >= h && value <= 2.0 * h;
}

} // namespace regdigraph

#endif
