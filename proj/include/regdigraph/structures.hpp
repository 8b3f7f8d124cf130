#ifndef REGDIGRAPH_STRUCTURES_HPP
#define REGDIGRAPH_STRUCTURES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "arithmetic.hpp"
#include "core.hpp"
#include "random.hpp"
#include "vectorclass.hpp"

namespace regdigraph {

/// (sigma, S): a permutation of [n] and a subset of size floor(n/2).
struct SplitMatchPair {
    IndexSet sigma;
    IndexSet subset; // sorted

    std::size_t n() const { return sigma.size(); }

    bool operator==(const SplitMatchPair&) const = default;

    BitVector subset_mask() const { return BitVector::from_indices(sigma.size(), subset); }

    void check() const {
        const auto n = sigma.size();
        std::vector<bool> seen(n, false);
        for (auto s : sigma) {
            if (s >= n || seen[s]) {
                throw ValidationError("SplitMatchPair: sigma is not a permutation");
            }
            seen[s] = true;
        }
        if (subset.size() != n / 2) {
            throw ValidationError("SplitMatchPair: |S| must equal floor(n/2)");
        }
        if (!std::is_sorted(subset.begin(), subset.end()) ||
            std::adjacent_find(subset.begin(), subset.end()) != subset.end() || (!subset.empty() && subset.back() >= n)) {
            throw ValidationError("SplitMatchPair: S must be a sorted subset of [n]");
        }
    }
};

inline SplitMatchPair random_split_match_pair(std::size_t n, Rng& rng) {
    SplitMatchPair p;
    p.subset = random_subset(rng, n, n / 2);
    std::sort(p.subset.begin(), p.subset.end());
    p.sigma = random_permutation(rng, n);
    return p;
}

/// I_nu(w, sigma): at least nu1 N indices i < N with |w_sigma(i) - w_sigma(i+1)| sqrt(N) >= nu2.
inline bool event_I(std::span<const double> w, const IndexSet& sigma, const SpreadTriple& nu) {
    const auto n = w.size();
    if (sigma.size() != n) {
        throw ValidationError("event_I: sigma has the wrong length");
    }
    const double root = std::sqrt(static_cast<double>(n));
    std::size_t count = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(w[sigma[i]] - w[sigma[i + 1]]) * root >= nu.nu2) {
            ++count;
        }
    }
    return static_cast<double>(count) >= nu.nu1 * static_cast<double>(n);
}

struct EventJCounts {
    std::size_t posInS = 0;
    std::size_t posInSc = 0;
    std::size_t negInS = 0;
    std::size_t negInSc = 0;
};

inline EventJCounts event_J_counts(std::span<const double> v, const BitVector& s, const SpreadTriple& nu) {
    const double root = std::sqrt(static_cast<double>(v.size()));
    EventJCounts c;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = v[i] * root;
        const bool inS = s.test(i);
        if (x >= nu.nu2 && x <= nu.nu3) {
            ++(inS ? c.posInS : c.posInSc);
        } else if (x <= -nu.nu2 && x >= -nu.nu3) {
            ++(inS ? c.negInS : c.negInSc);
        }
    }
    return c;
}

/// J_nu(v, S): both signed spread bands are hit at least nu1 N times inside S
/// and inside its complement.
inline bool event_J(std::span<const double> v, const BitVector& s, const SpreadTriple& nu) {
    if (s.size() != v.size()) {
        throw ValidationError("event_J: subset has the wrong ground size");
    }
    auto c = event_J_counts(v, s, nu);
    const double need = nu.nu1 * static_cast<double>(v.size());
    return static_cast<double>(std::min({c.posInS, c.posInSc, c.negInS, c.negInSc})) >= need;
}

inline bool event_J(std::span<const double> v, const IndexSet& s, const SpreadTriple& nu) {
    return event_J(v, BitVector::from_indices(v.size(), s), nu);
}

struct RobustFamily {
    std::vector<SplitMatchPair> pairs;
    SpreadTriple nu;

    std::size_t m() const { return pairs.size(); }
};

/// m1 uniform half-sets times m2 uniform permutations, all combinations.
/// The certified nu follows the product construction: with (nu1', nu2', nu3')
/// the signed spread constants, J holds with nu1'/3 and I with nu1'^2 / 4.
inline RobustFamily generate_robust_family(const SpreadTriple& signedSpread, std::size_t n, std::size_t m1,
                                           std::size_t m2, Rng& rng) {
    if (m1 < 1 || m2 < 1) {
        throw ValidationError("generate_robust_family: m1, m2 must be positive");
    }
    std::vector<IndexSet> sets;
    for (std::size_t k = 0; k < m1; ++k) {
        auto s = random_subset(rng, n, n / 2);
        std::sort(s.begin(), s.end());
        sets.push_back(std::move(s));
    }
    std::vector<IndexSet> perms;
    for (std::size_t k = 0; k < m2; ++k) {
        perms.push_back(random_permutation(rng, n));
    }
    RobustFamily out;
    for (const auto& s : sets) {
        for (const auto& p : perms) {
            out.pairs.push_back({p, s});
        }
    }
    const double nu1 = signedSpread.nu1;
    out.nu = {std::min(nu1 / 3.0, nu1 * nu1 / 4.0), signedSpread.nu2, signedSpread.nu3};
    return out;
}

/// Family for Incomp_{delta,rho} sum-zero vectors on [n]: signed spread
/// constants come from the unsigned ones of incompressible vectors.
inline RobustFamily generate_robust_family(std::size_t n, double delta, double rho, std::size_t m1, std::size_t m2,
                                           Rng& rng) {
    const auto mu = incompressible_spread_constants(delta, rho);
    return generate_robust_family(bispread_constants(mu.nu1, mu.nu2, mu.nu3), n, m1, m2, rng);
}

/// Outcome of a "for all tuples" check. When the tuple space exceeds the
/// budget the check samples tuples uniformly and `exhaustive` is false; a
/// sampled pass is an under-approximation of the event.
struct CheckReport {
    bool holds = true;
    bool exhaustive = true;
    std::uint64_t examined = 0;
    double totalTuples = 0.0;
    std::vector<std::vector<Index>> witnesses;
    double worst = 0.0; // extremal value of the checked quantity

    double coverage() const { return totalTuples > 0 ? static_cast<double>(examined) / totalTuples : 1.0; }
};

inline constexpr std::size_t max_witnesses = 16;
inline constexpr std::uint64_t default_check_budget = 1'000'000;

namespace detail {

inline double falling_factorial(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
        r *= static_cast<double>(n - i);
    }
    return r;
}

/// Visits ordered k-tuples of distinct elements of [n]: all of them when
/// their number is within budget, otherwise `budget` uniform random ones.
/// The visitor returns false to record a violation.
inline void visit_tuples(std::size_t n, std::size_t k, std::uint64_t budget, Rng& rng, CheckReport& report,
                         const std::function<bool(const std::vector<Index>&)>& visit) {
    report.totalTuples = n >= k ? falling_factorial(n, k) : 0.0;
    std::vector<Index> tuple(k);
    auto record = [&](bool ok) {
        ++report.examined;
        if (!ok) {
            report.holds = false;
            if (report.witnesses.size() < max_witnesses) {
                report.witnesses.push_back(tuple);
            }
        }
    };
    if (report.totalTuples <= static_cast<double>(budget)) {
        report.exhaustive = true;
        std::vector<bool> used(n, false);
        std::function<void(std::size_t)> rec = [&](std::size_t pos) {
            if (pos == k) {
                record(visit(tuple));
                return;
            }
            for (Index c = 0; c < n; ++c) {
                if (used[c]) {
                    continue;
                }
                used[c] = true;
                tuple[pos] = c;
                rec(pos + 1);
                used[c] = false;
            }
        };
        rec(0);
        return;
    }
    report.exhaustive = false;
    for (std::uint64_t s = 0; s < budget; ++s) {
        for (std::size_t pos = 0; pos < k; ++pos) {
            Index c;
            do {
                c = uniform_index(rng, n);
            } while (std::find(tuple.begin(), tuple.begin() + static_cast<std::ptrdiff_t>(pos), c) !=
                     tuple.begin() + static_cast<std::ptrdiff_t>(pos));
            tuple[pos] = c;
        }
        record(visit(tuple));
    }
}

} // namespace detail

/// (P1): for 2h distinct rows, |intersection of S_{i_k,j_k}^c| <= 2 (lambda^2 + (1-lambda)^2)^h n.
/// Tuples are laid out (i_1, j_1, ..., i_h, j_h).
inline CheckReport check_Q_h(const BitMatrix& a, std::size_t h, double lambda, std::uint64_t budget, Rng& rng) {
    const auto n = a.size();
    if (2 * h > n || h == 0) {
        throw ValidationError("check_Q_h needs 1 <= h and 2h <= n");
    }
    const double bound = 2.0 * std::pow(lambda * lambda + (1 - lambda) * (1 - lambda), static_cast<double>(h)) *
                         static_cast<double>(n);
    CheckReport report;
    detail::visit_tuples(n, 2 * h, budget, rng, report, [&](const std::vector<Index>& t) {
        // Agreement set of rows i, j is the complement of their switching set.
        BitVector agree = (a.row(t[0]) ^ a.row(t[1])).complemented();
        for (std::size_t k = 1; k < h; ++k) {
            agree &= (a.row(t[2 * k]) ^ a.row(t[2 * k + 1])).complemented();
        }
        const auto size = static_cast<double>(agree.count());
        report.worst = std::max(report.worst, size);
        return size <= bound;
    });
    return report;
}

/// (P2): for 4 distinct rows (i1, i2, j1, j2),
/// min(|S_{i1,j1} & S_{i2,j2} & S|, |S_{i1,j1} & S_{i2,j2} & S^c|) >= (2 lambda (1-lambda))^2 n / 4.
inline CheckReport check_Q_prime(const BitMatrix& a, const BitVector& s, double lambda, std::uint64_t budget,
                                 Rng& rng) {
    const auto n = a.size();
    if (n < 4) {
        throw ValidationError("check_Q_prime needs n >= 4");
    }
    const double bound = std::pow(2.0 * lambda * (1 - lambda), 2.0) * static_cast<double>(n) / 4.0;
    const BitVector sc = s.complemented();
    CheckReport report;
    report.worst = infinity;
    detail::visit_tuples(n, 4, budget, rng, report, [&](const std::vector<Index>& t) {
        BitVector both = (a.row(t[0]) ^ a.row(t[2])) & (a.row(t[1]) ^ a.row(t[3]));
        const auto inside = static_cast<double>(intersection_count(both, s));
        const auto outside = static_cast<double>(intersection_count(both, sc));
        const double value = std::min(inside, outside);
        report.worst = std::min(report.worst, value);
        return value >= bound;
    });
    return report;
}

/// (P3): every pair of distinct rows has |omega_{i,j}(S)| <= min(|S & S_ij|, |S^c & S_ij|) / 6.
/// Always exhaustive; witnesses are (i, j) pairs.
inline CheckReport check_Q_doubleprime(const BitMatrix& a, const BitVector& s) {
    const auto n = a.size();
    const BitVector sc = s.complemented();
    CheckReport report;
    report.totalTuples = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            const BitVector sw = a.row(i) ^ a.row(j);
            const auto weight = std::abs(static_cast<double>(switching_weight(a, i, j, s)));
            const double cap = std::min(static_cast<double>(intersection_count(s, sw)),
                                        static_cast<double>(intersection_count(sc, sw))) /
                               6.0;
            report.worst = std::max(report.worst, weight - cap);
            ++report.examined;
            if (weight > cap) {
                report.holds = false;
                if (report.witnesses.size() < max_witnesses) {
                    report.witnesses.push_back({i, j});
                }
            }
        }
    }
    return report;
}

struct QuasirandomParams {
    std::size_t h = 1;
    double lambda = 0.5;
    std::vector<IndexSet> family; // R: subsets of size n/2
    std::uint64_t checkBudget = default_check_budget;

    void check(std::size_t n) const {
        if (h == 0 || static_cast<double>(h) >= std::pow(static_cast<double>(n), 0.25)) {
            throw ValidationError("QuasirandomParams: need 1 <= h < n^(1/4)");
        }
        if (!(lambda > 0 && lambda <= 0.5)) {
            throw ValidationError("QuasirandomParams: lambda must lie in (0, 1/2]");
        }
        for (const auto& s : family) {
            if (s.size() != n / 2) {
                throw ValidationError("QuasirandomParams: every S in R must have size n/2");
            }
        }
    }
};

struct QuasirandomReport {
    bool holds = true;
    CheckReport p1;
    std::vector<CheckReport> p2; // one per S in R
    std::vector<CheckReport> p3;

    bool p1Holds() const { return p1.holds; }
    bool p2Holds() const {
        return std::all_of(p2.begin(), p2.end(), [](const CheckReport& r) { return r.holds; });
    }
    bool p3Holds() const {
        return std::all_of(p3.begin(), p3.end(), [](const CheckReport& r) { return r.holds; });
    }
};

/// (P4): Q_h and, for every S in R, Q'_S and Q''_S.
inline QuasirandomReport check_Q_hR(const BitMatrix& a, const QuasirandomParams& p, Rng& rng) {
    p.check(a.size());
    QuasirandomReport r;
    r.p1 = check_Q_h(a, p.h, p.lambda, p.checkBudget, rng);
    for (const auto& s : p.family) {
        auto mask = BitVector::from_indices(a.size(), s);
        r.p2.push_back(check_Q_prime(a, mask, p.lambda, p.checkBudget, rng));
        r.p3.push_back(check_Q_doubleprime(a, mask));
    }
    r.holds = r.p1Holds() && r.p2Holds() && r.p3Holds();
    return r;
}

/// T-sets of a pair. With R_i = A_{sigma(i)} (1-based) and i in [floor((n-1)/2)]:
/// T_{2i-1} = S & S_{sigma(2i-1), sigma(2i)} goes to the first family,
/// T_{2i} = S^c & S_{sigma(2i), sigma(2i+1)} to the second.
struct TSets {
    RestrictionFamily odd;  // subsets of S
    RestrictionFamily even; // subsets of S^c

    RestrictionFamily combined() const {
        RestrictionFamily all = odd;
        all.sets.insert(all.sets.end(), even.sets.begin(), even.sets.end());
        return all;
    }
};

inline TSets build_T_sets(const BitMatrix& a, const SplitMatchPair& pair) {
    const auto n = a.size();
    if (pair.n() != n) {
        throw ValidationError("build_T_sets: pair dimension mismatch");
    }
    const BitVector s = pair.subset_mask();
    const BitVector sc = s.complemented();
    TSets out;
    const auto m = (n - 1) / 2;
    for (std::size_t i = 1; i <= m; ++i) {
        const auto r1 = pair.sigma[2 * i - 2];
        const auto r2 = pair.sigma[2 * i - 1];
        const auto r3 = pair.sigma[2 * i];
        out.odd.sets.push_back((s & (a.row(r1) ^ a.row(r2))).to_indices());
        out.even.sets.push_back((sc & (a.row(r2) ^ a.row(r3))).to_indices());
    }
    return out;
}

struct WellSpreadReport {
    bool holds = true;
    CheckReport w1;
    CheckReport w2;
};

/// (Q, eta)-well-spread with respect to U: (W1) any Q distinct members leave
/// at most eta |U| of U uncovered; (W2) every pair (i, j), i = j included,
/// shares at least eta |U| elements.
inline WellSpreadReport check_well_spread(const RestrictionFamily& family, const IndexSet& ground, std::size_t q,
                                          double eta, std::uint64_t budget, Rng& rng) {
    const auto t = family.t();
    std::size_t universe = ground.empty() ? 0 : *std::max_element(ground.begin(), ground.end()) + 1;
    for (const auto& set : family.sets) {
        for (auto k : set) {
            universe = std::max(universe, k + 1);
        }
    }
    const BitVector u = BitVector::from_indices(universe, ground);
    std::vector<BitVector> masks;
    for (const auto& set : family.sets) {
        auto m = BitVector::from_indices(universe, set);
        if (intersection_count(m, u) != m.count()) {
            throw ValidationError("check_well_spread: a member is not contained in U");
        }
        masks.push_back(std::move(m));
    }
    const double cap = eta * static_cast<double>(ground.size());
    WellSpreadReport r;

    // (W1) over Q-subsets of member indices.
    if (q == 0 || q > t) {
        throw ValidationError("check_well_spread: need 1 <= Q <= t");
    }
    double combos = 1.0;
    for (std::size_t i = 0; i < q; ++i) {
        combos = combos * static_cast<double>(t - i) / static_cast<double>(i + 1);
    }
    r.w1.totalTuples = combos;
    auto uncovered = [&](const std::vector<Index>& pick) {
        BitVector cover(universe);
        for (auto i : pick) {
            cover |= masks[i];
        }
        return static_cast<double>(ground.size() - intersection_count(cover, u));
    };
    auto note = [&](CheckReport& rep, const std::vector<Index>& pick, bool ok) {
        ++rep.examined;
        if (!ok) {
            rep.holds = false;
            if (rep.witnesses.size() < max_witnesses) {
                rep.witnesses.push_back(pick);
            }
        }
    };
    if (combos <= static_cast<double>(budget)) {
        std::vector<Index> pick(q);
        std::function<void(std::size_t, Index)> rec = [&](std::size_t pos, Index start) {
            if (pos == q) {
                const double left = uncovered(pick);
                r.w1.worst = std::max(r.w1.worst, left);
                note(r.w1, pick, left <= cap);
                return;
            }
            for (Index i = start; i + (q - pos) <= t; ++i) {
                pick[pos] = i;
                rec(pos + 1, i + 1);
            }
        };
        rec(0, 0);
    } else {
        r.w1.exhaustive = false;
        for (std::uint64_t s = 0; s < budget; ++s) {
            auto pick = random_subset(rng, t, q);
            const double left = uncovered(pick);
            r.w1.worst = std::max(r.w1.worst, left);
            note(r.w1, pick, left <= cap);
        }
    }

    // (W2) over all pairs.
    r.w2.totalTuples = static_cast<double>(t) * static_cast<double>(t + 1) / 2.0;
    r.w2.worst = infinity;
    for (Index i = 0; i < t; ++i) {
        for (Index j = i; j < t; ++j) {
            const auto shared = static_cast<double>(intersection_count(masks[i], masks[j]));
            r.w2.worst = std::min(r.w2.worst, shared);
            note(r.w2, {i, j}, shared >= cap);
        }
    }
    r.holds = r.w1.holds && r.w2.holds;
    return r;
}

/// eta determined by Q through eta = 2 (lambda^2 + (1 - lambda)^2)^Q.
inline double eta_from_q(double lambda, std::size_t q) {
    return 2.0 * std::pow(lambda * lambda + (1 - lambda) * (1 - lambda), static_cast<double>(q));
}

struct Lemma34Params {
    std::size_t q = 2;
    double eta = 0.5;
    SpreadTriple nu;
    double deltaPrime = 0.01;
    double rhoPrime = 0.01;
    ClcdParams clcd;
    /// Constant c in "|D(x|_T)| < c sqrt(n)"; 0 selects sqrt(nu1 nu2 eta / (2Q)).
    double smallDifferenceConstant = 0.0;
    std::uint64_t budget = default_check_budget;

    double difference_constant() const {
        return smallDifferenceConstant > 0 ? smallDifferenceConstant
                                           : std::sqrt(nu.nu1 * nu.nu2 * eta / (2.0 * static_cast<double>(q)));
    }
};

struct Lemma34Report {
    bool applicable = false;
    std::size_t smallCount = 0; // sets with small |D(x|_T)| or x|_T almost constant
    bool c1Holds = false;       // smallCount <= 2Q
    double qclcdValue = 0.0;
    double ratioToSqrtN = 0.0;
};

/// Checks the two conclusions for T = T1 u T2 after verifying the hypotheses
/// (T1 well-spread in S, T2 well-spread in S^c, J_nu(x, S)).
inline Lemma34Report check_lemma34(std::span<const double> x, const TSets& tsets, const IndexSet& s,
                                   const Lemma34Params& p, Rng& rng) {
    const auto n = x.size();
    Lemma34Report r;
    IndexSet sc;
    {
        auto mask = BitVector::from_indices(n, s);
        sc = mask.complemented().to_indices();
    }
    if (tsets.odd.t() == 0 || tsets.even.t() == 0 || p.q > tsets.odd.t() || p.q > tsets.even.t()) {
        return r;
    }
    const bool hyp = check_well_spread(tsets.odd, s, p.q, p.eta, p.budget, rng).holds &&
                     check_well_spread(tsets.even, sc, p.q, p.eta, p.budget, rng).holds && event_J(x, s, p.nu);
    if (!hyp) {
        return r;
    }
    r.applicable = true;
    const auto all = tsets.combined();
    const double threshold = p.difference_constant() * std::sqrt(static_cast<double>(n));
    for (const auto& set : all.sets) {
        if (set.size() < 2) {
            ++r.smallCount;
            continue;
        }
        auto restricted = restrict_to(x, set);
        const bool smallD = std::sqrt(difference_norm_squared(restricted)) < threshold;
        const bool cons = l2_norm(restricted) == 0.0 || is_almost_constant(restricted, p.deltaPrime, p.rhoPrime);
        if (smallD || cons) {
            ++r.smallCount;
        }
    }
    r.c1Holds = r.smallCount <= 2 * p.q;
    if (2 * p.q <= all.t()) {
        r.qclcdValue = qclcd(x, all, 2 * p.q, p.clcd);
        r.ratioToSqrtN = r.qclcdValue / std::sqrt(static_cast<double>(n));
    }
    return r;
}

/// Membership in K_{T,H,mu}: J_nu(x, S) and H <= QCLCD_{2Q, mu n, gamma}(x) <= 2H.
inline bool qclcd_level_membership(std::span<const double> x, const RestrictionFamily& family, std::size_t q,
                                   const SpreadTriple& nu, const IndexSet& s, double h, double mu, double gamma,
                                   double thetaMax) {
    if (!(h > 0)) {
        throw ValidationError("qclcd_level_membership: H must be positive");
    }
    if (!event_J(x, s, nu)) {
        return false;
    }
    const double value = qclcd(x, family, 2 * q, {mu * static_cast<double>(x.size()), gamma, thetaMax});
    return value >= h && value <= 2.0 * h;
}

} // namespace regdigraph

#endif
