#ifndef REGDIGRAPH_EXPERIMENTS_HPP
#define REGDIGRAPH_EXPERIMENTS_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "arithmetic.hpp"
#include "config.hpp"
#include "core.hpp"
#include "csv.hpp"
#include "exact.hpp"
#include "random.hpp"
#include "rerandom.hpp"
#include "sampler.hpp"
#include "spectral.hpp"
#include "structures.hpp"
#include "vectorclass.hpp"

namespace regdigraph {

/// Runs fn(0), ..., fn(count - 1) on `threads` workers pulling indices from a
/// shared counter; results come back in index order. The first exception
/// thrown by any worker is rethrown after all workers stop.
template <class Fn>
auto parallel_map(std::size_t count, std::size_t threads, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
    using T = decltype(fn(std::size_t{}));
    std::vector<std::optional<T>> slots(count);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex errorMutex;
    auto worker = [&] {
        while (!failed.load()) {
            const auto i = next.fetch_add(1);
            if (i >= count) {
                return;
            }
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                std::lock_guard lock(errorMutex);
                if (!error) {
                    error = std::current_exception();
                }
                failed = true;
            }
        }
    };
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < threads; ++k) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    std::vector<T> out;
    out.reserve(count);
    for (auto& s : slots) {
        out.push_back(std::move(*s));
    }
    return out;
}

/// Wilson score interval at 99%: (lower, upper).
inline std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) {
        return {0.0, 1.0};
    }
    const double nn = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z99 * z99;
    const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
    const double half = z99 * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / (1 + z2 / nn);
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

inline double wilson_half_width(std::uint64_t successes, std::uint64_t trials) {
    auto [lo, hi] = wilson_interval(successes, trials);
    return 0.5 * (hi - lo);
}

struct ExperimentOutput {
    CsvTable table;
    std::vector<std::string> summary; // human-readable lines for stderr
    std::vector<std::string> warnings;
};

// ---------------------------------------------------------------------------
// Singularity and the tail of s_n.

struct TrialRecord {
    std::uint64_t trialIndex = 0;
    std::uint64_t seed = 0;
    double sMin = 0.0;
    double restrictedSMin = std::numeric_limits<double>::quiet_NaN();
    bool exactSingular = false;
    std::optional<bool> qhrHolds;
    double wallTimeMs = 0.0;
};

inline RegularDigraphMatrix sample_for_trial(const ExperimentConfig& cfg, Rng& rng) {
    return sample_uniform(cfg.sampler_config(), rng);
}

inline std::vector<TrialRecord> run_singularity_trials(const ExperimentConfig& cfg, bool withRestricted) {
    check_config(cfg);
    return parallel_map(cfg.trials, cfg.threads, [&](std::size_t i) {
        const auto start = std::chrono::steady_clock::now();
        TrialRecord r;
        r.trialIndex = i;
        r.seed = trial_seed(cfg.seed, i);
        auto rng = make_rng(r.seed);
        const auto a = sample_for_trial(cfg, rng);
        const Matrix dense = to_dense(a);
        r.sMin = smallest_singular_value(dense);
        if (withRestricted) {
            r.restrictedSMin = restricted_smallest(dense);
        }
        r.exactSingular = exact_singular(a);
        r.wallTimeMs =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return r;
    });
}

/// exact_singular(A) must agree with sMin <= singularTol.
inline bool records_consistent(const TrialRecord& r, double singularTol) {
    return r.exactSingular == (r.sMin <= singularTol);
}

inline ExperimentOutput run_singularity(const ExperimentConfig& cfg) {
    auto records = run_singularity_trials(cfg, true);
    std::vector<std::string> header = {"trial", "seed", "s_min", "restricted_s_min", "exact_singular", "consistent"};
    if (cfg.recordTiming) {
        header.push_back("wall_time_ms");
    }
    ExperimentOutput out{CsvTable(header), {}, parameter_chain_warnings(cfg)};
    std::uint64_t singular = 0;
    std::uint64_t disagreements = 0;
    for (const auto& r : records) {
        const bool ok = records_consistent(r, cfg.singularTol);
        singular += r.exactSingular ? 1 : 0;
        disagreements += ok ? 0 : 1;
        std::vector<std::string> row = {std::to_string(r.trialIndex), std::to_string(r.seed), format_double(r.sMin),
                                        format_double(r.restrictedSMin), r.exactSingular ? "1" : "0", ok ? "1" : "0"};
        if (cfg.recordTiming) {
            row.push_back(format_double(r.wallTimeMs));
        }
        out.table.add_row(std::move(row));
    }
    out.summary.push_back("singular " + std::to_string(singular) + " / " + std::to_string(records.size()));
    out.summary.push_back("spectral/exact disagreements " + std::to_string(disagreements));
    return out;
}

struct TailRow {
    double kappa = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t count = 0;
    double probability = 0.0;
    double halfWidth = 0.0;
    double ratio = std::numeric_limits<double>::quiet_NaN(); // probability / (kappa sqrt n)
    double ratioUpper = std::numeric_limits<double>::quiet_NaN(); // Wilson upper bound / (kappa sqrt n)
};

/// Empirical P[s_n <= kappa] per kappa. The kappa = 0 entry counts exact singularity.
inline std::vector<TailRow> tail_rows(const std::vector<TrialRecord>& records, const std::vector<double>& kappaGrid,
                                      std::size_t n) {
    std::vector<TailRow> rows;
    const double rootN = std::sqrt(static_cast<double>(n));
    for (double kappa : kappaGrid) {
        TailRow row;
        row.kappa = kappa;
        row.trials = records.size();
        for (const auto& r : records) {
            const bool hit = kappa == 0.0 ? r.exactSingular : (r.exactSingular || r.sMin <= kappa);
            row.count += hit ? 1 : 0;
        }
        row.probability = row.trials ? static_cast<double>(row.count) / static_cast<double>(row.trials) : 0.0;
        row.halfWidth = wilson_half_width(row.count, row.trials);
        if (kappa > 0) {
            row.ratio = row.probability / (kappa * rootN);
            row.ratioUpper = wilson_interval(row.count, row.trials).second / (kappa * rootN);
        }
        rows.push_back(row);
    }
    return rows;
}

inline ExperimentOutput tail_table(const std::vector<TailRow>& rows, std::size_t n, std::size_t d) {
    ExperimentOutput out{CsvTable({"n", "d", "kappa", "trials", "count", "probability", "half_width", "ratio"}), {}, {}};
    for (const auto& r : rows) {
        out.table.add(n, d, r.kappa, r.trials, r.count, r.probability, r.halfWidth, r.ratio);
    }
    return out;
}

inline ExperimentOutput run_sn_tail(const ExperimentConfig& cfg) {
    const auto records = run_singularity_trials(cfg, false);
    auto rows = tail_rows(records, cfg.kappaGrid, cfg.n);
    auto out = tail_table(rows, cfg.n, cfg.effective_d());
    out.warnings = parameter_chain_warnings(cfg);
    std::uint64_t disagreements = 0;
    for (const auto& r : records) {
        disagreements += records_consistent(r, cfg.singularTol) ? 0 : 1;
    }
    out.summary.push_back("spectral/exact disagreements " + std::to_string(disagreements));
    return out;
}

// ---------------------------------------------------------------------------
// Fixed vectors.

/// (1, -1, 1, -1, ...)/sqrt(n) for even n; for odd n the last coordinate is 0.
inline Vector alternating_vector(std::size_t n) {
    Vector x = Vector::Zero(static_cast<Eigen::Index>(n));
    const std::size_t m = n - n % 2;
    for (std::size_t i = 0; i < m; ++i) {
        x(static_cast<Eigen::Index>(i)) = i % 2 == 0 ? 1.0 : -1.0;
    }
    return x / std::sqrt(static_cast<double>(m));
}

/// Gaussian vector projected to sum zero and normalized.
inline Vector random_sum_zero_vector(std::size_t n, Rng& rng) {
    std::normal_distribution<double> g;
    Vector x(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        x(i) = g(rng);
    }
    x.array() -= x.mean();
    return x / x.norm();
}

struct SingleVectorSummary {
    double minimum = 0.0;
    double quantile01 = 0.0;
};

inline double empirical_quantile(std::vector<double> v, double q) {
    if (v.empty()) {
        throw ValidationError("empirical_quantile: no values");
    }
    std::sort(v.begin(), v.end());
    const auto k = static_cast<std::size_t>(std::floor(q * static_cast<double>(v.size() - 1)));
    return v[k];
}

inline std::vector<double> single_vector_ratios(const ExperimentConfig& cfg, const Vector& x) {
    check_config(cfg);
    if (static_cast<std::size_t>(x.size()) != cfg.n || std::abs(x.sum()) > 1e-9 || std::abs(x.norm() - 1.0) > 1e-9) {
        throw ValidationError("single-vector experiment needs a unit sum-zero vector of length n");
    }
    const double rootN = std::sqrt(static_cast<double>(cfg.n));
    return parallel_map(cfg.trials, cfg.threads, [&](std::size_t i) {
        auto rng = make_rng(trial_seed(cfg.seed, i));
        const auto a = sample_for_trial(cfg, rng);
        return (to_dense(a) * x).norm() / rootN;
    });
}

inline Vector configured_vector(const ExperimentConfig& cfg) {
    if (cfg.vector == "alternating") {
        return alternating_vector(cfg.n);
    }
    auto rng = make_rng(cfg.seed ^ 0x5eedf00dULL);
    return random_sum_zero_vector(cfg.n, rng);
}

inline ExperimentOutput run_single_vector(const ExperimentConfig& cfg, const Vector& x) {
    const auto ratios = single_vector_ratios(cfg, x);
    ExperimentOutput out{CsvTable({"trial", "seed", "norm_over_sqrt_n"}), {}, parameter_chain_warnings(cfg)};
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        out.table.add(i, trial_seed(cfg.seed, i), ratios[i]);
    }
    if (!ratios.empty()) {
        out.summary.push_back("min " + format_double(*std::min_element(ratios.begin(), ratios.end())));
        out.summary.push_back("quantile_0.01 " + format_double(empirical_quantile(ratios, 0.01)));
    }
    return out;
}

inline ExperimentOutput run_single_vector(const ExperimentConfig& cfg) {
    return run_single_vector(cfg, configured_vector(cfg));
}

// ---------------------------------------------------------------------------
// Compressible vectors.

/// Unit sum-zero vectors supported (up to a small perturbation) on
/// floor(delta n) coordinates. Every member passes is_compressible.
inline std::vector<Vector> compressible_corpus(std::size_t n, double delta, double rho, std::size_t count, Rng& rng) {
    const auto k = sparsity_budget(delta, n);
    if (k < 2) {
        throw ValidationError("compressible corpus needs floor(delta n) >= 2");
    }
    std::normal_distribution<double> g;
    std::vector<Vector> out;
    for (std::size_t c = 0; c < count; ++c) {
        const auto support = random_subset(rng, n, 2 + uniform_index(rng, k - 1));
        Vector x = Vector::Zero(static_cast<Eigen::Index>(n));
        double mean = 0.0;
        for (auto s : support) {
            x(static_cast<Eigen::Index>(s)) = g(rng);
            mean += x(static_cast<Eigen::Index>(s));
        }
        mean /= static_cast<double>(support.size());
        for (auto s : support) {
            x(static_cast<Eigen::Index>(s)) -= mean;
        }
        x /= x.norm();
        Vector noise(static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < noise.size(); ++i) {
            noise(i) = g(rng);
        }
        noise.array() -= noise.mean();
        noise *= (rho / 4.0) * std::uniform_real_distribution<double>(0.0, 1.0)(rng) / noise.norm();
        x += noise;
        x /= x.norm();
        std::vector<double> xs(x.data(), x.data() + x.size());
        if (!is_compressible(xs, delta, rho)) {
            throw RuntimeFailure("compressible corpus produced an incompressible vector");
        }
        out.push_back(std::move(x));
    }
    return out;
}

inline ExperimentOutput run_compressible(const ExperimentConfig& cfg) {
    check_config(cfg);
    const double rootN = std::sqrt(static_cast<double>(cfg.n));
    auto mins = parallel_map(cfg.trials, cfg.threads, [&](std::size_t i) {
        auto rng = make_rng(trial_seed(cfg.seed, i));
        const auto a = sample_for_trial(cfg, rng);
        const Matrix dense = to_dense(a);
        double best = infinity;
        for (const auto& x : compressible_corpus(cfg.n, cfg.delta, cfg.rho, cfg.corpusSize, rng)) {
            best = std::min(best, (dense * x).norm() / rootN);
        }
        return best;
    });
    ExperimentOutput out{CsvTable({"trial", "seed", "min_norm_over_sqrt_n", "below_c"}), {}, parameter_chain_warnings(cfg)};
    std::uint64_t below = 0;
    for (std::size_t i = 0; i < mins.size(); ++i) {
        const bool b = mins[i] < cfg.cThreshold;
        below += b ? 1 : 0;
        out.table.add(i, trial_seed(cfg.seed, i), mins[i], b);
    }
    out.summary.push_back("below_c rate " + format_double(mins.empty() ? 0.0 : static_cast<double>(below) / static_cast<double>(mins.size())));
    return out;
}

// ---------------------------------------------------------------------------
// Quasirandomness.

struct QuasirandomTrial {
    bool p1 = false;
    bool p2 = false;
    bool p3 = false;
    bool holds = false;
    double p1Worst = 0.0;
    double p2Worst = 0.0;
    double p3Worst = 0.0;
    bool p1Exhaustive = false;
};

inline QuasirandomTrial quasirandom_trial(const ExperimentConfig& cfg, std::size_t i) {
    auto rng = make_rng(trial_seed(cfg.seed, i));
    const auto a = sample_for_trial(cfg, rng);
    QuasirandomParams p;
    p.h = cfg.h;
    p.lambda = cfg.effective_lambda();
    p.checkBudget = cfg.checkBudget;
    for (std::size_t k = 0; k < cfg.familySize; ++k) {
        auto s = random_subset(rng, cfg.n, cfg.n / 2);
        std::sort(s.begin(), s.end());
        p.family.push_back(std::move(s));
    }
    const auto rep = check_Q_hR(a.bits(), p, rng);
    QuasirandomTrial t;
    t.p1 = rep.p1Holds();
    t.p2 = rep.p2Holds();
    t.p3 = rep.p3Holds();
    t.holds = rep.holds;
    t.p1Worst = rep.p1.worst;
    t.p1Exhaustive = rep.p1.exhaustive;
    t.p2Worst = infinity;
    t.p3Worst = -infinity;
    for (const auto& r : rep.p2) {
        t.p2Worst = std::min(t.p2Worst, r.worst);
    }
    for (const auto& r : rep.p3) {
        t.p3Worst = std::max(t.p3Worst, r.worst);
    }
    return t;
}

inline ExperimentOutput run_quasirandom(const ExperimentConfig& cfg) {
    check_config(cfg);
    auto trials = parallel_map(cfg.trials, cfg.threads, [&](std::size_t i) { return quasirandom_trial(cfg, i); });
    ExperimentOutput out{CsvTable({"trial", "seed", "p1", "p2", "p3", "holds", "p1_max_agreement", "p2_min_intersection",
                                   "p3_max_excess", "p1_exhaustive"}),
                         {},
                         parameter_chain_warnings(cfg)};
    std::uint64_t holds = 0;
    for (std::size_t i = 0; i < trials.size(); ++i) {
        const auto& t = trials[i];
        holds += t.holds ? 1 : 0;
        out.table.add(i, trial_seed(cfg.seed, i), t.p1, t.p2, t.p3, t.holds, t.p1Worst, t.p2Worst, t.p3Worst,
                      t.p1Exhaustive);
    }
    out.summary.push_back("Q_hR frequency " +
                          format_double(trials.empty() ? 0.0 : static_cast<double>(holds) / static_cast<double>(trials.size())));
    return out;
}

// ---------------------------------------------------------------------------
// Rerandomization.

struct UniformityReport {
    RegularDigraphMatrix start;
    SplitMatchPair pair;
    std::vector<RegularDigraphMatrix> extensions;
    std::vector<std::uint64_t> counts;
    double chiSquare = 0.0;
    double pValue = 1.0;
    double totalVariation = 0.0;
};

/// Picks the first seed-derived (A, pair) whose revealed information has more
/// than one extension, then tallies `draws` conditional resamples.
inline UniformityReport rerandom_uniformity(const ExperimentConfig& cfg, std::uint64_t draws) {
    check_config(cfg);
    auto rng = make_rng(cfg.seed);
    std::optional<RegularDigraphMatrix> start;
    SplitMatchPair pair;
    std::vector<RegularDigraphMatrix> exts;
    for (int attempt = 0; attempt < 1000 && exts.size() < 2; ++attempt) {
        start = sample_for_trial(cfg, rng);
        pair = random_split_match_pair(cfg.n, rng);
        exts = enumerate_extensions(extract_revealed(*start, pair));
    }
    if (exts.size() < 2) {
        throw RuntimeFailure("no revealed realization with more than one extension found");
    }
    auto indices = parallel_map(draws, cfg.threads, [&](std::size_t i) {
        auto r = make_rng(trial_seed(cfg.seed + 1, i));
        const auto m = resample_conditional(*start, pair, r);
        auto it = std::lower_bound(exts.begin(), exts.end(), m);
        if (it == exts.end() || !(*it == m)) {
            throw RuntimeFailure("resampler produced a matrix outside the enumerated extensions");
        }
        return static_cast<std::size_t>(it - exts.begin());
    });
    UniformityReport rep{*start, pair, exts, std::vector<std::uint64_t>(exts.size(), 0)};
    for (auto k : indices) {
        ++rep.counts[k];
    }
    const double expected = static_cast<double>(draws) / static_cast<double>(exts.size());
    for (auto c : rep.counts) {
        const double diff = static_cast<double>(c) - expected;
        rep.chiSquare += diff * diff / expected;
        rep.totalVariation += std::abs(static_cast<double>(c) / static_cast<double>(draws) - 1.0 / static_cast<double>(exts.size()));
    }
    rep.totalVariation *= 0.5;
    boost::math::chi_squared dist(static_cast<double>(exts.size() - 1));
    rep.pValue = boost::math::cdf(boost::math::complement(dist, rep.chiSquare));
    return rep;
}

struct ValidityTrial {
    bool valid = false;
    bool preserved = false;
};

inline ValidityTrial rerandom_validity_trial(const ExperimentConfig& cfg, std::size_t i) {
    auto rng = make_rng(trial_seed(cfg.seed, i));
    const auto a = sample_for_trial(cfg, rng);
    const auto pair = random_split_match_pair(cfg.n, rng);
    const auto before = extract_revealed(a, pair);
    const auto b = resample_conditional(a, pair, rng);
    ValidityTrial t;
    t.valid = validate(b.bits(), cfg.effective_d()).ok();
    t.preserved = extract_revealed(b, pair) == before;
    return t;
}

inline constexpr std::size_t uniformity_max_n = 6;

inline ExperimentOutput run_rerandom_uniformity(const ExperimentConfig& cfg) {
    check_config(cfg);
    if (cfg.n <= uniformity_max_n) {
        const auto rep = rerandom_uniformity(cfg, cfg.trials);
        ExperimentOutput out{CsvTable({"extension", "count", "expected"}), {}, parameter_chain_warnings(cfg)};
        const double expected = static_cast<double>(cfg.trials) / static_cast<double>(rep.extensions.size());
        for (std::size_t k = 0; k < rep.counts.size(); ++k) {
            out.table.add(k, rep.counts[k], expected);
        }
        out.summary.push_back("extensions " + std::to_string(rep.extensions.size()));
        out.summary.push_back("chi_square " + format_double(rep.chiSquare) + " p " + format_double(rep.pValue));
        out.summary.push_back("total_variation " + format_double(rep.totalVariation));
        return out;
    }
    auto trials = parallel_map(cfg.trials, cfg.threads, [&](std::size_t i) { return rerandom_validity_trial(cfg, i); });
    ExperimentOutput out{CsvTable({"trial", "seed", "valid", "preserved"}), {}, parameter_chain_warnings(cfg)};
    std::uint64_t good = 0;
    for (std::size_t i = 0; i < trials.size(); ++i) {
        good += trials[i].valid && trials[i].preserved ? 1 : 0;
        out.table.add(i, trial_seed(cfg.seed, i), trials[i].valid, trials[i].preserved);
    }
    out.summary.push_back("validity rate " +
                          format_double(trials.empty() ? 1.0 : static_cast<double>(good) / static_cast<double>(trials.size())));
    return out;
}

// ---------------------------------------------------------------------------
// Anti-concentration grid.

inline std::vector<double> suite_vector(const std::string& kind, std::size_t n, Rng& rng) {
    std::vector<double> v(n);
    if (kind == "structured") {
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = i < n / 2 ? 1.0 : -1.0;
        }
    } else if (kind == "arithmetic") {
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = static_cast<double>(i) - 0.5 * static_cast<double>(n - 1);
        }
    } else {
        std::normal_distribution<double> g;
        for (auto& x : v) {
            x = g(rng);
        }
    }
    return v;
}

inline const std::vector<std::string>& suite_kinds() {
    static const std::vector<std::string> kinds = {"structured", "arithmetic", "generic"};
    return kinds;
}

inline constexpr std::size_t exhaustive_levy_max_n = 16;

/// All C(N, t) values of W_{t,v}.
inline std::vector<double> slice_population(std::span<const double> v, std::size_t t) {
    const auto n = v.size();
    std::vector<double> out;
    std::vector<bool> mask(n, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(t), true);
    do {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask[i]) {
                s += v[i];
            }
        }
        out.push_back(s);
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return out;
}

struct SuiteRow {
    std::string kind;
    std::size_t n = 0;
    double epsilon = 0.0;
    bool applicable = false;
    LevyEstimate empirical;
    double exactLevy = std::numeric_limits<double>::quiet_NaN();
    double clcdValue = infinity;
    double alpha = 0.0;
    double expTerm = 0.0;
    double fittedC = std::numeric_limits<double>::quiet_NaN();
};

/// The scenario grid for the CLCD anti-concentration bound. alpha is taken
/// linear in the dimension: alpha_N = cfg.alpha N.
inline std::vector<SuiteRow> clcd_suite_rows(const ExperimentConfig& cfg) {
    check_config(cfg);
    struct Scenario {
        std::string kind;
        std::size_t n;
    };
    std::vector<Scenario> scenarios;
    for (double dim : cfg.dimensions) {
        for (const auto& k : suite_kinds()) {
            scenarios.push_back({k, static_cast<std::size_t>(dim)});
        }
    }
    auto perScenario = parallel_map(scenarios.size(), cfg.threads, [&](std::size_t s) {
        const auto& sc = scenarios[s];
        auto rng = make_rng(trial_seed(cfg.seed, s));
        const auto v = suite_vector(sc.kind, sc.n, rng);
        const double nn = static_cast<double>(sc.n);
        const auto ones = static_cast<std::size_t>(std::llround(cfg.t * nn));
        const double alpha = cfg.alpha * nn;
        const bool applicable = std::sqrt(difference_norm_squared(v)) >= cfg.a * std::sqrt(nn / (cfg.t * (1 - cfg.t)));
        std::vector<SuiteRow> rows;
        std::vector<double> samples;
        std::vector<double> population;
        double clcdValue = infinity;
        if (applicable) {
            samples.resize(cfg.sampleCount);
            for (auto& x : samples) {
                x = sample_W(ones, v, rng);
            }
            if (sc.n <= exhaustive_levy_max_n) {
                population = slice_population(v, ones);
            }
            clcdValue = clcd(v, {alpha, cfg.gamma, cfg.thetaMax});
        }
        for (double eps : cfg.epsilonGrid) {
            SuiteRow r;
            r.kind = sc.kind;
            r.n = sc.n;
            r.epsilon = eps;
            r.alpha = alpha;
            r.applicable = applicable;
            r.expTerm = std::exp(-8.0 * cfg.t * (1 - cfg.t) * alpha * alpha / nn);
            if (applicable) {
                r.empirical = levy_estimate(samples, eps);
                if (!population.empty()) {
                    r.exactLevy = levy_estimate(population, eps).estimate;
                }
                r.clcdValue = clcdValue;
                const double clcdTerm = std::isinf(clcdValue) ? 0.0 : 1.0 / clcdValue;
                r.fittedC = r.empirical.estimate / (eps + clcdTerm + r.expTerm);
            }
            rows.push_back(std::move(r));
        }
        return rows;
    });
    std::vector<SuiteRow> out;
    for (auto& rows : perScenario) {
        out.insert(out.end(), rows.begin(), rows.end());
    }
    return out;
}

inline ExperimentOutput run_clcd_suite(const ExperimentConfig& cfg) {
    const auto rows = clcd_suite_rows(cfg);
    ExperimentOutput out{CsvTable({"kind", "n", "epsilon", "applicable", "levy", "half_width", "exact_levy", "clcd",
                                   "alpha", "exp_term", "fitted_c"}),
                         {},
                         parameter_chain_warnings(cfg)};
    double maxC = 0.0;
    for (const auto& r : rows) {
        out.table.add(r.kind, r.n, r.epsilon, r.applicable, r.empirical.estimate, r.empirical.halfWidth, r.exactLevy,
                      r.clcdValue, r.alpha, r.expTerm, r.fittedC);
        if (r.applicable) {
            maxC = std::max(maxC, r.fittedC);
        }
    }
    out.summary.push_back("max fitted C " + format_double(maxC));
    return out;
}

// ---------------------------------------------------------------------------

inline ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
    check_config(cfg);
    const auto& e = cfg.experiment;
    if (e == "singularity") {
        return run_singularity(cfg);
    }
    if (e == "sn-tail") {
        return run_sn_tail(cfg);
    }
    if (e == "single-vector") {
        return run_single_vector(cfg);
    }
    if (e == "compressible") {
        return run_compressible(cfg);
    }
    if (e == "quasirandom") {
        return run_quasirandom(cfg);
    }
    if (e == "rerandom-uniformity") {
        return run_rerandom_uniformity(cfg);
    }
    return run_clcd_suite(cfg);
}

} // namespace regdigraph

#endif
