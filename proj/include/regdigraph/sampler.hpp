#ifndef REGDIGRAPH_SAMPLER_HPP
#define REGDIGRAPH_SAMPLER_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "random.hpp"

namespace regdigraph {

enum class SamplerMethod { Enumerate, SwitchChain, PairRejection };

inline std::string to_string(SamplerMethod m) {
    switch (m) {
    case SamplerMethod::Enumerate:
        return "enumerate";
    case SamplerMethod::SwitchChain:
        return "switch-chain";
    case SamplerMethod::PairRejection:
        return "pair-rejection";
    }
    return "?";
}

inline SamplerMethod parse_sampler_method(const std::string& s) {
    if (s == "enumerate") {
        return SamplerMethod::Enumerate;
    }
    if (s == "switch-chain") {
        return SamplerMethod::SwitchChain;
    }
    if (s == "pair-rejection") {
        return SamplerMethod::PairRejection;
    }
    throw ValidationError("unknown sampler method '" + s + "'");
}

struct SamplerConfig {
    std::size_t n = 0;
    std::size_t d = 0;
    SamplerMethod method = SamplerMethod::SwitchChain;
    /// Chain proposals; unset selects the default 20*n*d.
    std::optional<std::uint64_t> burnIn;
    std::uint64_t seed = 0;
    std::uint64_t rejectionAttempts = 1'000'000;

    std::uint64_t effective_burn_in() const { return burnIn.value_or(20ULL * n * d); }
};

inline constexpr std::uint64_t enumeration_node_budget = 10'000'000;
inline constexpr std::size_t enumeration_free_dimension = 6;

/// Circulant with a_ij = 1 iff (j - i) mod n < d.
inline RegularDigraphMatrix canonical_start(std::size_t n, std::size_t d) {
    if (d < 1 || d + 1 > n) {
        throw ValidationError("canonical_start needs 1 <= d <= n-1");
    }
    BitMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t off = 0; off < d; ++off) {
            m.set(i, (i + off) % n, true);
        }
    }
    return RegularDigraphMatrix::trusted(std::move(m), d);
}

namespace detail {

/// All d-subsets of [n] as rows, ascending as bit strings read left to right.
inline std::vector<BitVector> rows_in_lex_order(std::size_t n, std::size_t d) {
    std::vector<BitVector> out;
    // Choose positions greedily: put ones as far right as possible first.
    std::vector<int> row(n, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t left) {
        if (pos == n) {
            if (left == 0) {
                BitVector b(n);
                for (std::size_t k = 0; k < n; ++k) {
                    b.set(k, row[k] == 1);
                }
                out.push_back(std::move(b));
            }
            return;
        }
        if (n - pos > left) {
            row[pos] = 0;
            rec(pos + 1, left);
        }
        if (left > 0) {
            row[pos] = 1;
            rec(pos + 1, left - 1);
            row[pos] = 0;
        }
    };
    rec(0, d);
    return out;
}

} // namespace detail

/// Every member of M_{n,d} exactly once, row-major lexicographic order.
/// Row-by-row backtracking with column-capacity pruning. Allowed for n <= 6,
/// otherwise aborted once the search visits more than 10^7 nodes.
inline std::vector<RegularDigraphMatrix> enumerate_Mnd(std::size_t n, std::size_t d) {
    if (n == 0 || d > n) {
        throw ValidationError("enumerate_Mnd needs n >= 1 and d <= n");
    }
    const auto rows = detail::rows_in_lex_order(n, d);
    std::vector<RegularDigraphMatrix> out;
    std::vector<std::size_t> colSums(n, 0);
    BitMatrix current(n);
    std::uint64_t nodes = 0;
    const bool capped = n > enumeration_free_dimension;

    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (capped && ++nodes > enumeration_node_budget) {
            throw RuntimeFailure("enumeration budget of 10^7 nodes exceeded for (n,d)=(" + std::to_string(n) + "," +
                                 std::to_string(d) + ")");
        }
        if (i == n) {
            out.push_back(RegularDigraphMatrix::trusted(current, d));
            return;
        }
        const auto remainingAfter = n - i - 1;
        for (const auto& r : rows) {
            bool ok = true;
            for (std::size_t k = 0; k < n && ok; ++k) {
                auto next = colSums[k] + (r.test(k) ? 1 : 0);
                ok = next <= d && next + remainingAfter >= d;
            }
            if (!ok) {
                continue;
            }
            for (std::size_t k = 0; k < n; ++k) {
                colSums[k] += r.test(k) ? 1 : 0;
            }
            current.row(i) = r;
            rec(i + 1);
            for (std::size_t k = 0; k < n; ++k) {
                colSums[k] -= r.test(k) ? 1 : 0;
            }
        }
    };
    rec(0);
    return out;
}

/// Edge-swap Markov chain on M_{n,d}. A proposal picks two uniformly random
/// edges (i,k), (j,l); if a_il = a_jk = 0 they are replaced by (i,l), (j,k),
/// otherwise the state is kept. Proposals are symmetric, so the uniform
/// distribution is stationary; interchanges connect M_{n,d}.
class SwitchChain {
public:
    SwitchChain(const RegularDigraphMatrix& start, Rng& rng) : bits_(start.bits()), d_(start.d()), rng_(rng) {
        const auto n = bits_.size();
        edges_.reserve(n * d_);
        for (std::size_t i = 0; i < n; ++i) {
            for (auto k : bits_.row(i).to_indices()) {
                edges_.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(k));
            }
        }
    }

    /// One proposal; returns whether it was accepted.
    bool step() {
        const auto m = edges_.size();
        auto e1 = uniform_index(rng_, m);
        auto e2 = uniform_index(rng_, m);
        auto [i, k] = edges_[e1];
        auto [j, l] = edges_[e2];
        if (i == j || k == l || bits_.get(i, l) || bits_.get(j, k)) {
            return false;
        }
        bits_.set(i, k, false);
        bits_.set(j, l, false);
        bits_.set(i, l, true);
        bits_.set(j, k, true);
        edges_[e1] = {i, l};
        edges_[e2] = {j, k};
        return true;
    }

    std::uint64_t run(std::uint64_t steps) {
        std::uint64_t accepted = 0;
        for (std::uint64_t s = 0; s < steps; ++s) {
            accepted += step() ? 1 : 0;
        }
        return accepted;
    }

    RegularDigraphMatrix state() const { return RegularDigraphMatrix::trusted(bits_, d_); }

private:
    BitMatrix bits_;
    std::size_t d_;
    Rng& rng_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
};

struct SampleResult {
    RegularDigraphMatrix matrix;
    std::vector<std::string> warnings;
};

/// Runs the chain for exactly `steps` proposals from the canonical start.
/// A zero-step chain is allowed but flagged.
inline SampleResult sample_switch_chain(std::size_t n, std::size_t d, std::uint64_t steps, Rng& rng) {
    std::vector<std::string> warnings;
    if (steps == 0) {
        warnings.emplace_back("switch chain burn-in is 0: returning the canonical start");
    }
    SwitchChain chain(canonical_start(n, d), rng);
    chain.run(steps);
    return {chain.state(), std::move(warnings)};
}

/// One draw from M_{n,d} using the configured method. Exactly uniform for
/// enumerate and pair-rejection; approximately uniform for switch-chain.
inline SampleResult sample_uniform_with_warnings(const SamplerConfig& cfg, Rng& rng) {
    const auto n = cfg.n;
    const auto d = cfg.d;
    if (d < 1 || d + 1 > n) {
        throw ValidationError("samplers need 1 <= d <= n-1, got n=" + std::to_string(n) + " d=" + std::to_string(d));
    }
    switch (cfg.method) {
    case SamplerMethod::Enumerate: {
        auto all = enumerate_Mnd(n, d);
        return {all[uniform_index(rng, all.size())], {}};
    }
    case SamplerMethod::SwitchChain: {
        return sample_switch_chain(n, d, cfg.effective_burn_in(), rng);
    }
    case SamplerMethod::PairRejection: {
        for (std::uint64_t attempt = 0; attempt < cfg.rejectionAttempts; ++attempt) {
            BitMatrix m(n);
            for (std::size_t i = 0; i < n; ++i) {
                for (auto k : random_subset(rng, n, d)) {
                    m.set(i, k, true);
                }
            }
            auto cols = m.column_sums();
            if (std::all_of(cols.begin(), cols.end(), [d](std::size_t c) { return c == d; })) {
                return {RegularDigraphMatrix::trusted(std::move(m), d), {}};
            }
        }
        throw RuntimeFailure("pair-rejection sampler exceeded " + std::to_string(cfg.rejectionAttempts) + " attempts");
    }
    }
    throw ValidationError("unknown sampler method");
}

inline RegularDigraphMatrix sample_uniform(const SamplerConfig& cfg, Rng& rng) {
    return sample_uniform_with_warnings(cfg, rng).matrix;
}

} // namespace regdigraph

#endif
