#ifndef REGDIGRAPH_RERANDOM_HPP
#define REGDIGRAPH_RERANDOM_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

#include "core.hpp"
#include "random.hpp"
#include "structures.hpp"

namespace regdigraph {

/// Conditioning data of F_{S,sigma}. Rows are taken in sigma order, R_i = A_{sigma(i)}.
/// Restricted vectors are stored in increasing order of their index set.
///
/// For even n the last two rows R_{n-1}, R_n are not paired by the definition on S,
/// but their sum on S is forced by the column sums; it is stored as the last entry
/// of oddPairSums so that oddPairSums always has floor(n/2) entries.
struct RevealedInformation {
    SplitMatchPair pair;
    std::size_t d = 0;
    std::vector<int> rowSumsS;  // r_i(S)
    std::vector<int> rowSumsSc; // r_i(S^c)
    std::vector<std::vector<std::uint8_t>> oddPairSums;  // (R_{2i-1} + R_{2i})|_S
    std::vector<std::vector<std::uint8_t>> evenPairSums; // (R_{2i} + R_{2i+1})|_{S^c}
    std::vector<std::uint8_t> firstRowSc;                // R_1|_{S^c}
    std::vector<std::uint8_t> lastRowP;                  // R_n|_P

    std::size_t n() const { return pair.n(); }
    IndexSet s() const { return pair.subset; }
    IndexSet sc() const { return pair.subset_mask().complemented().to_indices(); }
    /// P = S for odd n, S^c for even n.
    IndexSet p() const { return n() % 2 == 1 ? s() : sc(); }

    /// Positions (into S, resp. S^c) where a pair sum equals 1.
    static IndexSet ones(const std::vector<std::uint8_t>& sums) {
        IndexSet out;
        for (std::size_t k = 0; k < sums.size(); ++k) {
            if (sums[k] == 1) {
                out.push_back(k);
            }
        }
        return out;
    }

    std::size_t free_size() const {
        std::size_t total = 0;
        for (const auto& v : oddPairSums) {
            total += ones(v).size();
        }
        for (const auto& v : evenPairSums) {
            total += ones(v).size();
        }
        return total;
    }

    bool operator==(const RevealedInformation&) const = default;
};

inline RevealedInformation extract_revealed(const RegularDigraphMatrix& a, const SplitMatchPair& pair) {
    pair.check();
    const auto n = a.n();
    if (pair.n() != n) {
        throw ValidationError("extract_revealed: pair dimension mismatch");
    }
    RevealedInformation rev;
    rev.pair = pair;
    rev.d = a.d();
    const IndexSet s = rev.s();
    const IndexSet sc = rev.sc();
    auto row = [&](std::size_t i) -> const BitVector& { return a.row(pair.sigma[i - 1]); }; // 1-based R_i
    auto restrict = [&](std::size_t i, const IndexSet& set) {
        std::vector<std::uint8_t> out(set.size());
        const BitVector& r = row(i);
        for (std::size_t k = 0; k < set.size(); ++k) {
            out[k] = r.test(set[k]) ? 1 : 0;
        }
        return out;
    };
    auto sum2 = [&](std::size_t i, std::size_t j, const IndexSet& set) {
        auto x = restrict(i, set);
        auto y = restrict(j, set);
        for (std::size_t k = 0; k < x.size(); ++k) {
            x[k] = static_cast<std::uint8_t>(x[k] + y[k]);
        }
        return x;
    };
    for (std::size_t i = 1; i <= n; ++i) {
        auto inS = restrict(i, s);
        const int rs = static_cast<int>(std::count(inS.begin(), inS.end(), 1));
        rev.rowSumsS.push_back(rs);
        rev.rowSumsSc.push_back(static_cast<int>(a.d()) - rs);
    }
    for (std::size_t i = 1; i <= n / 2; ++i) {
        rev.oddPairSums.push_back(sum2(2 * i - 1, 2 * i, s));
    }
    for (std::size_t i = 1; i <= (n - 1) / 2; ++i) {
        rev.evenPairSums.push_back(sum2(2 * i, 2 * i + 1, sc));
    }
    rev.firstRowSc = restrict(1, sc);
    rev.lastRowP = restrict(n, rev.p());
    return rev;
}

namespace detail {

/// Split choice for one pair: the positions (into T) where the first row has a one.
struct PairSlot {
    bool onS = true;
    std::size_t first = 0; // 1-based row index of the first row of the pair
    IndexSet t;            // positions into the restricted index list where the sum is 1
    std::size_t onesInFirst = 0;
};

inline std::vector<PairSlot> pair_slots(const RevealedInformation& rev) {
    std::vector<PairSlot> slots;
    auto add = [&](const std::vector<std::uint8_t>& sums, bool onS, std::size_t first) {
        PairSlot slot;
        slot.onS = onS;
        slot.first = first;
        slot.t = RevealedInformation::ones(sums);
        const long twos = std::count(sums.begin(), sums.end(), 2);
        const long rowTotal = onS ? rev.rowSumsS[first - 1] : rev.rowSumsSc[first - 1];
        const long k = rowTotal - twos;
        const long size = static_cast<long>(slot.t.size());
        // Equivalently |omega| <= |T| with omega = 2k - |T| of matching parity.
        if (k < 0 || k > size) {
            throw ValidationError("revealed information has an infeasible switching sum");
        }
        slot.onesInFirst = static_cast<std::size_t>(k);
        slots.push_back(std::move(slot));
    };
    for (std::size_t i = 0; i < rev.oddPairSums.size(); ++i) {
        add(rev.oddPairSums[i], true, 2 * i + 1);
    }
    for (std::size_t i = 0; i < rev.evenPairSums.size(); ++i) {
        add(rev.evenPairSums[i], false, 2 * i + 2);
    }
    return slots;
}

/// Rebuilds the matrix from revealed data plus, for each slot, the sorted
/// positions in T where the first row of the pair has its one.
inline RegularDigraphMatrix assemble(const RevealedInformation& rev, const std::vector<PairSlot>& slots,
                                     const std::vector<IndexSet>& choice) {
    const auto n = rev.n();
    const IndexSet s = rev.s();
    const IndexSet sc = rev.sc();
    BitMatrix bits(n);
    auto put = [&](std::size_t rowR, Index col) { bits.set(rev.pair.sigma[rowR - 1], col, true); };
    for (std::size_t k = 0; k < sc.size(); ++k) {
        if (rev.firstRowSc[k]) {
            put(1, sc[k]);
        }
    }
    const IndexSet p = rev.p();
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (rev.lastRowP[k]) {
            put(n, p[k]);
        }
    }
    for (std::size_t m = 0; m < slots.size(); ++m) {
        const auto& slot = slots[m];
        const auto& sums = slot.onS ? rev.oddPairSums[(slot.first - 1) / 2] : rev.evenPairSums[(slot.first - 2) / 2];
        const IndexSet& cols = slot.onS ? s : sc;
        std::vector<bool> firstGetsOne(sums.size(), false);
        for (auto pos : choice[m]) {
            firstGetsOne[slot.t[pos]] = true;
        }
        for (std::size_t k = 0; k < sums.size(); ++k) {
            if (sums[k] == 2) {
                put(slot.first, cols[k]);
                put(slot.first + 1, cols[k]);
            } else if (sums[k] == 1) {
                put(firstGetsOne[k] ? slot.first : slot.first + 1, cols[k]);
            }
        }
    }
    return validated(bits, rev.d);
}

} // namespace detail

/// Draws from the law of A conditioned on F_{S,sigma}: every pair's split on its
/// T-set is replaced by a uniform subset of the same size, independently.
inline RegularDigraphMatrix resample_conditional(const RegularDigraphMatrix& a, const SplitMatchPair& pair, Rng& rng) {
    const auto rev = extract_revealed(a, pair);
    const auto slots = detail::pair_slots(rev);
    std::vector<IndexSet> choice;
    choice.reserve(slots.size());
    for (const auto& slot : slots) {
        auto pick = random_subset(rng, slot.t.size(), slot.onesInFirst);
        std::sort(pick.begin(), pick.end());
        choice.push_back(std::move(pick));
    }
    return detail::assemble(rev, slots, choice);
}

inline constexpr std::size_t extension_budget = 24;

/// Every matrix consistent with rev, sorted, each once.
inline std::vector<RegularDigraphMatrix> enumerate_extensions(const RevealedInformation& rev) {
    if (rev.free_size() > extension_budget) {
        throw ValidationError("enumerate_extensions: total T-set size exceeds 24");
    }
    const auto slots = detail::pair_slots(rev);
    std::vector<std::vector<IndexSet>> options(slots.size());
    for (std::size_t m = 0; m < slots.size(); ++m) {
        const auto size = slots[m].t.size();
        const auto k = slots[m].onesInFirst;
        std::vector<bool> mask(size, false);
        std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
        do {
            IndexSet pick;
            for (std::size_t x = 0; x < size; ++x) {
                if (mask[x]) {
                    pick.push_back(x);
                }
            }
            options[m].push_back(std::move(pick));
        } while (std::prev_permutation(mask.begin(), mask.end()));
    }
    std::vector<RegularDigraphMatrix> out;
    std::vector<std::size_t> idx(slots.size(), 0);
    std::vector<IndexSet> choice(slots.size());
    while (true) {
        for (std::size_t m = 0; m < slots.size(); ++m) {
            choice[m] = options[m][idx[m]];
        }
        out.push_back(detail::assemble(rev, slots, choice));
        std::size_t m = 0;
        while (m < slots.size() && ++idx[m] == options[m].size()) {
            idx[m] = 0;
            ++m;
        }
        if (m == slots.size()) {
            break;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace regdigraph

#endif
