#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "regdigraph/exact.hpp"
#include "regdigraph/sampler.hpp"
#include "regdigraph/spectral.hpp"

using namespace regdigraph;

namespace {

Vector random_sum_zero(std::size_t n, Rng& rng) {
    std::normal_distribution<double> g;
    Vector x(static_cast<Eigen::Index>(n));
    for (auto& c : x) {
        c = g(rng);
    }
    x.array() -= x.mean();
    return x / x.norm();
}

} // namespace

TEST(SmallestSingular, Examples) {
    for (int n : {1, 3, 10}) {
        EXPECT_NEAR(smallest_singular(Matrix::Identity(n, n)).sMin, 1.0, 1e-12);
    }
    EXPECT_NEAR(smallest_singular(Matrix::Ones(3, 3)).sMin, 0.0, 1e-12);
    EXPECT_NEAR(smallest_singular(canonical_start(4, 2)).sMin, 0.0, 1e-12);
    // circulant(5,2): eigenvalues 1 + w^k, smallest modulus |1 + e^{4 pi i/5}| = 2 cos(2 pi/5).
    EXPECT_NEAR(smallest_singular(canonical_start(5, 2)).sMin, 2 * std::cos(2 * M_PI / 5), 1e-12);
}

TEST(SmallestSingular, VectorsAreUnitAndAttainSMin) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto rng = make_rng(seed);
        auto a = to_dense(sample_uniform({9, 4}, rng));
        auto r = smallest_singular(a);
        EXPECT_NEAR(r.rightVector.norm(), 1.0, 1e-12);
        EXPECT_NEAR(r.leftVector.norm(), 1.0, 1e-12);
        EXPECT_NEAR((a * r.rightVector).norm(), r.sMin, 1e-9);
        EXPECT_NEAR((a.transpose() * r.leftVector).norm(), r.sMin, 1e-9);
        Eigen::Index k;
        r.rightVector.cwiseAbs().maxCoeff(&k);
        EXPECT_GT(r.rightVector(k), 0.0);
    }
}

TEST(RestrictedSmallest, Examples) {
    EXPECT_NEAR(restricted_smallest(Matrix::Identity(5, 5)), 1.0, 1e-12);
    for (int n : {2, 3, 8}) {
        EXPECT_NEAR(restricted_smallest(Matrix::Ones(n, n)), 0.0, 1e-12);
    }
    auto b = helmert_basis(7);
    EXPECT_TRUE((b.transpose() * b).isApprox(Matrix::Identity(6, 6), 1e-12));
    EXPECT_LT((b.transpose() * Vector::Ones(7)).norm(), 1e-12);
}

TEST(RestrictedSmallest, DominatesSMinOnSamples) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto rng = make_rng(seed);
        auto a = to_dense(sample_uniform({10, 3}, rng));
        auto r = smallest_singular(a);
        const double restricted = restricted_smallest(a);
        EXPECT_LE(r.sMin, restricted + 1e-10);
        if (std::abs(r.rightVector.sum()) < 1e-9 && r.sMin > 1e-8) {
            EXPECT_NEAR(r.sMin, restricted, 1e-8);
        }
    }
}

TEST(ComplementIdentity, SumZeroVectors) {
    auto rng = make_rng(4);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t n = 40;
        auto a = sample_uniform({n, 10}, rng);
        auto da = to_dense(a);
        auto dc = to_dense(complement(a));
        for (int k = 0; k < 10; ++k) {
            auto x = random_sum_zero(n, rng);
            EXPECT_NEAR((da * x).norm(), (dc * x).norm(), 1e-9 * n);
        }
        EXPECT_NEAR(restricted_smallest(da), restricted_smallest(dc), 1e-8 * n);
    }
}

TEST(Singularity, SpectralAgreesWithExactOnAllOfM42) {
    std::size_t singular = 0;
    for (const auto& a : enumerate_Mnd(4, 2)) {
        const bool exact = oracle::rational_det(oracle::to_ints(a)) == 0;
        EXPECT_EQ(exact, smallest_singular(a).sMin <= 1e-8);
        EXPECT_EQ(exact, exact_singular(a));
        singular += exact ? 1 : 0;
    }
    EXPECT_GT(singular, 0u);
}

TEST(DistanceToRowspan, Examples) {
    EXPECT_NEAR(distance_to_rowspan(Vector::Unit(2, 0), {Vector::Unit(2, 1)}), 1.0, 1e-12);
    Vector v(3);
    v << 1, 1, 0;
    EXPECT_NEAR(distance_to_rowspan(v, {Vector::Unit(3, 0), Vector::Unit(3, 1)}), 0.0, 1e-12);
    EXPECT_NEAR(distance_to_rowspan(Vector::Unit(3, 2), {Vector::Unit(3, 0), Vector::Unit(3, 1)}), 1.0, 1e-12);
    EXPECT_NEAR(distance_to_rowspan(v, {}), std::sqrt(2.0), 1e-12);
    // Rank-deficient spanning set.
    EXPECT_NEAR(distance_to_rowspan(Vector::Unit(3, 2), {v, 2 * v, Vector::Unit(3, 0)}), 1.0, 1e-12);
}

TEST(DistanceToRowspan, MatchesLeastSquares) {
    auto rng = make_rng(8);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 20; ++rep) {
        Matrix b(8, 5);
        for (Eigen::Index i = 0; i < b.size(); ++i) {
            b.data()[i] = g(rng);
        }
        Vector v(8);
        for (auto& c : v) {
            c = g(rng);
        }
        std::vector<Vector> rows;
        for (int c = 0; c < 5; ++c) {
            rows.emplace_back(b.col(c));
        }
        Vector coef = b.fullPivHouseholderQr().solve(v);
        EXPECT_NEAR(distance_to_rowspan(v, rows), (v - b * coef).norm(), 1e-10);
    }
}

TEST(RowDistanceBound, HoldsOnRandomInstances) {
    auto rng = make_rng(21);
    for (int rep = 0; rep < 200; ++rep) {
        auto a = to_dense(sample_uniform({6, 3}, rng));
        auto sigma = random_permutation(rng, 6);
        auto w = random_sum_zero(6, rng);
        auto bound = lemma44_lower_bound(a, sigma, w);
        EXPECT_TRUE(bound.holds(1e-9)) << bound.lhs << " < " << bound.rhs;
    }
}

TEST(RowDistanceBound, DifferenceDistanceIsTwice) {
    auto rng = make_rng(22);
    for (int rep = 0; rep < 50; ++rep) {
        auto a = to_dense(sample_uniform({7, 3}, rng));
        auto sigma = random_permutation(rng, 7);
        const auto s1 = static_cast<Eigen::Index>(sigma[0]);
        const auto s2 = static_cast<Eigen::Index>(sigma[1]);
        std::vector<Vector> span{Vector(a.row(s1) + a.row(s2))};
        for (Eigen::Index k = 0; k < 7; ++k) {
            if (k != s1 && k != s2) {
                span.emplace_back(a.row(k).transpose());
            }
        }
        const double single = distance_to_rowspan(a.row(s1).transpose(), span);
        const double diff = distance_to_rowspan((a.row(s1) - a.row(s2)).transpose(), span);
        EXPECT_NEAR(diff, 2 * single, 1e-9);
    }
}

TEST(RowDistanceBound, ConstructedOrthogonalW) {
    // w orthogonal to every row except sigma(1): then |Nw| = 0 and the bound
    // reads lhs >= s |<A1,w>| / (s + 2|<A1,w>|).
    auto a = to_dense(canonical_start(5, 2));
    std::vector<Index> sigma{0, 1, 2, 3, 4};
    std::vector<Vector> others;
    for (Eigen::Index k = 1; k < 5; ++k) {
        others.emplace_back(a.row(k).transpose());
    }
    Matrix rest(4, 5);
    for (int k = 0; k < 4; ++k) {
        rest.row(k) = others[k].transpose();
    }
    Eigen::FullPivLU<Matrix> lu(rest);
    Vector w = lu.kernel().col(0);
    w /= w.norm();
    auto bound = lemma44_lower_bound(a, sigma, w);
    EXPECT_FALSE(bound.indeterminate);
    EXPECT_TRUE(bound.holds(1e-9));
    EXPECT_THROW(lemma44_lower_bound(a, sigma, 2 * w), ValidationError);
}
