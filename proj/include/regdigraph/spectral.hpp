#ifndef REGDIGRAPH_SPECTRAL_HPP
#define REGDIGRAPH_SPECTRAL_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "core.hpp"

namespace regdigraph {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double default_svd_tol = 1e-10;

inline Matrix to_dense(const BitMatrix& a) {
    const auto n = static_cast<Eigen::Index>(a.size());
    Matrix out = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (auto k : a.row(static_cast<std::size_t>(i)).to_indices()) {
            out(i, static_cast<Eigen::Index>(k)) = 1.0;
        }
    }
    return out;
}

inline Matrix to_dense(const RegularDigraphMatrix& a) { return to_dense(a.bits()); }

struct SpectralResult {
    double sMin = 0.0;
    Vector rightVector; // x(A)
    Vector leftVector;  // y(A)
    double tol = default_svd_tol;
};

namespace detail {

/// Largest-magnitude coordinate positive; ties go to the lowest index.
inline void fix_sign(Vector& v) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < v.size(); ++k) {
        if (std::abs(v(k)) > std::abs(v(best))) {
            best = k;
        }
    }
    if (v.size() > 0 && v(best) < 0) {
        v = -v;
    }
}

} // namespace detail

/// Smallest singular value with unit right/left singular vectors. Works for
/// rectangular input too (rows >= cols), in which case sMin is the smallest
/// of the cols singular values and the left vector has length rows.
inline SpectralResult smallest_singular(const Matrix& a, double tol = default_svd_tol) {
    if (!(tol > 0.0) || tol > 1e-6) {
        throw ValidationError("smallest_singular tolerance must lie in (0, 1e-6]");
    }
    if (a.size() == 0 || !a.allFinite()) {
        throw ValidationError("smallest_singular needs a nonempty finite matrix");
    }
    if (a.rows() < a.cols()) {
        throw ValidationError("smallest_singular needs rows >= cols");
    }
    Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto last = a.cols() - 1;
    SpectralResult out;
    out.sMin = svd.singularValues()(last);
    out.rightVector = svd.matrixV().col(last);
    out.leftVector = svd.matrixU().col(last);
    out.tol = tol;
    detail::fix_sign(out.rightVector);
    // Keep the pair consistent: A x = s y.
    Vector ax = a * out.rightVector;
    if (ax.dot(out.leftVector) < 0) {
        out.leftVector = -out.leftVector;
    }
    const double scale = std::max(1.0, out.sMin);
    const double rightResidual = std::abs(ax.norm() - out.sMin);
    const double leftResidual = std::abs((a.transpose() * out.leftVector).norm() - out.sMin);
    const double normResidual = std::max(std::abs(out.rightVector.norm() - 1.0), std::abs(out.leftVector.norm() - 1.0));
    if (rightResidual > tol * scale || normResidual > tol) {
        throw RuntimeFailure("singular value decomposition missed tolerance: residual " + std::to_string(rightResidual));
    }
    // The left residual is only meaningful for square input.
    if (a.rows() == a.cols() && leftResidual > tol * scale) {
        throw RuntimeFailure("singular value decomposition missed tolerance: left residual " +
                             std::to_string(leftResidual));
    }
    return out;
}

inline SpectralResult smallest_singular(const RegularDigraphMatrix& a, double tol = default_svd_tol) {
    return smallest_singular(to_dense(a), tol);
}

/// Singular values only; cheaper when the vectors are not needed.
inline double smallest_singular_value(const Matrix& a) {
    Eigen::BDCSVD<Matrix> svd(a);
    return svd.singularValues()(a.cols() - 1);
}

/// Orthonormal basis of the hyperplane orthogonal to the all-ones vector
/// (Helmert columns): column k has k entries 1, then -k, scaled to unit length.
inline Matrix helmert_basis(std::size_t n) {
    if (n < 2) {
        throw ValidationError("helmert_basis needs n >= 2");
    }
    const auto nn = static_cast<Eigen::Index>(n);
    Matrix b = Matrix::Zero(nn, nn - 1);
    for (Eigen::Index k = 1; k < nn; ++k) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(k) * static_cast<double>(k + 1));
        for (Eigen::Index r = 0; r < k; ++r) {
            b(r, k - 1) = scale;
        }
        b(k, k - 1) = -static_cast<double>(k) * scale;
    }
    return b;
}

/// inf over unit sum-zero x of |Ax|, as the smallest singular value of A B.
inline double restricted_smallest(const Matrix& a) {
    if (a.rows() != a.cols() || a.rows() < 2) {
        throw ValidationError("restricted_smallest needs a square matrix with n >= 2");
    }
    Matrix ab = a * helmert_basis(static_cast<std::size_t>(a.cols()));
    return smallest_singular_value(ab);
}

inline double restricted_smallest(const RegularDigraphMatrix& a) { return restricted_smallest(to_dense(a)); }

/// Euclidean distance from v to span(rows).
inline double distance_to_rowspan(const Vector& v, const std::vector<Vector>& rows) {
    if (rows.empty()) {
        return v.norm();
    }
    Matrix basis(v.size(), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t c = 0; c < rows.size(); ++c) {
        if (rows[c].size() != v.size()) {
            throw ValidationError("distance_to_rowspan: dimension mismatch");
        }
        basis.col(static_cast<Eigen::Index>(c)) = rows[c];
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(basis);
    const auto rank = qr.rank();
    if (rank == 0) {
        return v.norm();
    }
    // Project onto the first `rank` Householder directions.
    Vector qtv = qr.householderQ().transpose() * v;
    return qtv.tail(qtv.size() - rank).norm();
}

struct Lemma44Bound {
    double lhs = 0.0; // dist(A_{s1}, V)
    double rhs = 0.0;
    double sMin = 0.0;
    bool indeterminate = false; // zero denominator

    bool holds(double slack) const { return indeterminate || lhs >= rhs - slack; }
};

/// Both sides of the row-distance bound for rows s1 = sigma(1), s2 = sigma(2):
/// V = span{A_{s1} + A_{s2}, A_k : k != s1, s2},
/// rhs = s_n(A) |<A_{s1}, w>| / (s_n(A) + |N w| + |<A_{s1} + A_{s2}, w>|),
/// N being A with rows s1, s2 removed.
inline Lemma44Bound lemma44_lower_bound(const Matrix& a, const std::vector<Index>& sigma, const Vector& w) {
    const auto n = a.rows();
    if (a.cols() != n || static_cast<Eigen::Index>(sigma.size()) != n || w.size() != n || n < 2) {
        throw ValidationError("lemma44_lower_bound: dimension mismatch");
    }
    if (std::abs(w.norm() - 1.0) > 1e-9) {
        throw ValidationError("lemma44_lower_bound needs a unit vector w");
    }
    const auto s1 = static_cast<Eigen::Index>(sigma[0]);
    const auto s2 = static_cast<Eigen::Index>(sigma[1]);
    Vector r1 = a.row(s1).transpose();
    Vector r2 = a.row(s2).transpose();
    std::vector<Vector> span;
    span.emplace_back(r1 + r2);
    Matrix rest(n - 2, n);
    Eigen::Index next = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
        if (k == s1 || k == s2) {
            continue;
        }
        span.emplace_back(a.row(k).transpose());
        rest.row(next++) = a.row(k);
    }
    Lemma44Bound out;
    out.lhs = distance_to_rowspan(r1, span);
    out.sMin = smallest_singular_value(a);
    const double numer = out.sMin * std::abs(r1.dot(w));
    const double denom = out.sMin + (rest * w).norm() + std::abs((r1 + r2).dot(w));
    if (denom == 0.0) {
        out.indeterminate = true;
        return out;
    }
    out.rhs = numer / denom;
    return out;
}

} // namespace regdigraph

#endif
