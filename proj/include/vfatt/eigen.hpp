#pragma once

// Spectral decomposition of symmetric 3x3 matrices by cyclic Jacobi rotations.

#include <algorithm>
#include <array>
#include <cmath>

#include "vfatt/error.hpp"
#include "vfatt/so3.hpp"
#include "vfatt/tolerances.hpp"

namespace vfatt {

struct EigenDecomposition {
    std::array<double, 3> values{}; // ascending
    std::array<Vec3, 3> vectors{};  // orthonormal, vectors[i] pairs with values[i]

    double min() const { return values[0]; }
    double max() const { return values[2]; }
};

inline bool is_symmetric(const Mat3& w, double tolerance = tol::kSymmetric) {
    const double scale = std::max(1.0, max_abs(w));
    return std::fabs(w(0, 1) - w(1, 0)) <= tolerance * scale && std::fabs(w(0, 2) - w(2, 0)) <= tolerance * scale &&
           std::fabs(w(1, 2) - w(2, 1)) <= tolerance * scale;
}

namespace detail {

// Flip so the largest-magnitude component is positive (first one on ties).
inline Vec3 canonical_sign(const Vec3& v) {
    int k = 0;
    for (int i = 1; i < 3; ++i)
        if (std::fabs(v[i]) > std::fabs(v[k]) + 1e-12) k = i;
    return v[k] < 0.0 ? -v : v;
}

} // namespace detail

/// Throws NotSymmetric when w is not symmetric to 1e-9 (relative to its scale).
inline EigenDecomposition sym3_eigen(const Mat3& w) {
    if (!is_finite(w) || !is_symmetric(w)) throw Error(ErrorKind::NotSymmetric, "matrix is not symmetric");

    constexpr int kMaxSweeps = 50;
    constexpr double kOffDiagonal = 1e-13;

    // Symmetrize away the tolerated asymmetry before rotating.
    Mat3 a = 0.5 * (w + w.transpose());
    Mat3 v = Mat3::identity();
    const double scale = std::max(frobenius(a), 1e-300);

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        const double off = std::sqrt(a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2));
        if (off <= kOffDiagonal * scale) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // a <- G^T a G with G the (p, q) plane rotation.
                for (int k = 0; k < 3; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

    EigenDecomposition out;
    for (int i = 0; i < 3; ++i) {
        const int k = order[static_cast<std::size_t>(i)];
        out.values[static_cast<std::size_t>(i)] = a(k, k);
        const Vec3 col = v.col(k);
        out.vectors[static_cast<std::size_t>(i)] = detail::canonical_sign(col / norm(col));
    }
    return out;
}

} // namespace vfatt
