#pragma once

// Unit quaternions, rotation matrices and skew-symmetric matrices.
//
// Conventions: scalar-first quaternions Q = (q0, q), Hamilton product,
// R(Q) maps body-frame coordinates to inertial ones, so a constant inertial
// vector r is seen in the body frame as b = R^T r.

#include <array>
#include <cassert>
#include <cmath>
#include <ostream>

#include "vfatt/error.hpp"
#include "vfatt/tolerances.hpp"

namespace vfatt {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr Vec3& operator-=(const Vec3& o) {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    constexpr Vec3& operator*=(double s) {
        x *= s;
        y *= s;
        z *= s;
        return *this;
    }

    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline bool is_finite(const Vec3& a) {
    return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

inline std::ostream& operator<<(std::ostream& os, const Vec3& v) {
    return os << '[' << v.x << ", " << v.y << ", " << v.z << ']';
}

/// Dense 3x3 matrix, row-major.
struct Mat3 {
    std::array<double, 9> m{};

    constexpr double operator()(int r, int c) const { return m[static_cast<std::size_t>(3 * r + c)]; }
    constexpr double& operator()(int r, int c) { return m[static_cast<std::size_t>(3 * r + c)]; }

    static constexpr Mat3 zero() { return {}; }

    static constexpr Mat3 identity() { return diag(1.0, 1.0, 1.0); }

    static constexpr Mat3 diag(double a, double b, double c) {
        Mat3 out;
        out(0, 0) = a;
        out(1, 1) = b;
        out(2, 2) = c;
        return out;
    }

    static constexpr Mat3 rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
        return Mat3{{r0.x, r0.y, r0.z, r1.x, r1.y, r1.z, r2.x, r2.y, r2.z}};
    }

    static constexpr Mat3 columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
        return Mat3{{c0.x, c1.x, c2.x, c0.y, c1.y, c2.y, c0.z, c1.z, c2.z}};
    }

    constexpr Vec3 row(int r) const { return {(*this)(r, 0), (*this)(r, 1), (*this)(r, 2)}; }
    constexpr Vec3 col(int c) const { return {(*this)(0, c), (*this)(1, c), (*this)(2, c)}; }

    constexpr Mat3 transpose() const {
        Mat3 t;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) t(r, c) = (*this)(c, r);
        return t;
    }

    constexpr double trace() const { return (*this)(0, 0) + (*this)(1, 1) + (*this)(2, 2); }

    constexpr double determinant() const { return dot(row(0), cross(row(1), row(2))); }

    constexpr Mat3& operator+=(const Mat3& o) {
        for (std::size_t i = 0; i < 9; ++i) m[i] += o.m[i];
        return *this;
    }
    constexpr Mat3& operator-=(const Mat3& o) {
        for (std::size_t i = 0; i < 9; ++i) m[i] -= o.m[i];
        return *this;
    }
    constexpr Mat3& operator*=(double s) {
        for (auto& v : m) v *= s;
        return *this;
    }

    friend constexpr bool operator==(const Mat3&, const Mat3&) = default;
};

constexpr Mat3 operator+(Mat3 a, const Mat3& b) { return a += b; }
constexpr Mat3 operator-(Mat3 a, const Mat3& b) { return a -= b; }
constexpr Mat3 operator*(double s, Mat3 a) { return a *= s; }
constexpr Mat3 operator*(Mat3 a, double s) { return a *= s; }

constexpr Vec3 operator*(const Mat3& a, const Vec3& v) { return {dot(a.row(0), v), dot(a.row(1), v), dot(a.row(2), v)}; }

constexpr Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 out;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) out(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c) + a(r, 2) * b(2, c);
    return out;
}

constexpr Mat3 outer(const Vec3& a, const Vec3& b) { return Mat3::rows(a.x * b, a.y * b, a.z * b); }

/// Largest absolute entry.
inline double max_abs(const Mat3& a) {
    double out = 0.0;
    for (double v : a.m) out = std::fmax(out, std::fabs(v));
    return out;
}

inline double frobenius(const Mat3& a) {
    double s = 0.0;
    for (double v : a.m) s += v * v;
    return std::sqrt(s);
}

inline bool is_finite(const Mat3& a) {
    for (double v : a.m)
        if (!std::isfinite(v)) return false;
    return true;
}

/// Inverse via the adjugate. Caller is responsible for conditioning.
constexpr Mat3 inverse(const Mat3& a) {
    const Vec3 c0 = cross(a.row(1), a.row(2));
    const Vec3 c1 = cross(a.row(2), a.row(0));
    const Vec3 c2 = cross(a.row(0), a.row(1));
    const double det = dot(a.row(0), c0);
    return (1.0 / det) * Mat3::columns(c0, c1, c2);
}

inline std::ostream& operator<<(std::ostream& os, const Mat3& a) {
    return os << '[' << a.row(0) << ", " << a.row(1) << ", " << a.row(2) << ']';
}

/// S(x): S(x) y = x × y.
constexpr Mat3 skew(const Vec3& x) {
    return Mat3{{0.0, -x.z, x.y, x.z, 0.0, -x.x, -x.y, x.x, 0.0}};
}

/// Raw (not necessarily unit) quaternion, used for rates and integrator stages.
struct Quat4 {
    double s = 0.0;
    Vec3 v{};

    constexpr Quat4& operator+=(const Quat4& o) {
        s += o.s;
        v += o.v;
        return *this;
    }
    constexpr Quat4& operator*=(double k) {
        s *= k;
        v *= k;
        return *this;
    }

    friend constexpr bool operator==(const Quat4&, const Quat4&) = default;
};

constexpr Quat4 operator+(Quat4 a, const Quat4& b) { return a += b; }
constexpr Quat4 operator*(double k, Quat4 a) { return a *= k; }
constexpr Quat4 operator-(const Quat4& a) { return {-a.s, -a.v}; }

constexpr double dot(const Quat4& a, const Quat4& b) { return a.s * b.s + dot(a.v, b.v); }
inline double norm(const Quat4& a) { return std::sqrt(dot(a, a)); }

/// Hamilton product (p0 q0 - p.q, p0 q + q0 p + p × q).
constexpr Quat4 hamilton(const Quat4& p, const Quat4& q) {
    return {p.s * q.s - dot(p.v, q.v), p.s * q.v + q.s * p.v + cross(p.v, q.v)};
}

/// Element of the three-sphere. Public construction normalizes.
class UnitQuaternion {
public:
    constexpr UnitQuaternion() = default;

    /// Normalizes (q0, q); throws NearZeroNorm when the norm is at most 1e-6.
    UnitQuaternion(double q0, const Vec3& q) : UnitQuaternion(normalized(Quat4{q0, q})) {}

    static UnitQuaternion normalized(const Quat4& raw) {
        const double n = norm(raw);
        if (!(n > tol::kMinNorm) || !std::isfinite(n))
            throw Error(ErrorKind::NearZeroNorm, "quaternion norm too small to normalize");
        UnitQuaternion out;
        out.s_ = raw.s / n;
        out.v_ = raw.v / n;
        return out;
    }

    /// Wraps components the caller already knows to be unit (drift within 1e-9).
    static UnitQuaternion from_unit(const Quat4& raw) {
        assert(std::fabs(norm(raw) - 1.0) <= tol::kUnit);
        UnitQuaternion out;
        out.s_ = raw.s;
        out.v_ = raw.v;
        return out;
    }

    static constexpr UnitQuaternion identity() { return {}; }

    constexpr double scalar() const { return s_; }
    constexpr const Vec3& vec() const { return v_; }
    constexpr Quat4 raw() const { return {s_, v_}; }

    double norm_error() const { return norm(raw()) - 1.0; }

    UnitQuaternion operator-() const { return from_unit({-s_, -v_}); }

    friend constexpr bool operator==(const UnitQuaternion&, const UnitQuaternion&) = default;

private:
    double s_ = 1.0;
    Vec3 v_{};
};

inline std::ostream& operator<<(std::ostream& os, const UnitQuaternion& q) {
    return os << '(' << q.scalar() << ", " << q.vec() << ')';
}

/// Orthonormal, determinant-one 3x3 matrix.
class RotationMatrix {
public:
    RotationMatrix() = default;

    /// Validates orthonormality and det = 1 to 1e-9.
    static RotationMatrix from_matrix(const Mat3& m) {
        if (!is_finite(m) || max_abs(m.transpose() * m - Mat3::identity()) > tol::kUnit ||
            std::fabs(m.determinant() - 1.0) > tol::kUnit)
            throw Error(ErrorKind::InvalidArgument, "matrix is not a proper rotation");
        RotationMatrix out;
        out.m_ = m;
        return out;
    }

    static RotationMatrix identity() { return {}; }

    const Mat3& matrix() const { return m_; }
    double operator()(int r, int c) const { return m_(r, c); }

    RotationMatrix transpose() const {
        RotationMatrix out;
        out.m_ = m_.transpose();
        return out;
    }

    Vec3 operator*(const Vec3& x) const { return m_ * x; }

private:
    friend RotationMatrix quat_to_rot(const UnitQuaternion&);
    Mat3 m_ = Mat3::identity();
};

inline UnitQuaternion quat_mul(const UnitQuaternion& p, const UnitQuaternion& q) {
    return UnitQuaternion::from_unit(hamilton(p.raw(), q.raw()));
}

inline UnitQuaternion quat_inv(const UnitQuaternion& q) { return UnitQuaternion::from_unit({q.scalar(), -q.vec()}); }

/// Rodriguez formula R = I + 2 q0 S(q) + 2 S(q)^2.
inline RotationMatrix quat_to_rot(const UnitQuaternion& q) {
    const Mat3 s = skew(q.vec());
    RotationMatrix out;
    out.m_ = Mat3::identity() + (2.0 * q.scalar()) * s + 2.0 * (s * s);
    return out;
}

/// x_B = R^T x_I, evaluated as the vector part of Q^-1 ⊙ x̄ ⊙ Q.
inline Vec3 rotate_to_body(const UnitQuaternion& q, const Vec3& x) {
    const Vec3 t = cross(q.vec(), x);
    return x - (2.0 * q.scalar()) * t + 2.0 * cross(q.vec(), t);
}

/// Q̃ = Q ⊙ Q̂^-1.
inline UnitQuaternion quat_error(const UnitQuaternion& q, const UnitQuaternion& qhat) {
    return quat_mul(q, quat_inv(qhat));
}

/// Rescales to unit norm; throws NearZeroNorm at norm <= 1e-6.
inline UnitQuaternion quat_renormalize(const Quat4& raw) { return UnitQuaternion::normalized(raw); }

inline UnitQuaternion quat_renormalize(const UnitQuaternion& q) { return UnitQuaternion::normalized(q.raw()); }

} // namespace vfatt
