#pragma once

// Inertial reference vectors and their body-frame observations.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "vfatt/error.hpp"
#include "vfatt/so3.hpp"
#include "vfatt/tolerances.hpp"

namespace vfatt {

/// True when ‖a × b‖ / (‖a‖‖b‖) > 1e-9; zero vectors count as collinear.
inline bool non_collinear(const Vec3& a, const Vec3& b) {
    const double scale = norm(a) * norm(b);
    if (!(scale > 0.0)) return false;
    return norm(cross(a, b)) / scale > tol::kCollinear;
}

/// Known inertial vectors r_i with per-vector gains (gamma_i, rho_i).
///
/// A plain aggregate so that degenerate sets can still be analysed; use
/// make() or validate() before handing a set to the controller.
struct ReferenceSet {
    std::vector<Vec3> r;
    std::vector<double> gamma;
    std::vector<double> rho;

    std::size_t size() const { return r.size(); }

    /// At least two of the r_i are not collinear.
    bool satisfies_assumption1() const {
        for (std::size_t i = 0; i < r.size(); ++i)
            for (std::size_t j = i + 1; j < r.size(); ++j)
                if (non_collinear(r[i], r[j])) return true;
        return false;
    }

    void validate() const {
        if (r.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least two reference vectors");
        if (gamma.size() != r.size() || rho.size() != r.size())
            throw Error(ErrorKind::InvalidArgument, "gain lists must match the number of reference vectors");
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (!is_finite(r[i])) throw Error(ErrorKind::InvalidArgument, "r[" + std::to_string(i) + "] is not finite");
            if (!(gamma[i] > 0.0) || !std::isfinite(gamma[i]))
                throw Error(ErrorKind::InvalidArgument, "gamma[" + std::to_string(i) + "] must be > 0");
            if (!(rho[i] > 0.0) || !std::isfinite(rho[i]))
                throw Error(ErrorKind::InvalidArgument, "rho[" + std::to_string(i) + "] must be > 0");
        }
        if (!satisfies_assumption1())
            throw Error(ErrorKind::AssumptionViolated, "all reference vectors are collinear");
    }

    static ReferenceSet make(std::vector<Vec3> r, std::vector<double> gamma, std::vector<double> rho) {
        ReferenceSet out{std::move(r), std::move(gamma), std::move(rho)};
        out.validate();
        return out;
    }

    /// Same gains for every vector.
    static ReferenceSet uniform(std::vector<Vec3> r, double gamma, double rho) {
        const std::size_t n = r.size();
        return make(std::move(r), std::vector<double>(n, gamma), std::vector<double>(n, rho));
    }
};

/// b_i = R^T r_i (body frame) and b̂_i = R̂^T r_i (auxiliary frame).
struct BodyMeasurements {
    std::vector<Vec3> b;
    std::vector<Vec3> bhat;
};

inline BodyMeasurements measure(const UnitQuaternion& q, const UnitQuaternion& qhat, const ReferenceSet& refs) {
    BodyMeasurements out;
    out.b.reserve(refs.size());
    out.bhat.reserve(refs.size());
    for (const Vec3& r : refs.r) {
        out.b.push_back(rotate_to_body(q, r));
        out.bhat.push_back(rotate_to_body(qhat, r));
    }
    return out;
}

using Triad = std::array<Vec3, 3>;

/// Orthonormal inertial basis v1 = r1/‖r1‖, v2 ∝ r1 × r2, v3 ∝ (r1 × r2) × r1.
inline Triad precondition_refs(const Vec3& r1, const Vec3& r2) {
    if (!non_collinear(r1, r2)) throw Error(ErrorKind::CollinearInputs, "r1 and r2 are collinear");
    const Vec3 c = cross(r1, r2);
    const Vec3 d = cross(c, r1);
    return {r1 / norm(r1), c / norm(c), d / norm(d)};
}

/// Body-frame counterpart of precondition_refs. Denominators are the inertial
/// norms, so u_i = R^T v_i exactly when b_i = R^T r_i; with noisy b_i the u_i
/// are not unit.
inline Triad precondition_body(const Vec3& b1, const Vec3& b2, const Vec3& r1, const Vec3& r2) {
    if (!non_collinear(r1, r2)) throw Error(ErrorKind::CollinearInputs, "r1 and r2 are collinear");
    const Vec3 rc = cross(r1, r2);
    const Vec3 bc = cross(b1, b2);
    return {b1 / norm(r1), bc / norm(rc), cross(bc, b1) / norm(cross(rc, r1))};
}

struct ImuSample {
    Vec3 a_body; // apparent acceleration, m/s^2
    Vec3 m_body; // magnetic field
};

/// Reference/measurement pairs obtained from an IMU in quasi-stationary flight.
struct ImuPairs {
    std::array<Vec3, 2> r;
    std::array<Vec3, 2> b;
};

/// Accelerometer and magnetometer as vector sensors: r1 = [0, 0, -g], b1 = a_B,
/// r2 = m_I, b2 = m_B.
inline ImuPairs imu_to_measurements(const ImuSample& sample, double g, const Vec3& m_inertial) {
    if (!(g > 0.0)) throw Error(ErrorKind::InvalidArgument, "g must be > 0");
    const Vec3 a_inertial{0.0, 0.0, -g};
    if (!non_collinear(a_inertial, m_inertial))
        throw Error(ErrorKind::CollinearInputs, "magnetic field is collinear with gravity");
    return {{a_inertial, m_inertial}, {sample.a_body, sample.m_body}};
}

/// b plus isotropic zero-mean Gaussian noise, deterministic in seed.
inline Vec3 add_noise(const Vec3& b, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma must be >= 0");
    if (sigma == 0.0) return b;
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, sigma);
    const double nx = dist(gen);
    const double ny = dist(gen);
    const double nz = dist(gen);
    return {b.x + nx, b.y + ny, b.z + nz};
}

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31U);
}

} // namespace detail

/// Synthesizes what the vehicle's sensors report for a given attitude pair.
/// Noise, when enabled, perturbs the physical measurements b_i only; b̂_i come
/// from the internally integrated auxiliary attitude and stay exact.
struct SensorModel {
    ReferenceSet refs;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;

    /// `key` identifies the sampling instant so that reruns are reproducible.
    BodyMeasurements operator()(const UnitQuaternion& q, const UnitQuaternion& qhat, std::uint64_t key = 0) const {
        BodyMeasurements out = measure(q, qhat, refs);
        if (noise_sigma > 0.0) {
            const std::uint64_t base = detail::splitmix64(seed ^ detail::splitmix64(key));
            for (std::size_t i = 0; i < out.b.size(); ++i)
                out.b[i] = add_noise(out.b[i], noise_sigma, detail::splitmix64(base + i));
        }
        return out;
    }
};

} // namespace vfatt
