#pragma once

// Velocity-free attitude stabilization from vector measurements.
//
// The feedback only ever sees BodyMeasurements: the measured directions b_i
// and the same inertial directions seen from the auxiliary attitude, b̂_i.
// Neither the attitude nor the angular velocity enter the control path.
//
//   z_gamma = Σ γ_i b̂_i × b_i        (innovation against the auxiliary system)
//   z_rho   = Σ ρ_i (R_d^T r_i) × b_i (innovation against the desired attitude)
//   tau     = z_gamma + z_rho
//   beta    = -z_gamma              (input of the auxiliary system)

#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>

#include "vfatt/error.hpp"
#include "vfatt/measurements.hpp"
#include "vfatt/so3.hpp"

namespace vfatt {

enum class Variant {
    Theorem1, // raw vector measurements, per-vector gains
    Theorem2, // preconditioned orthonormal triads, scalar gains
};

constexpr std::string_view to_string(Variant v) { return v == Variant::Theorem1 ? "theorem1" : "theorem2"; }

/// W = -Σ g_i S(r_i)^2, M = Σ g_i r_i r_i^T = mu I - W, mu = Σ g_i r_i^T r_i.
struct GainMatrices {
    Mat3 W_gamma;
    Mat3 W_rho;
    Mat3 M_gamma;
    double mu = 0.0;
};

/// -Σ g_i S(r_i)^2 with no validation (degenerate sets allowed).
inline Mat3 w_matrix(std::span<const Vec3> r, std::span<const double> gains) {
    Mat3 w;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const Mat3 s = skew(r[i]);
        w -= gains[i] * (s * s);
    }
    return w;
}

inline GainMatrices gain_matrices(std::span<const Vec3> r, std::span<const double> gamma,
                                  std::span<const double> rho) {
    GainMatrices out;
    out.W_gamma = w_matrix(r, gamma);
    out.W_rho = w_matrix(r, rho);
    for (std::size_t i = 0; i < r.size(); ++i) {
        out.M_gamma += gamma[i] * outer(r[i], r[i]);
        out.mu += gamma[i] * dot(r[i], r[i]);
    }
    return out;
}

/// Throws AssumptionViolated when every r_i is collinear.
inline GainMatrices build_W(const ReferenceSet& refs) {
    if (!refs.satisfies_assumption1())
        throw Error(ErrorKind::AssumptionViolated, "reference vectors are collinear; W is singular");
    return gain_matrices(refs.r, refs.gamma, refs.rho);
}

/// Gain matrices of the preconditioned triad: W_gamma = 2γI, W_rho = 2ρI.
inline GainMatrices build_W(const Triad& v, double gamma, double rho) {
    const std::array<double, 3> g{gamma, gamma, gamma};
    const std::array<double, 3> p{rho, rho, rho};
    return gain_matrices(v, g, p);
}

struct ControllerConfig {
    Variant variant = Variant::Theorem1;
    // Scalar gains of the preconditioned variant; Theorem1 uses the per-vector
    // gains carried by the ReferenceSet.
    double gamma = 10.0;
    double rho = 0.5;
    RotationMatrix desired_attitude = RotationMatrix::identity();

    void validate() const {
        if (!(gamma > 0.0) || !std::isfinite(gamma)) throw Error(ErrorKind::InvalidArgument, "gamma must be > 0");
        if (!(rho > 0.0) || !std::isfinite(rho)) throw Error(ErrorKind::InvalidArgument, "rho must be > 0");
    }
};

struct ControllerOutput {
    Vec3 tau;
    Vec3 beta;
    Vec3 z_gamma;
    Vec3 z_rho;
};

/// Σ g_i S(bhat_i) b_i.
inline Vec3 z_gamma(std::span<const Vec3> bhat, std::span<const Vec3> b, std::span<const double> gains) {
    Vec3 z;
    for (std::size_t i = 0; i < b.size(); ++i) z += gains[i] * cross(bhat[i], b[i]);
    return z;
}

inline Vec3 z_gamma(const BodyMeasurements& meas, std::span<const double> gains) {
    return z_gamma(meas.bhat, meas.b, gains);
}

/// Σ g_i S(R_d^T r_i) b_i.
inline Vec3 z_rho(std::span<const Vec3> b, std::span<const Vec3> r, std::span<const double> gains,
                  const RotationMatrix& desired = RotationMatrix::identity()) {
    const RotationMatrix rdt = desired.transpose();
    Vec3 z;
    for (std::size_t i = 0; i < b.size(); ++i) z += gains[i] * cross(rdt * r[i], b[i]);
    return z;
}

inline Vec3 z_rho(const BodyMeasurements& meas, const ReferenceSet& refs,
                  const RotationMatrix& desired = RotationMatrix::identity()) {
    return z_rho(meas.b, refs.r, refs.rho, desired);
}

/// Measurement-feedback controller; a callable from BodyMeasurements to ControllerOutput.
class VectorController {
public:
    VectorController(ReferenceSet refs, ControllerConfig cfg) : refs_(std::move(refs)), cfg_(cfg) {
        refs_.validate();
        cfg_.validate();
        if (cfg_.variant == Variant::Theorem2) triad_ = precondition_refs(refs_.r[0], refs_.r[1]);
    }

    ControllerOutput operator()(const BodyMeasurements& meas) const {
        if (meas.b.size() != refs_.size() || meas.bhat.size() != refs_.size())
            throw Error(ErrorKind::InvalidArgument, "measurement count does not match the reference set");
        ControllerOutput out;
        if (cfg_.variant == Variant::Theorem1) {
            out.z_gamma = z_gamma(meas, refs_.gamma);
            out.z_rho = z_rho(meas, refs_, cfg_.desired_attitude);
        } else {
            const Triad u = precondition_body(meas.b[0], meas.b[1], refs_.r[0], refs_.r[1]);
            const Triad uhat = precondition_body(meas.bhat[0], meas.bhat[1], refs_.r[0], refs_.r[1]);
            const std::array<double, 3> g{cfg_.gamma, cfg_.gamma, cfg_.gamma};
            const std::array<double, 3> p{cfg_.rho, cfg_.rho, cfg_.rho};
            out.z_gamma = z_gamma(uhat, u, g);
            out.z_rho = z_rho(u, triad_, p, cfg_.desired_attitude);
        }
        out.tau = out.z_gamma + out.z_rho;
        out.beta = -out.z_gamma;
        return out;
    }

    const ReferenceSet& refs() const { return refs_; }
    const ControllerConfig& config() const { return cfg_; }
    /// Inertial triad v1..v3 (Theorem2 only; zero otherwise).
    const Triad& triad() const { return triad_; }

    /// Gain matrices the closed loop actually sees.
    GainMatrices gains() const {
        return cfg_.variant == Variant::Theorem1 ? build_W(refs_) : build_W(triad_, cfg_.gamma, cfg_.rho);
    }

private:
    ReferenceSet refs_;
    ControllerConfig cfg_;
    Triad triad_{};
};

inline ControllerOutput control(const BodyMeasurements& meas, const ReferenceSet& refs, const ControllerConfig& cfg) {
    return VectorController(refs, cfg)(meas);
}

/// A priori bound on ‖tau‖: Σ (γ_i + ρ_i) ‖r_i‖² or 3(γ + ρ) for triads.
inline double torque_bound(const ControllerConfig& cfg, const ReferenceSet& refs) {
    if (cfg.variant == Variant::Theorem2) return 3.0 * (cfg.gamma + cfg.rho);
    double bound = 0.0;
    for (std::size_t i = 0; i < refs.size(); ++i) bound += (refs.gamma[i] + refs.rho[i]) * dot(refs.r[i], refs.r[i]);
    return bound;
}

} // namespace vfatt
