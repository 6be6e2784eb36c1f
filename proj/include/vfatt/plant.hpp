#pragma once

// Rigid-body attitude plant, auxiliary attitude system, and a fixed-step RK4
// integrator for the coupled state (Q, omega, Q̂).

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <type_traits>

#include "vfatt/controller.hpp"
#include "vfatt/eigen.hpp"
#include "vfatt/error.hpp"
#include "vfatt/measurements.hpp"
#include "vfatt/so3.hpp"
#include "vfatt/tolerances.hpp"

namespace vfatt {

/// Symmetric positive definite inertia matrix (kg m^2) with its cached inverse.
class InertiaMatrix {
public:
    InertiaMatrix() : InertiaMatrix(Mat3::identity()) {}

    /// Throws InvalidArgument when not symmetric to 1e-12, SingularInertia when
    /// not positive definite or worse conditioned than 1e12.
    explicit InertiaMatrix(const Mat3& j) : j_(j) {
        if (!is_finite(j) || !is_symmetric(j, tol::kAlgebra))
            throw Error(ErrorKind::InvalidArgument, "inertia matrix must be symmetric");
        const EigenDecomposition eig = sym3_eigen(j);
        if (!(eig.min() > 0.0) || eig.max() / eig.min() > tol::kMaxInertiaCondition)
            throw Error(ErrorKind::SingularInertia, "inertia matrix is not positive definite or is ill-conditioned");
        j_inv_ = inverse(j);
        lambda_max_ = eig.max();
    }

    static InertiaMatrix diag(double a, double b, double c) { return InertiaMatrix(Mat3::diag(a, b, c)); }

    const Mat3& matrix() const { return j_; }
    const Mat3& inverse_matrix() const { return j_inv_; }
    double lambda_max() const { return lambda_max_; }

private:
    Mat3 j_;
    Mat3 j_inv_;
    double lambda_max_ = 1.0;
};

struct RigidBodyState {
    UnitQuaternion q;    // body attitude
    Vec3 omega;          // body angular velocity, rad/s
    UnitQuaternion qhat; // auxiliary system attitude
};

struct SimConfig {
    double dt = 1e-3;
    double t_end = 30.0;
    std::size_t renorm_every = 1;

    void validate() const {
        if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::InvalidArgument, "dt must be > 0");
        if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw Error(ErrorKind::InvalidArgument, "t_end must be >= 0");
        if (renorm_every < 1) throw Error(ErrorKind::InvalidArgument, "renorm_every must be >= 1");
    }

    /// floor(t_end / dt), robust to t_end being a float multiple of dt.
    std::size_t steps() const { return static_cast<std::size_t>(std::floor(t_end / dt + 1e-9)); }
};

/// Q̇ = ½ Q ⊙ (0, omega).
constexpr Quat4 kinematics_deriv(const Quat4& q, const Vec3& omega) { return 0.5 * hamilton(q, Quat4{0.0, omega}); }

inline Quat4 kinematics_deriv(const UnitQuaternion& q, const Vec3& omega) { return kinematics_deriv(q.raw(), omega); }

/// ω̇ = J^-1 (tau - omega × J omega).
inline Vec3 dynamics_deriv(const InertiaMatrix& j, const Vec3& omega, const Vec3& tau) {
    return j.inverse_matrix() * (tau - cross(omega, j.matrix() * omega));
}

/// dQ̂/dt = ½ Q̂ ⊙ (0, beta).
inline Quat4 auxiliary_deriv(const UnitQuaternion& qhat, const Vec3& beta) { return kinematics_deriv(qhat.raw(), beta); }

/// chi = (q̃, q, omega) together with the scalar parts q̃0 and q0.
struct ErrorState {
    Vec3 qt;
    double qt0 = 1.0;
    Vec3 q;
    double q0 = 1.0;
    Vec3 omega;
};

inline ErrorState error_state(const RigidBodyState& s) {
    const UnitQuaternion qt = quat_error(s.q, s.qhat);
    return {qt.vec(), qt.scalar(), s.q.vec(), s.q.scalar(), s.omega};
}

/// A feedback law that consumes body-frame measurements and nothing else.
template <class F>
concept MeasurementFeedback = std::invocable<const F&, const BodyMeasurements&> &&
                              std::same_as<std::invoke_result_t<const F&, const BodyMeasurements&>, ControllerOutput>;

namespace detail {

struct Derivative {
    Quat4 dq;
    Vec3 domega;
    Quat4 dqhat;
};

struct RawState {
    Quat4 q;
    Vec3 omega;
    Quat4 qhat;
};

inline RawState axpy(const RawState& x, double h, const Derivative& d) {
    return {x.q + h * d.dq, x.omega + h * d.domega, x.qhat + h * d.dqhat};
}

// Stage quaternions drift off the sphere by O(dt^2); measurements are
// synthesized from their projection, the kinematics use the raw values.
template <class Controller>
Derivative closed_loop_rhs(const RawState& x, const InertiaMatrix& j, const SensorModel& sensor,
                           const Controller& controller, std::uint64_t key) {
    if (!std::isfinite(norm(x.q)) || !std::isfinite(norm(x.qhat)) || !is_finite(x.omega))
        throw Error(ErrorKind::NumericalBlowUp, "non-finite state inside integration step");
    const BodyMeasurements meas = sensor(UnitQuaternion::normalized(x.q), UnitQuaternion::normalized(x.qhat), key);
    const ControllerOutput u = controller(meas);
    return {kinematics_deriv(x.q, x.omega), dynamics_deriv(j, x.omega, u.tau), kinematics_deriv(x.qhat, u.beta)};
}

} // namespace detail

/// One classical RK4 step of the closed loop. Torque and beta are recomputed at
/// every stage from freshly synthesized measurements; the controller is handed
/// BodyMeasurements only. Both quaternions are renormalized after steps whose
/// 1-based index is a multiple of cfg.renorm_every, and whenever their norm
/// drifts more than 1e-9 from one.
template <MeasurementFeedback Controller>
RigidBodyState step(const RigidBodyState& state, const InertiaMatrix& j, const SensorModel& sensor,
                    const Controller& controller, const SimConfig& cfg, std::uint64_t step_index = 0) {
    const double h = cfg.dt;
    const detail::RawState x0{state.q.raw(), state.omega, state.qhat.raw()};
    const std::uint64_t key = 4 * step_index;

    const detail::Derivative k1 = detail::closed_loop_rhs(x0, j, sensor, controller, key);
    const detail::Derivative k2 = detail::closed_loop_rhs(detail::axpy(x0, 0.5 * h, k1), j, sensor, controller, key + 1);
    const detail::Derivative k3 = detail::closed_loop_rhs(detail::axpy(x0, 0.5 * h, k2), j, sensor, controller, key + 2);
    const detail::Derivative k4 = detail::closed_loop_rhs(detail::axpy(x0, h, k3), j, sensor, controller, key + 3);

    const double w = h / 6.0;
    const Quat4 q = x0.q + w * (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq);
    const Vec3 omega = x0.omega + w * (k1.domega + 2.0 * k2.domega + 2.0 * k3.domega + k4.domega);
    const Quat4 qhat = x0.qhat + w * (k1.dqhat + 2.0 * k2.dqhat + 2.0 * k3.dqhat + k4.dqhat);

    if (!std::isfinite(norm(q)) || !std::isfinite(norm(qhat)) || !is_finite(omega))
        throw Error(ErrorKind::NumericalBlowUp, "non-finite state after integration step");

    const bool scheduled = cfg.renorm_every > 0 && (step_index + 1) % cfg.renorm_every == 0;
    const auto finish = [scheduled](const Quat4& raw) {
        if (scheduled || std::fabs(norm(raw) - 1.0) > tol::kUnit) return UnitQuaternion::normalized(raw);
        return UnitQuaternion::from_unit(raw);
    };
    return {finish(q), omega, finish(qhat)};
}

/// Convenience wrapper that owns the plant, sensors, and feedback law and counts steps.
template <MeasurementFeedback Controller>
class ClosedLoop {
public:
    ClosedLoop(InertiaMatrix j, SensorModel sensor, Controller controller, SimConfig cfg)
        : j_(std::move(j)), sensor_(std::move(sensor)), controller_(std::move(controller)), cfg_(cfg) {
        cfg_.validate();
    }

    RigidBodyState advance(const RigidBodyState& s) { return step(s, j_, sensor_, controller_, cfg_, steps_++); }

    /// Controller output at a state, using the same measurement key as the
    /// first stage of the step about to be taken.
    ControllerOutput output(const RigidBodyState& s) const { return controller_(sensor_(s.q, s.qhat, 4 * steps_)); }

    std::uint64_t steps_taken() const { return steps_; }
    double time() const { return static_cast<double>(steps_) * cfg_.dt; }

    const InertiaMatrix& inertia() const { return j_; }
    const SensorModel& sensor() const { return sensor_; }
    const Controller& controller() const { return controller_; }
    const SimConfig& config() const { return cfg_; }

private:
    InertiaMatrix j_;
    SensorModel sensor_;
    Controller controller_;
    SimConfig cfg_;
    std::uint64_t steps_ = 0;
};

} // namespace vfatt
