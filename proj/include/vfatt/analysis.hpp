#pragma once

// Numerical checks of the closed loop's structure: positive definiteness of
// the gain matrices, zeros of the innovation terms, equilibria, the Lyapunov
// function and its derivative, a certified basin around the origin, and
// instability probes for the remaining equilibria.
//
// Everything here works in quaternion space (Q̃, Q, omega) and is kept apart
// from the measurement-driven control path in controller.hpp, so the two can
// serve as independent oracles for each other.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "vfatt/controller.hpp"
#include "vfatt/eigen.hpp"
#include "vfatt/error.hpp"
#include "vfatt/measurements.hpp"
#include "vfatt/plant.hpp"
#include "vfatt/so3.hpp"
#include "vfatt/tolerances.hpp"

namespace vfatt {

// ---------------------------------------------------------------------------
// Innovation terms in closed form
// ---------------------------------------------------------------------------

/// z_gamma = -2 R̂^T (q̃0 I - S(q̃)) W_gamma q̃ with Q̃ = Q ⊙ Q̂^-1.
inline Vec3 z_gamma_closed_form(const UnitQuaternion& q, const UnitQuaternion& qhat, const Mat3& w_gamma) {
    const UnitQuaternion qt = quat_error(q, qhat);
    const Vec3 inner = qt.scalar() * (w_gamma * qt.vec()) - cross(qt.vec(), w_gamma * qt.vec());
    return -2.0 * rotate_to_body(qhat, inner);
}

/// z_rho = -2 (q0 I - S(q)) W_rho q.
inline Vec3 z_rho_closed_form(const UnitQuaternion& q, const Mat3& w_rho) {
    const Vec3 wq = w_rho * q.vec();
    return -2.0 * (q.scalar() * wq - cross(q.vec(), wq));
}

/// (s I - S(v)) W v, the expression whose zeros are the zeros of z_gamma / z_rho.
inline Vec3 innovation_kernel(double s, const Vec3& v, const Mat3& w) {
    const Vec3 wv = w * v;
    return s * wv - cross(v, wv);
}

// ---------------------------------------------------------------------------
// Positive definiteness of W
// ---------------------------------------------------------------------------

struct Lemma2Verdict {
    bool positive_definite = false;
    double lambda_min_gamma = 0.0;
    double lambda_min_rho = 0.0;
};

/// Accepts degenerate sets (n = 1, collinear vectors) and reports them as not
/// positive definite.
inline Lemma2Verdict check_lemma2(const ReferenceSet& refs) {
    const GainMatrices gm = gain_matrices(refs.r, refs.gamma, refs.rho);
    const EigenDecomposition eg = sym3_eigen(gm.W_gamma);
    const EigenDecomposition er = sym3_eigen(gm.W_rho);
    Lemma2Verdict out;
    out.lambda_min_gamma = eg.min();
    out.lambda_min_rho = er.min();
    const double tol_g = tol::kUnit * std::max(1.0, std::fabs(eg.max()));
    const double tol_r = tol::kUnit * std::max(1.0, std::fabs(er.max()));
    out.positive_definite = eg.min() > tol_g && er.min() > tol_r;
    return out;
}

// ---------------------------------------------------------------------------
// Zeros of the innovation kernel
// ---------------------------------------------------------------------------

/// Unit vectors of an eigenspace of dimension 2 or 3 (a circle or the whole sphere).
struct ZeroFamily {
    double eigenvalue = 0.0;
    std::vector<Vec3> basis; // orthonormal

    std::size_t dimension() const { return basis.size(); }

    Vec3 project(const Vec3& x) const {
        Vec3 p;
        for (const Vec3& e : basis) p += dot(e, x) * e;
        return p;
    }

    /// Distance from x to the unit sphere of the eigenspace.
    double distance(const Vec3& x) const {
        const Vec3 p = project(x);
        const double n = norm(p);
        if (n == 0.0) return std::sqrt(dot(x, x) + 1.0);
        return norm(x - p / n);
    }

    /// A few members: ±basis vectors and the normalized sum of the basis.
    std::vector<Vec3> witnesses() const {
        std::vector<Vec3> out;
        Vec3 sum;
        for (const Vec3& e : basis) {
            out.push_back(e);
            out.push_back(-e);
            sum += e;
        }
        out.push_back(sum / norm(sum));
        return out;
    }
};

/// Solutions (s, v) on the three-sphere of (s I - S(v)) W v = 0 for W > 0:
/// (±1, 0) and (0, v) with v a unit eigenvector of W. Simple eigenvalues give
/// the isolated pairs ±v; repeated eigenvalues give families.
struct Lemma3Zeros {
    std::vector<Vec3> isolated; // vector parts with scalar part 0, both signs
    std::vector<ZeroFamily> families;

    bool whole_sphere() const { return families.size() == 1 && families.front().dimension() == 3; }

    /// All isolated solutions including the trivial pair, as (s, v).
    std::vector<std::pair<double, Vec3>> points() const {
        std::vector<std::pair<double, Vec3>> out{{1.0, Vec3{}}, {-1.0, Vec3{}}};
        for (const Vec3& v : isolated) out.emplace_back(0.0, v);
        return out;
    }

    /// Distance from a vector part v to the nearest nontrivial zero.
    double distance_nontrivial(const Vec3& v) const {
        double d = std::numeric_limits<double>::infinity();
        for (const Vec3& z : isolated) d = std::min(d, norm(v - z));
        for (const ZeroFamily& f : families) d = std::min(d, f.distance(v));
        return d;
    }

    /// Distance of (s, v) on the three-sphere to the zero set.
    double distance(double s, const Vec3& v) const {
        const double trivial = std::min(std::hypot(s - 1.0, norm(v)), std::hypot(s + 1.0, norm(v)));
        return std::min(trivial, std::hypot(s, distance_nontrivial(v)));
    }
};

inline Lemma3Zeros lemma3_zeros(const Mat3& w) {
    const EigenDecomposition eig = sym3_eigen(w);
    if (!(eig.min() > 0.0)) throw Error(ErrorKind::InvalidArgument, "W must be positive definite");
    const double same = tol::kUnit * std::max(1.0, std::fabs(eig.max()));

    Lemma3Zeros out;
    std::size_t i = 0;
    while (i < 3) {
        std::size_t j = i + 1;
        while (j < 3 && eig.values[j] - eig.values[i] <= same) ++j;
        if (j - i == 1) {
            out.isolated.push_back(eig.vectors[i]);
            out.isolated.push_back(-eig.vectors[i]);
        } else {
            ZeroFamily f;
            f.eigenvalue = eig.values[i];
            for (std::size_t k = i; k < j; ++k) f.basis.push_back(eig.vectors[k]);
            out.families.push_back(std::move(f));
        }
        i = j;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Closed-loop vector field in quaternion space
// ---------------------------------------------------------------------------

struct ClosedLoopRate {
    Quat4 dqt;
    Quat4 dq;
    Vec3 domega;

    double norm() const { return std::sqrt(dot(dqt, dqt) + dot(dq, dq) + dot(domega, domega)); }
};

/// Right-hand side of the closed loop in the coordinates (Q̃, Q, omega), with
/// the innovation terms replaced by their closed forms. Scalar-part rates are
/// included so that a zero is a genuine rest point of the full state.
inline ClosedLoopRate closed_loop_field(const UnitQuaternion& qt, const UnitQuaternion& q, const Vec3& omega,
                                        const GainMatrices& gm, const InertiaMatrix& j) {
    // R̂ = R(Q̃)^T R(Q), so R̂^T x = R(Q)^T R(Q̃) x.
    const RotationMatrix rt = quat_to_rot(qt);
    const RotationMatrix r = quat_to_rot(q);
    const Mat3 rhat = rt.matrix().transpose() * r.matrix();
    const Vec3 zg = -2.0 * (rhat.transpose() * innovation_kernel(qt.scalar(), qt.vec(), gm.W_gamma));
    const Vec3 zr = -2.0 * innovation_kernel(q.scalar(), q.vec(), gm.W_rho);
    ClosedLoopRate out;
    out.dqt = kinematics_deriv(qt, rhat * (omega + zg));
    out.dq = kinematics_deriv(q, omega);
    out.domega = dynamics_deriv(j, omega, zg + zr);
    return out;
}

// ---------------------------------------------------------------------------
// Equilibria
// ---------------------------------------------------------------------------

enum class EquilibriumLabel { Omega1, Omega2, Omega3, Omega4, Psi1, Psi2, Psi3, Psi4 };

constexpr std::string_view to_string(EquilibriumLabel l) {
    constexpr std::array<std::string_view, 8> names{"Omega1", "Omega2", "Omega3", "Omega4",
                                                    "Psi1",   "Psi2",   "Psi3",   "Psi4"};
    return names[static_cast<std::size_t>(l)];
}

/// Index 1..4 within either naming scheme.
constexpr int equilibrium_class(EquilibriumLabel l) { return static_cast<int>(l) % 4 + 1; }

/// An isolated rest point chi = (q̃, q, omega). Scalar parts are implied up to
/// sign by the unit constraint.
struct EquilibriumPoint {
    Vec3 qt;
    Vec3 q;
    Vec3 omega;
    EquilibriumLabel label = EquilibriumLabel::Omega1;
};

/// One factor of a continuum: either a fixed vector part or the unit sphere of
/// an eigenspace.
struct EquilibriumComponent {
    std::optional<Vec3> fixed;
    std::optional<ZeroFamily> family;

    double distance(const Vec3& x) const { return fixed ? norm(x - *fixed) : family->distance(x); }

    std::vector<Vec3> witnesses() const { return fixed ? std::vector<Vec3>{*fixed} : family->witnesses(); }
};

/// A continuum of rest points (q̃ in one component, q in the other, omega = 0),
/// represented by a membership predicate and a few sample witnesses.
struct EquilibriumFamily {
    EquilibriumComponent qt;
    EquilibriumComponent q;
    EquilibriumLabel label = EquilibriumLabel::Psi2;

    bool contains(const Vec3& qt_v, const Vec3& q_v, const Vec3& omega, double tolerance = tol::kUnit) const {
        return qt.distance(qt_v) <= tolerance && q.distance(q_v) <= tolerance && norm(omega) <= tolerance;
    }

    std::vector<EquilibriumPoint> witnesses() const {
        std::vector<EquilibriumPoint> out;
        for (const Vec3& a : qt.witnesses())
            for (const Vec3& b : q.witnesses()) out.push_back({a, b, Vec3{}, label});
        return out;
    }
};

struct EquilibriumSet {
    std::vector<EquilibriumPoint> points;
    std::vector<EquilibriumFamily> families;

    std::size_t count(EquilibriumLabel l) const {
        return static_cast<std::size_t>(
            std::count_if(points.begin(), points.end(), [l](const EquilibriumPoint& p) { return p.label == l; }));
    }

    /// Distance from chi to the nearest listed equilibrium (point or family).
    double distance(const Vec3& qt, const Vec3& q, const Vec3& omega) const {
        double d = std::numeric_limits<double>::infinity();
        for (const EquilibriumPoint& p : points)
            d = std::min(d, std::sqrt(dot(qt - p.qt, qt - p.qt) + dot(q - p.q, q - p.q) +
                                      dot(omega - p.omega, omega - p.omega)));
        for (const EquilibriumFamily& f : families)
            d = std::min(d, std::sqrt(std::pow(f.qt.distance(qt), 2) + std::pow(f.q.distance(q), 2) + dot(omega, omega)));
        return d;
    }
};

namespace detail {

inline EquilibriumLabel label_for(bool qt_zero, bool q_zero, Variant variant) {
    const int base = variant == Variant::Theorem1 ? 0 : 4;
    int idx = 0;
    if (qt_zero && q_zero) idx = 0;
    else if (!qt_zero && q_zero) idx = 1;
    else if (!qt_zero && !q_zero) idx = 2;
    else idx = 3;
    return static_cast<EquilibriumLabel>(base + idx);
}

inline std::vector<EquilibriumComponent> components(const Lemma3Zeros& z) {
    std::vector<EquilibriumComponent> out{{Vec3{}, std::nullopt}};
    for (const Vec3& v : z.isolated) out.push_back({v, std::nullopt});
    for (const ZeroFamily& f : z.families) out.push_back({std::nullopt, f});
    return out;
}

} // namespace detail

/// Cartesian assembly of the zeros of W_gamma (for q̃) and W_rho (for q), with
/// omega = 0. Isolated times isolated gives points; anything involving an
/// eigenspace family is returned as a family.
inline EquilibriumSet enumerate_equilibria(const GainMatrices& gm, Variant variant) {
    const auto zg = detail::components(lemma3_zeros(gm.W_gamma));
    const auto zr = detail::components(lemma3_zeros(gm.W_rho));
    EquilibriumSet out;
    for (std::size_t a = 0; a < zg.size(); ++a) {
        for (std::size_t b = 0; b < zr.size(); ++b) {
            const EquilibriumLabel label = detail::label_for(a == 0, b == 0, variant);
            if (zg[a].fixed && zr[b].fixed) out.points.push_back({*zg[a].fixed, *zr[b].fixed, Vec3{}, label});
            else out.families.push_back({zg[a], zr[b], label});
        }
    }
    return out;
}

/// Largest closed-loop rate over both sign choices of each implied scalar part.
inline double equilibrium_residual(const EquilibriumPoint& p, const GainMatrices& gm, const InertiaMatrix& j) {
    const double st = std::sqrt(std::max(0.0, 1.0 - dot(p.qt, p.qt)));
    const double s = std::sqrt(std::max(0.0, 1.0 - dot(p.q, p.q)));
    double worst = 0.0;
    for (double sign_t : {1.0, -1.0}) {
        for (double sign : {1.0, -1.0}) {
            const UnitQuaternion qt = UnitQuaternion::normalized({sign_t * st, p.qt});
            const UnitQuaternion q = UnitQuaternion::normalized({sign * s, p.q});
            worst = std::max(worst, closed_loop_field(qt, q, p.omega, gm, j).norm());
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Search for rest points missing from the enumeration
// ---------------------------------------------------------------------------

struct ZeroSearchConfig {
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    double omega_radius = 2.0;       // omega sampled uniformly in this ball
    double raw_threshold = 1e-6;     // residual counted as a zero before refinement
    double refined_threshold = 1e-9; // residual counted as a zero after refinement
    double neighbourhood = 1e-2;     // allowed distance from an enumerated equilibrium
    int max_iterations = 40;
};

struct ZeroSearchReport {
    std::size_t samples = 0;
    std::size_t raw_hits = 0;         // samples already below raw_threshold
    std::size_t raw_outside = 0;      // ... that are far from every enumerated point
    std::size_t refined_hits = 0;     // samples that Levenberg-Marquardt drove to a zero
    std::size_t refined_outside = 0;  // ... far from every enumerated point
    double worst_outside_distance = 0.0;
    std::vector<std::array<double, 9>> outside_examples;

    bool pass() const { return raw_outside == 0 && refined_outside == 0; }
};

namespace detail {

constexpr std::size_t kSearchDim = 11;
using SearchVec = std::array<double, kSearchDim>;

inline SearchVec search_residual(const SearchVec& x, const GainMatrices& gm, const InertiaMatrix& j) {
    const UnitQuaternion qt = UnitQuaternion::normalized({x[0], {x[1], x[2], x[3]}});
    const UnitQuaternion q = UnitQuaternion::normalized({x[4], {x[5], x[6], x[7]}});
    const ClosedLoopRate f = closed_loop_field(qt, q, {x[8], x[9], x[10]}, gm, j);
    return {f.dqt.s, f.dqt.v.x, f.dqt.v.y, f.dqt.v.z, f.dq.s, f.dq.v.x, f.dq.v.y, f.dq.v.z,
            f.domega.x, f.domega.y, f.domega.z};
}

inline double squared(const SearchVec& r) {
    double s = 0.0;
    for (double v : r) s += v * v;
    return s;
}

// Solves (A + mu diag(A)) x = b by Cholesky; false when not positive definite.
inline bool solve_damped(std::array<std::array<double, kSearchDim>, kSearchDim> a, double mu, SearchVec b, SearchVec& x) {
    constexpr std::size_t n = kSearchDim;
    for (std::size_t i = 0; i < n; ++i) a[i][i] += mu * std::max(a[i][i], 1e-12);
    for (std::size_t k = 0; k < n; ++k) {
        double d = a[k][k];
        for (std::size_t p = 0; p < k; ++p) d -= a[k][p] * a[k][p];
        if (!(d > 0.0)) return false;
        a[k][k] = std::sqrt(d);
        for (std::size_t i = k + 1; i < n; ++i) {
            double s = a[i][k];
            for (std::size_t p = 0; p < k; ++p) s -= a[i][p] * a[k][p];
            a[i][k] = s / a[k][k];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t p = 0; p < i; ++p) s -= a[i][p] * b[p];
        b[i] = s / a[i][i];
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t p = i + 1; p < n; ++p) s -= a[p][i] * b[p];
        b[i] = s / a[i][i];
    }
    x = b;
    return true;
}

// Levenberg-Marquardt on the 11 raw coordinates with a forward-difference Jacobian.
inline SearchVec refine_zero(SearchVec x, const GainMatrices& gm, const InertiaMatrix& j, int max_iterations,
                             double target) {
    SearchVec r = search_residual(x, gm, j);
    double cost = squared(r);
    double mu = 1e-3;
    for (int it = 0; it < max_iterations && cost > target * target; ++it) {
        std::array<SearchVec, kSearchDim> jac{}; // jac[k] = dr/dx_k
        for (std::size_t k = 0; k < kSearchDim; ++k) {
            SearchVec xp = x;
            const double h = 1e-7 * std::max(1.0, std::fabs(x[k]));
            xp[k] += h;
            const SearchVec rp = search_residual(xp, gm, j);
            for (std::size_t i = 0; i < kSearchDim; ++i) jac[k][i] = (rp[i] - r[i]) / h;
        }
        std::array<std::array<double, kSearchDim>, kSearchDim> jtj{};
        SearchVec g{};
        for (std::size_t a = 0; a < kSearchDim; ++a) {
            for (std::size_t b = a; b < kSearchDim; ++b) {
                double s = 0.0;
                for (std::size_t i = 0; i < kSearchDim; ++i) s += jac[a][i] * jac[b][i];
                jtj[a][b] = s;
                jtj[b][a] = s;
            }
            double s = 0.0;
            for (std::size_t i = 0; i < kSearchDim; ++i) s += jac[a][i] * r[i];
            g[a] = -s;
        }
        bool improved = false;
        for (int tries = 0; tries < 8 && !improved; ++tries) {
            SearchVec dx{};
            if (solve_damped(jtj, mu, g, dx)) {
                SearchVec xn = x;
                for (std::size_t k = 0; k < kSearchDim; ++k) xn[k] += dx[k];
                const SearchVec rn = search_residual(xn, gm, j);
                const double cn = squared(rn);
                if (cn < cost) {
                    // Keep the quaternion blocks on the sphere.
                    const double nt = std::sqrt(xn[0] * xn[0] + xn[1] * xn[1] + xn[2] * xn[2] + xn[3] * xn[3]);
                    const double nq = std::sqrt(xn[4] * xn[4] + xn[5] * xn[5] + xn[6] * xn[6] + xn[7] * xn[7]);
                    for (std::size_t k = 0; k < 4; ++k) {
                        xn[k] /= nt;
                        xn[k + 4] /= nq;
                    }
                    x = xn;
                    r = search_residual(x, gm, j);
                    cost = squared(r);
                    mu = std::max(mu / 3.0, 1e-12);
                    improved = true;
                    continue;
                }
            }
            mu *= 4.0;
        }
        if (!improved) break;
    }
    return x;
}

inline Quat4 random_unit_quaternion(std::mt19937_64& gen) {
    std::normal_distribution<double> n01(0.0, 1.0);
    for (;;) {
        const Quat4 q{n01(gen), {n01(gen), n01(gen), n01(gen)}};
        const double n = norm(q);
        if (n > 1e-6) return (1.0 / n) * q;
    }
}

inline Vec3 random_in_ball(std::mt19937_64& gen, double radius) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        const Vec3 v{u(gen), u(gen), u(gen)};
        if (dot(v, v) <= 1.0) return radius * v;
    }
}

} // namespace detail

/// Samples (Q̃, Q, omega) at random, refines each sample towards a rest point,
/// and reports every rest point found farther than `neighbourhood` from the
/// enumerated set.
inline ZeroSearchReport search_unlisted_equilibria(const GainMatrices& gm, const InertiaMatrix& j,
                                                   const EquilibriumSet& listed, const ZeroSearchConfig& cfg = {}) {
    std::mt19937_64 gen(cfg.seed);
    ZeroSearchReport rep;
    rep.samples = cfg.samples;
    const auto record_outside = [&](const Vec3& qt, const Vec3& q, const Vec3& w, double d) {
        rep.worst_outside_distance = std::max(rep.worst_outside_distance, d);
        if (rep.outside_examples.size() < 8)
            rep.outside_examples.push_back({qt.x, qt.y, qt.z, q.x, q.y, q.z, w.x, w.y, w.z});
    };
    for (std::size_t n = 0; n < cfg.samples; ++n) {
        const Quat4 a = detail::random_unit_quaternion(gen);
        const Quat4 b = detail::random_unit_quaternion(gen);
        const Vec3 w = detail::random_in_ball(gen, cfg.omega_radius);
        detail::SearchVec x{a.s, a.v.x, a.v.y, a.v.z, b.s, b.v.x, b.v.y, b.v.z, w.x, w.y, w.z};

        if (std::sqrt(detail::squared(detail::search_residual(x, gm, j))) < cfg.raw_threshold) {
            ++rep.raw_hits;
            const double d = listed.distance(a.v, b.v, w);
            if (d > cfg.neighbourhood) {
                ++rep.raw_outside;
                record_outside(a.v, b.v, w, d);
            }
        }

        x = detail::refine_zero(x, gm, j, cfg.max_iterations, cfg.refined_threshold);
        if (std::sqrt(detail::squared(detail::search_residual(x, gm, j))) < cfg.refined_threshold) {
            ++rep.refined_hits;
            const Vec3 qt{x[1], x[2], x[3]};
            const Vec3 q{x[5], x[6], x[7]};
            const Vec3 om{x[8], x[9], x[10]};
            const double d = listed.distance(qt, q, om);
            if (d > cfg.neighbourhood) {
                ++rep.refined_outside;
                record_outside(qt, q, om, d);
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Lyapunov function
// ---------------------------------------------------------------------------

/// V = 2 q̃^T W_gamma q̃ + 2 q^T W_rho q + ½ omega^T J omega.
inline double lyapunov_V(const ErrorState& chi, const GainMatrices& gm, const InertiaMatrix& j) {
    return 2.0 * dot(chi.qt, gm.W_gamma * chi.qt) + 2.0 * dot(chi.q, gm.W_rho * chi.q) +
           0.5 * dot(chi.omega, j.matrix() * chi.omega);
}

/// Same V written with measurements: ½ Σ g_i ‖b̂_i - b_i‖² + ½ Σ p_i ‖R_d^T r_i - b_i‖² + ½ omega^T J omega.
inline double lyapunov_V_measured(std::span<const Vec3> bhat, std::span<const Vec3> b, std::span<const Vec3> r,
                                  std::span<const double> gamma, std::span<const double> rho, const Vec3& omega,
                                  const InertiaMatrix& j, const RotationMatrix& desired = RotationMatrix::identity()) {
    const RotationMatrix rdt = desired.transpose();
    double v = 0.5 * dot(omega, j.matrix() * omega);
    for (std::size_t i = 0; i < b.size(); ++i) {
        const Vec3 bt = bhat[i] - b[i];
        const Vec3 e = rdt * r[i] - b[i];
        v += 0.5 * gamma[i] * dot(bt, bt) + 0.5 * rho[i] * dot(e, e);
    }
    return v;
}

/// dV/dt = -‖z_gamma‖² = -4 q̃^T W (I - q̃ q̃^T) W q̃.
inline double lyapunov_Vdot(const ErrorState& chi, const GainMatrices& gm) {
    const Vec3 wq = gm.W_gamma * chi.qt;
    const double along = dot(chi.qt, wq);
    return -4.0 * (dot(wq, wq) - along * along);
}

/// Preconditioned triads: dV/dt = -16 γ² ‖q̃‖² (1 - ‖q̃‖²).
inline double lyapunov_Vdot_preconditioned(const ErrorState& chi, double gamma) {
    const double n2 = dot(chi.qt, chi.qt);
    return -16.0 * gamma * gamma * n2 * (1.0 - n2);
}

// ---------------------------------------------------------------------------
// Certified basin of the origin
// ---------------------------------------------------------------------------

/// Sublevel set chi^T P chi <= c with P = diag(2 W_gamma, 2 W_rho, ½ J) and
/// c just below lambda_m = 2 min(lambda_min(W_gamma), lambda_min(W_rho)), plus
/// the inner ball-shaped set ‖q̃‖² + ‖q‖² + lambda_max(J)/(2 lambda_M) ‖omega‖² < lambda_m / lambda_M.
struct Phi1Certificate {
    GainMatrices gains;
    InertiaMatrix inertia;
    double c = 0.0;
    double lambda_m = 0.0;
    double lambda_M = 0.0;
    double lambda_max_J = 0.0;

    /// chi^T P chi, which equals V(chi).
    double quadratic(const ErrorState& chi) const { return lyapunov_V(chi, gains, inertia); }

    bool in_state_space(const ErrorState& chi) const {
        return dot(chi.qt, chi.qt) <= 1.0 + tol::kUnit && dot(chi.q, chi.q) <= 1.0 + tol::kUnit;
    }

    bool contains(const ErrorState& chi) const { return in_state_space(chi) && quadratic(chi) <= c; }

    bool contains_inner(const ErrorState& chi) const {
        return in_state_space(chi) && dot(chi.qt, chi.qt) + dot(chi.q, chi.q) +
                                              lambda_max_J / (2.0 * lambda_M) * dot(chi.omega, chi.omega) <
                                          lambda_m / lambda_M;
    }
};

inline Phi1Certificate phi1_certificate(const GainMatrices& gm, const InertiaMatrix& j) {
    const EigenDecomposition eg = sym3_eigen(gm.W_gamma);
    const EigenDecomposition er = sym3_eigen(gm.W_rho);
    if (!(eg.min() > 0.0 && er.min() > 0.0))
        throw Error(ErrorKind::InvalidArgument, "gain matrices must be positive definite");
    Phi1Certificate out{gm, j};
    out.lambda_m = 2.0 * std::min(eg.min(), er.min());
    out.lambda_M = 2.0 * std::max(eg.max(), er.max());
    out.c = (1.0 - 1e-6) * out.lambda_m;
    out.lambda_max_J = j.lambda_max();
    return out;
}

// ---------------------------------------------------------------------------
// Instability probes
// ---------------------------------------------------------------------------

struct ProbeSetup {
    InertiaMatrix inertia;
    ReferenceSet refs;
    ControllerConfig controller;
    double dt = 1e-3;
    double horizon = 60.0;
    double escape_radius = 0.1;
};

struct ProbeResult {
    EquilibriumLabel label = EquilibriumLabel::Omega2;
    bool escaped = false;
    double escape_time = std::numeric_limits<double>::quiet_NaN();
    double max_distance = 0.0;
    double V_equilibrium = 0.0;
    double V_final = 0.0;
    ErrorState final_state;
    double final_norm = 0.0;     // ‖chi(t_end)‖, distance from the origin
    bool final_in_basin = false; // chi(t_end) inside the certified basin of the origin
    double final_qt0 = 0.0;
    double initial_qt0 = 0.0;

    /// Escaped, ended with lower V, and was captured by the origin's basin.
    bool pass() const { return escaped && V_final < V_equilibrium && final_in_basin; }
};

/// Initial full state for a probe: the equilibrium with its zero scalar parts
/// pushed to epsilon (q̃0 when q̃ ≠ 0, q0 when q ≠ 0).
inline RigidBodyState perturbed_equilibrium(const EquilibriumPoint& eq, double epsilon) {
    const bool qt_zero = norm(eq.qt) == 0.0;
    const bool q_zero = norm(eq.q) == 0.0;
    const double keep = std::sqrt(1.0 - epsilon * epsilon);
    const UnitQuaternion qt = qt_zero ? UnitQuaternion::identity() : UnitQuaternion(epsilon, keep * eq.qt);
    const UnitQuaternion q = q_zero ? UnitQuaternion::identity() : UnitQuaternion(epsilon, keep * eq.q);
    // Q̃ = Q ⊙ Q̂^-1  =>  Q̂ = Q̃^-1 ⊙ Q.
    return {q, eq.omega, quat_mul(quat_inv(qt), q)};
}

/// Starts the measurement-driven closed loop at a perturbed equilibrium and
/// records whether it leaves the escape_radius ball. Ω₂/Ω₃ are pushed along
/// q̃0 and Ω₃/Ω₄ along q0, the directions in which those rest points are
/// repelling. Probing the origin (Ω₁/Ψ₁) is rejected.
inline ProbeResult instability_probe(const EquilibriumPoint& eq, double epsilon, const ProbeSetup& setup) {
    if (equilibrium_class(eq.label) == 1)
        throw Error(ErrorKind::InvalidArgument, "the origin is asymptotically stable; nothing to probe");
    if (!(epsilon > 0.0 && epsilon <= 1e-3)) throw Error(ErrorKind::InvalidArgument, "epsilon must be in (0, 1e-3]");

    const VectorController controller(setup.refs, setup.controller);
    const GainMatrices gm = controller.gains();
    const Phi1Certificate basin = phi1_certificate(gm, setup.inertia);
    SimConfig cfg{setup.dt, setup.horizon, 1};
    ClosedLoop loop(setup.inertia, SensorModel{setup.refs}, controller, cfg);

    ProbeResult out;
    out.label = eq.label;
    out.V_equilibrium = lyapunov_V({eq.qt, 0.0, eq.q, 0.0, eq.omega}, gm, setup.inertia);

    RigidBodyState s = perturbed_equilibrium(eq, epsilon);
    out.initial_qt0 = error_state(s).qt0;
    const std::size_t n = cfg.steps();
    for (std::size_t k = 0; k < n; ++k) {
        s = loop.advance(s);
        const ErrorState chi = error_state(s);
        const double d = std::sqrt(dot(chi.qt - eq.qt, chi.qt - eq.qt) + dot(chi.q - eq.q, chi.q - eq.q) +
                                   dot(chi.omega - eq.omega, chi.omega - eq.omega));
        out.max_distance = std::max(out.max_distance, d);
        if (!out.escaped && d > setup.escape_radius) {
            out.escaped = true;
            out.escape_time = loop.time();
        }
    }
    out.final_state = error_state(s);
    out.final_qt0 = out.final_state.qt0;
    out.V_final = lyapunov_V(out.final_state, gm, setup.inertia);
    const ErrorState& f = out.final_state;
    out.final_norm = std::sqrt(dot(f.qt, f.qt) + dot(f.q, f.q) + dot(f.omega, f.omega));
    out.final_in_basin = basin.contains(f);
    return out;
}

} // namespace vfatt
