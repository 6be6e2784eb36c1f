#pragma once

// Verification suites behind `vfatt verify`. Each suite returns a Report with
// one Check per property; residuals are the worst observed error.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vfatt/analysis.hpp"
#include "vfatt/controller.hpp"
#include "vfatt/measurements.hpp"
#include "vfatt/plant.hpp"
#include "vfatt/scenario.hpp"
#include "vfatt/so3.hpp"

namespace vfatt {

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"algebra", "lemmas", "equilibria", "lyapunov", "instability", "regression"};
    return names;
}

namespace detail {

inline Vec3 random_vec(std::mt19937_64& gen, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(gen), u(gen), u(gen)};
}

inline UnitQuaternion random_attitude(std::mt19937_64& gen) {
    return UnitQuaternion::from_unit(random_unit_quaternion(gen));
}

// Random chi with ‖q̃‖ <= 1, ‖q‖ <= 1 and omega in a ball of radius 2.
inline ErrorState random_error_state(std::mt19937_64& gen) {
    const UnitQuaternion a = random_attitude(gen);
    const UnitQuaternion b = random_attitude(gen);
    return {a.vec(), a.scalar(), b.vec(), b.scalar(), random_in_ball(gen, 2.0)};
}

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

inline double mat_err(const Mat3& a, const Mat3& b) { return max_abs(a - b); }

} // namespace detail

// ---------------------------------------------------------------------------

inline Report verify_algebra(std::size_t samples = 1000, std::uint64_t seed = 7) {
    using namespace detail;
    std::mt19937_64 gen(seed);
    Report rep{"algebra", {}};
    double skew_err = 0, ss_err = 0, conj_err = 0, assoc_err = 0, hom_err = 0, orth_err = 0, body_err = 0,
           cover_err = 0, inv_err = 0, unit_err = 0;
    for (std::size_t n = 0; n < samples; ++n) {
        const Vec3 x = random_vec(gen, 2.0);
        const Vec3 y = random_vec(gen, 2.0);
        const UnitQuaternion p = random_attitude(gen);
        const UnitQuaternion q = random_attitude(gen);
        const UnitQuaternion r = random_attitude(gen);
        const Mat3 sx = skew(x);
        skew_err = std::max({skew_err, max_abs(sx + sx.transpose()), norm(sx * y - cross(x, y)),
                             norm(sx * y + skew(y) * x), norm(sx * x)});
        ss_err = std::max(ss_err, mat_err(sx * skew(y), outer(y, x) - dot(x, y) * Mat3::identity()));
        const Mat3 rq = quat_to_rot(q).matrix();
        conj_err = std::max(conj_err, mat_err(rq * sx * rq.transpose(), skew(rq * x)));
        const UnitQuaternion l = quat_mul(quat_mul(p, q), r);
        const UnitQuaternion rr = quat_mul(p, quat_mul(q, r));
        assoc_err = std::max(assoc_err, norm(Quat4{l.scalar() - rr.scalar(), l.vec() - rr.vec()}));
        hom_err = std::max(hom_err, mat_err(quat_to_rot(quat_mul(p, q)).matrix(), quat_to_rot(p).matrix() * rq));
        orth_err = std::max({orth_err, mat_err(rq.transpose() * rq, Mat3::identity()), std::fabs(rq.determinant() - 1.0)});
        body_err = std::max(body_err, norm(rotate_to_body(q, x) - rq.transpose() * x));
        cover_err = std::max(cover_err, mat_err(quat_to_rot(-q).matrix(), rq));
        const UnitQuaternion e = quat_mul(q, quat_inv(q));
        inv_err = std::max(inv_err, norm(Quat4{e.scalar() - 1.0, e.vec()}));
        unit_err = std::max(unit_err, std::fabs(quat_mul(p, q).norm_error()));
    }
    const double t = tol::kAlgebra;
    rep.add("skew_properties", skew_err <= t, skew_err, "S^T = -S, S(x)y = x×y = -S(y)x, S(x)x = 0");
    rep.add("skew_product_identity", ss_err <= t, ss_err, "S(x)S(y) = yx^T - (x^T y)I");
    rep.add("skew_conjugation", conj_err <= t, conj_err, "R S(x) R^T = S(Rx)");
    rep.add("quat_mul_associative", assoc_err <= t, assoc_err);
    rep.add("rotation_homomorphism", hom_err <= t, hom_err, "R(P⊙Q) = R(P)R(Q)");
    rep.add("rotation_orthonormal", orth_err <= tol::kUnit, orth_err, "R^T R = I, det R = 1");
    rep.add("rotate_to_body", body_err <= t, body_err, "Q^-1 ⊙ x̄ ⊙ Q = R^T x");
    rep.add("double_cover", cover_err <= t, cover_err, "R(Q) = R(-Q)");
    rep.add("inverse", inv_err <= t, inv_err, "Q ⊙ Q^-1 = identity");
    rep.add("unit_norm_preserved", unit_err <= tol::kUnit, unit_err);

    const UnitQuaternion z(0.8, {0.0, 0.0, 0.6});
    const UnitQuaternion zz = quat_mul(z, z);
    const double sq_err = std::max(std::fabs(zz.scalar() - 0.28), norm(zz.vec() - Vec3{0.0, 0.0, 0.96}));
    rep.add("quat_mul_example", sq_err <= t, sq_err, "(0.8, 0.6 z)^2 = (0.28, 0.96 z)");
    const Mat3 expect{{0.28, -0.96, 0.0, 0.96, 0.28, 0.0, 0.0, 0.0, 1.0}};
    const double rot_err = mat_err(quat_to_rot(z).matrix(), expect);
    rep.add("rodriguez_example", rot_err <= t, rot_err);
    return rep;
}

// ---------------------------------------------------------------------------

inline Report verify_lemmas(std::size_t samples = 10000, std::size_t zero_samples = 100000, std::uint64_t seed = 11) {
    using namespace detail;
    std::mt19937_64 gen(seed);
    Report rep{"lemmas", {}};
    const Scenario sc = *builtin_scenario("test-1");
    const GainMatrices gm = build_W(sc.refs);

    double zg_err = 0, zr_err = 0, sign_err = 0;
    for (std::size_t n = 0; n < samples; ++n) {
        const UnitQuaternion q = random_attitude(gen);
        const UnitQuaternion qh = random_attitude(gen);
        const BodyMeasurements m = measure(q, qh, sc.refs);
        zg_err = std::max(zg_err, norm(z_gamma(m, sc.refs.gamma) - z_gamma_closed_form(q, qh, gm.W_gamma)));
        zr_err = std::max(zr_err, norm(z_rho(m, sc.refs) - z_rho_closed_form(q, gm.W_rho)));
        const Vec3 tau = z_gamma_closed_form(q, qh, gm.W_gamma) + z_rho_closed_form(q, gm.W_rho);
        const Vec3 tau_neg = z_gamma_closed_form(-q, -qh, gm.W_gamma) + z_rho_closed_form(-q, gm.W_rho);
        sign_err = std::max(sign_err, norm(tau - tau_neg));
    }
    rep.add("z_gamma_closed_form", zg_err < 1e-10, zg_err, "Σ γ_i S(b̂_i) b_i vs -2R̂^T(q̃0 I - S(q̃))W_γ q̃");
    rep.add("z_rho_closed_form", zr_err < 1e-10, zr_err, "Σ ρ_i S(r_i) b_i vs -2(q0 I - S(q))W_ρ q");
    rep.add("sign_immunity_closed_form", sign_err <= tol::kAlgebra, sign_err, "tau(Q, Q̂) = tau(-Q, -Q̂)");

    const Lemma2Verdict l2 = check_lemma2(sc.refs);
    const double lam_expected = 15.0 - 5.0 * std::sqrt(5.0);
    const double lam_err = std::fabs(l2.lambda_min_gamma - lam_expected);
    rep.add("reference_set_positive_definite", l2.positive_definite && lam_err <= 1e-9, lam_err,
            "lambda_min(W_gamma) = " + fmt(l2.lambda_min_gamma) + ", lambda_min(W_rho) = " + fmt(l2.lambda_min_rho));
    const ReferenceSet collinear{{{0, 0, 1}, {0, 0, 2}}, {10, 10}, {0.5, 0.5}};
    const Lemma2Verdict lc = check_lemma2(collinear);
    rep.add("collinear_set_singular", !lc.positive_definite && std::fabs(lc.lambda_min_gamma) <= 1e-9,
            std::fabs(lc.lambda_min_gamma));
    const ReferenceSet single{{{0, 0, 1}}, {10}, {0.5}};
    const Lemma2Verdict ls = check_lemma2(single);
    rep.add("single_vector_singular", !ls.positive_definite, std::fabs(ls.lambda_min_gamma));

    std::size_t pd_failures = 0;
    for (std::size_t n = 0; n < 1000; ++n) {
        ReferenceSet rs;
        std::uniform_real_distribution<double> g(0.1, 10.0);
        const std::size_t count = 2 + n % 3;
        for (std::size_t i = 0; i < count; ++i) {
            rs.r.push_back(random_vec(gen, 2.0));
            rs.gamma.push_back(g(gen));
            rs.rho.push_back(g(gen));
        }
        if (rs.satisfies_assumption1() && !check_lemma2(rs).positive_definite) ++pd_failures;
    }
    rep.add("random_sets_positive_definite", pd_failures == 0, static_cast<double>(pd_failures), "1000 random non-collinear sets");

    const EigenDecomposition eg = sym3_eigen(gm.W_gamma);
    double shared = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        const Vec3 v = eg.vectors[i];
        shared = std::max(shared, norm(gm.M_gamma * v - (gm.mu - eg.values[i]) * v));
    }
    shared = std::max(shared, mat_err(gm.M_gamma, gm.mu * Mat3::identity() - gm.W_gamma));
    rep.add("shared_eigenvectors", shared <= 1e-10, shared, "M_gamma = mu I - W_gamma");

    const Lemma3Zeros zeros = lemma3_zeros(gm.W_gamma);
    double zero_res = 0.0;
    for (const auto& [s, v] : zeros.points()) zero_res = std::max(zero_res, norm(innovation_kernel(s, v, gm.W_gamma)));
    rep.add("kernel_zero_residuals", zeros.isolated.size() == 6 && zero_res <= 1e-10, zero_res,
            std::to_string(zeros.isolated.size()) + " nontrivial isolated zeros");

    std::size_t hits = 0, outside = 0;
    double min_kernel = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < zero_samples; ++n) {
        const UnitQuaternion p = random_attitude(gen);
        const double k = norm(innovation_kernel(p.scalar(), p.vec(), gm.W_gamma));
        min_kernel = std::min(min_kernel, k);
        if (k < 1e-6) {
            ++hits;
            if (zeros.distance(p.scalar(), p.vec()) > 1e-2) ++outside;
        }
    }
    rep.add("kernel_rejection_search", outside == 0, static_cast<double>(outside),
            std::to_string(zero_samples) + " samples, " + std::to_string(hits) + " below 1e-6, smallest kernel " +
                fmt(min_kernel));

    const Triad v = precondition_refs(sc.refs.r[0], sc.refs.r[1]);
    const GainMatrices g2 = build_W(v, 10.0, 0.5);
    const double iso = std::max(mat_err(g2.W_gamma, 20.0 * Mat3::identity()), mat_err(g2.W_rho, Mat3::identity()));
    rep.add("triad_gain_matrices_isotropic", iso <= tol::kAlgebra, iso, "W_gamma = 2 gamma I, W_rho = 2 rho I");
    rep.add("triad_zero_set_whole_sphere", lemma3_zeros(g2.W_gamma).whole_sphere(), 0.0);

    ControllerConfig c2;
    c2.variant = Variant::Theorem2;
    const VectorController ctrl2(sc.refs, c2);
    double t2g = 0, t2r = 0;
    for (std::size_t n = 0; n < samples; ++n) {
        const UnitQuaternion q = random_attitude(gen);
        const UnitQuaternion qh = random_attitude(gen);
        const ControllerOutput u = ctrl2(measure(q, qh, sc.refs));
        const UnitQuaternion qt = quat_error(q, qh);
        t2g = std::max(t2g, norm(u.z_gamma - rotate_to_body(qh, (-4.0 * 10.0 * qt.scalar()) * qt.vec())));
        t2r = std::max(t2r, norm(u.z_rho - (-4.0 * 0.5 * q.scalar()) * q.vec()));
    }
    rep.add("triad_z_gamma_closed_form", t2g <= 1e-10, t2g, "z_gamma = -4 gamma R̂^T q̃0 q̃");
    rep.add("triad_z_rho_closed_form", t2r <= 1e-10, t2r, "z_rho = -4 rho q0 q");
    return rep;
}

// ---------------------------------------------------------------------------

inline Report verify_equilibria(std::size_t search_samples = 100000, std::uint64_t seed = 13) {
    using namespace detail;
    Report rep{"equilibria", {}};
    const Scenario sc = *builtin_scenario("test-1");
    const GainMatrices gm = build_W(sc.refs);
    const EquilibriumSet eq = enumerate_equilibria(gm, Variant::Theorem1);

    const bool counts = eq.points.size() == 49 && eq.count(EquilibriumLabel::Omega1) == 1 &&
                        eq.count(EquilibriumLabel::Omega2) == 6 && eq.count(EquilibriumLabel::Omega3) == 36 &&
                        eq.count(EquilibriumLabel::Omega4) == 6 && eq.families.empty();
    rep.add("enumeration_count", counts, static_cast<double>(eq.points.size()), "1 + 6 + 36 + 6 isolated points");

    double worst = 0.0;
    for (const EquilibriumPoint& p : eq.points) worst = std::max(worst, equilibrium_residual(p, gm, sc.J));
    rep.add("enumerated_residuals", worst <= 1e-9, worst, "closed-loop rate at every point, all scalar-part signs");

    ZeroSearchConfig zc;
    zc.samples = search_samples;
    zc.seed = seed;
    const ZeroSearchReport zs = search_unlisted_equilibria(gm, sc.J, eq, zc);
    rep.add("no_unlisted_equilibria", zs.pass(), zs.worst_outside_distance,
            std::to_string(zs.samples) + " samples, " + std::to_string(zs.raw_hits) + " raw hits, " +
                std::to_string(zs.refined_hits) + " refined to rest points, " +
                std::to_string(zs.raw_outside + zs.refined_outside) + " outside 1e-2 neighbourhoods");

    const Triad v = precondition_refs(sc.refs.r[0], sc.refs.r[1]);
    const GainMatrices g2 = build_W(v, 10.0, 0.5);
    const EquilibriumSet e2 = enumerate_equilibria(g2, Variant::Theorem2);
    bool structure = e2.points.size() == 1 && e2.points[0].label == EquilibriumLabel::Psi1 && e2.families.size() == 3;
    double w2 = 0.0;
    for (const EquilibriumFamily& f : e2.families) {
        for (const EquilibriumPoint& p : f.witnesses()) {
            w2 = std::max(w2, equilibrium_residual(p, g2, sc.J));
            structure = structure && f.contains(p.qt, p.q, p.omega);
        }
    }
    rep.add("triad_equilibria", structure && w2 <= 1e-9, w2, "Psi1 plus three continuum families");
    return rep;
}

// ---------------------------------------------------------------------------

inline Report verify_lyapunov(std::size_t samples = 10000, std::uint64_t seed = 17) {
    using namespace detail;
    std::mt19937_64 gen(seed);
    Report rep{"lyapunov", {}};
    const Scenario sc = *builtin_scenario("test-1");
    const GainMatrices gm = build_W(sc.refs);

    const RigidBodyState s0{sc.Q0, sc.omega0, sc.Qhat0};
    const double v0 = lyapunov_V(error_state(s0), gm, sc.J);
    rep.add("initial_value_test1", std::fabs(v0 - 7.56) <= 1e-9, std::fabs(v0 - 7.56), "V = " + fmt(v0));

    double form_err = 0, vdot_err = 0, vdot_max = -1e300, sandwich = 0, vdot2_err = 0;
    for (std::size_t n = 0; n < samples; ++n) {
        const UnitQuaternion q = random_attitude(gen);
        const UnitQuaternion qh = random_attitude(gen);
        const Vec3 w = random_in_ball(gen, 2.0);
        const RigidBodyState s{q, w, qh};
        const ErrorState chi = error_state(s);
        const BodyMeasurements m = measure(q, qh, sc.refs);
        const double vq = lyapunov_V(chi, gm, sc.J);
        const double vm = lyapunov_V_measured(m.bhat, m.b, sc.refs.r, sc.refs.gamma, sc.refs.rho, w, sc.J);
        form_err = std::max(form_err, std::fabs(vq - vm));
        const Vec3 zg = z_gamma(m, sc.refs.gamma);
        const double vd = lyapunov_Vdot(chi, gm);
        vdot_err = std::max(vdot_err, std::fabs(vd + dot(zg, zg)) / std::max(1.0, std::fabs(vd)));
        vdot_max = std::max(vdot_max, vd);
        const EigenDecomposition eg = sym3_eigen(gm.W_gamma);
        const EigenDecomposition er = sym3_eigen(gm.W_rho);
        sandwich = std::max({sandwich, 2.0 * eg.min() * dot(chi.qt, chi.qt) - vq, 2.0 * er.min() * dot(chi.q, chi.q) - vq});

        const double vd2 = lyapunov_Vdot(chi, build_W(precondition_refs(sc.refs.r[0], sc.refs.r[1]), 10.0, 0.5));
        vdot2_err = std::max(vdot2_err, std::fabs(vd2 - lyapunov_Vdot_preconditioned(chi, 10.0)));
    }
    rep.add("quaternion_vs_measurement_form", form_err <= 1e-10, form_err);
    rep.add("vdot_equals_minus_z_gamma_squared", vdot_err <= 1e-10, vdot_err, "relative");
    rep.add("vdot_non_positive", vdot_max <= tol::kVdotExact, vdot_max);
    rep.add("lower_bounds", sandwich <= 1e-12, sandwich, "V >= 2 lambda_min(W) ‖·‖²");
    rep.add("triad_vdot_formula", vdot2_err <= 1e-10, vdot2_err, "-16 gamma² ‖q̃‖²(1 - ‖q̃‖²)");

    double on_zero = 0.0;
    for (const auto& [s, v] : lemma3_zeros(gm.W_gamma).points())
        on_zero = std::max(on_zero, std::fabs(lyapunov_Vdot({v, s, {}, 1.0, {}}, gm)));
    rep.add("vdot_vanishes_on_zero_set", on_zero <= tol::kVdotExact, on_zero);

    for (const char* name : {"test-1", "test-2"}) {
        const RunResult r = run(*builtin_scenario(name));
        double fd = 0.0;
        for (std::size_t k = 1; k + 1 < r.log.size(); ++k) {
            const double slope = (r.log[k + 1].V - r.log[k - 1].V) / (r.log[k + 1].t - r.log[k - 1].t);
            fd = std::max(fd, std::fabs(slope - r.log[k].Vdot) / std::max(1.0, std::fabs(r.log[k].Vdot)));
        }
        rep.add(std::string("monotone_") + name, r.summary.max_V_increase <= tol::kVdotTrajectory,
                r.summary.max_V_increase, "largest per-step increase of V");
        rep.add(std::string("finite_difference_") + name, fd < 1e-3, fd, "central difference vs analytic dV/dt, relative");
    }

    const Phi1Certificate cert = phi1_certificate(gm, sc.J);
    const double c_expected = (1.0 - 1e-6) * 0.1 * (15.0 - 5.0 * std::sqrt(5.0));
    rep.add("phi1_constant", std::fabs(cert.c - c_expected) <= 1e-9, std::fabs(cert.c - c_expected), "c = " + fmt(cert.c));
    bool members = cert.contains({{}, 1.0, {}, 1.0, {}});
    std::size_t inner_violations = 0;
    for (std::size_t n = 0; n < samples; ++n) {
        ErrorState chi = random_error_state(gen);
        const UnitQuaternion unit_qt = UnitQuaternion::normalized({0.0, random_vec(gen)});
        if (cert.contains({unit_qt.vec(), 0.0, chi.q, chi.q0, chi.omega})) members = false;
        chi.qt *= 0.2;
        chi.q *= 0.2;
        chi.omega *= 0.2;
        if (cert.contains_inner(chi) && !cert.contains(chi)) ++inner_violations;
    }
    rep.add("phi1_membership", members && inner_violations == 0, static_cast<double>(inner_violations),
            "origin inside, ‖q̃‖ = 1 outside, inner set contained");
    return rep;
}

// ---------------------------------------------------------------------------

inline Report verify_instability(double epsilon = 1e-4) {
    using namespace detail;
    Report rep{"instability", {}};
    const Scenario sc = *builtin_scenario("test-1");
    const GainMatrices gm = build_W(sc.refs);
    const EquilibriumSet eq = enumerate_equilibria(gm, Variant::Theorem1);
    const ProbeSetup setup{sc.J, sc.refs, sc.controller};

    const auto probe_all = [&](const std::vector<EquilibriumPoint>& points, const ProbeSetup& ps, const std::string& tag) {
        for (const EquilibriumPoint& p : points) {
            if (equilibrium_class(p.label) == 1) continue;
            const ProbeResult r = instability_probe(p, epsilon, ps);
            std::ostringstream name;
            name << tag << to_string(p.label) << " qt=" << p.qt << " q=" << p.q;
            rep.add(name.str(), r.pass(), r.max_distance,
                    "escape at t = " + fmt(r.escape_time) + " s, V " + fmt(r.V_equilibrium) + " -> " + fmt(r.V_final) +
                        ", final ‖chi‖ = " + fmt(r.final_norm) + (r.final_in_basin ? ", in basin" : ", outside basin"));
        }
    };
    probe_all(eq.points, setup, "");

    ProbeSetup s2 = setup;
    s2.controller.variant = Variant::Theorem2;
    const GainMatrices g2 = VectorController(sc.refs, s2.controller).gains();
    const EquilibriumSet e2 = enumerate_equilibria(g2, Variant::Theorem2);
    std::vector<EquilibriumPoint> witnesses;
    for (const EquilibriumFamily& f : e2.families) {
        const auto w = f.witnesses();
        // Positive basis witnesses and the diagonal one.
        for (std::size_t i = 0; i < w.size(); i += 2) witnesses.push_back(w[i]);
    }
    probe_all(witnesses, s2, "triad ");
    return rep;
}

// ---------------------------------------------------------------------------

inline Report verify_regression() {
    using namespace detail;
    Report rep{"regression", {}};
    for (const char* name : {"test-1", "test-2", "triad-test-1", "triad-test-2"}) {
        const Scenario sc = *builtin_scenario(name);
        const RunResult r = run(sc);
        const RunSummary& s = r.summary;
        const int expected = sc.Q0.scalar() > 0.0 ? 1 : -1;
        rep.add(std::string(name) + "_converges", s.converged && s.converged_to == expected,
                std::max(s.final_q_norm, s.final_omega_norm),
                "q0 = " + fmt(s.final_q0) + ", ‖q‖ = " + fmt(s.final_q_norm) + ", ‖omega‖ = " + fmt(s.final_omega_norm));
        if (expected < 0)
            rep.add(std::string(name) + "_no_unwinding", s.max_q0 <= 0.5, s.max_q0, "max q0(t)");
        rep.add(std::string(name) + "_torque_bound", s.max_tau_norm <= s.torque_bound + 1e-9, s.max_tau_norm,
                "bound " + fmt(s.torque_bound));
        rep.add(std::string(name) + "_row_count", s.rows == sc.sim.steps() + 1, static_cast<double>(s.rows));

        Scenario flipped = sc;
        flipped.Q0 = -sc.Q0;
        flipped.Qhat0 = -sc.Qhat0;
        const RunResult rf = run(flipped);
        double diff = 0.0;
        for (std::size_t k = 0; k < r.log.size(); ++k) diff = std::max(diff, norm(r.log[k].tau - rf.log[k].tau));
        rep.add(std::string(name) + "_sign_immunity", rf.log.size() == r.log.size() && diff <= 1e-12, diff);
    }
    return rep;
}

/// Dispatches on the suite name; throws InvalidArgument for unknown names.
inline Report verify(std::string_view suite) {
    if (suite == "algebra") return verify_algebra();
    if (suite == "lemmas") return verify_lemmas();
    if (suite == "equilibria") return verify_equilibria();
    if (suite == "lyapunov") return verify_lyapunov();
    if (suite == "instability") return verify_instability();
    if (suite == "regression") return verify_regression();
    throw Error(ErrorKind::InvalidArgument, "unknown suite '" + std::string(suite) + "'");
}

} // namespace vfatt
