// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "oracle.hpp"
#include "vfatt/analysis.hpp"
#include "vfatt/scenario.hpp"

using namespace vfatt;

namespace {

int failures = 0;

void report(int id, const char* title, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d  %-34s %s\n", pass ? "PASS" : "FAIL", id, title, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

const Scenario kTest1 = *builtin_scenario("test-1");
const Scenario kTest2 = *builtin_scenario("test-2");

void innovation_closed_forms() {
    Stopwatch sw;
    const GainMatrices gm = build_W(kTest1.refs);
    std::mt19937_64 gen(2024);
    double eg = 0.0, er = 0.0;
    for (int n = 0; n < 10000; ++n) {
        const UnitQuaternion q = oracle::random_quaternion(gen);
        const UnitQuaternion qh = oracle::random_quaternion(gen);
        const BodyMeasurements m = measure(q, qh, kTest1.refs);
        eg = std::max(eg, norm(z_gamma(m, kTest1.refs.gamma) - z_gamma_closed_form(q, qh, gm.W_gamma)));
        er = std::max(er, norm(z_rho(m, kTest1.refs) - z_rho_closed_form(q, gm.W_rho)));
    }
    const double t = sw.seconds();
    report(1, "innovation closed forms", eg < 1e-10 && er < 1e-10 && t < 5.0,
           fmt("10^4 pairs, max err z_gamma %.2e, z_rho %.2e, %.2f s", eg, er, t));
}

void positive_definiteness() {
    const Lemma2Verdict v = check_lemma2(kTest1.refs);
    const double expect = 15.0 - 5.0 * std::sqrt(5.0);
    const Lemma2Verdict c = check_lemma2({{{0, 0, 1}, {0, 0, 2}}, {10, 10}, {0.5, 0.5}});
    const bool pass = v.positive_definite && std::fabs(v.lambda_min_gamma - expect) <= 1e-9 && !c.positive_definite &&
                      std::fabs(c.lambda_min_gamma) <= 1e-9;
    report(2, "gain matrices positive definite", pass,
           fmt("lambda_min(W_gamma) = %.12f (expected %.12f), collinear lambda_min = %.1e", v.lambda_min_gamma, expect,
               c.lambda_min_gamma));
}

void equilibria() {
    Stopwatch sw;
    const GainMatrices gm = build_W(kTest1.refs);
    const EquilibriumSet eq = enumerate_equilibria(gm, Variant::Theorem1);
    double worst = 0.0;
    for (const EquilibriumPoint& p : eq.points) worst = std::max(worst, equilibrium_residual(p, gm, kTest1.J));
    ZeroSearchConfig cfg;
    cfg.samples = 100000;
    const ZeroSearchReport zs = search_unlisted_equilibria(gm, kTest1.J, eq, cfg);
    const double t = sw.seconds();
    report(3, "equilibrium enumeration", eq.points.size() == 49 && eq.families.empty() && worst <= 1e-9 && zs.pass() && t < 30.0,
           fmt("%zu points, max residual %.1e, search: %zu samples, %zu refined zeros, %zu unlisted, %.1f s",
               eq.points.size(), worst, zs.samples, zs.refined_hits, zs.raw_outside + zs.refined_outside, t));
}

void lyapunov_decrease() {
    const RigidBodyState s0{kTest1.Q0, kTest1.omega0, kTest1.Qhat0};
    const double v0 = lyapunov_V(error_state(s0), build_W(kTest1.refs), kTest1.J);
    double worst_inc = 0.0, worst_fd = 0.0;
    for (const Scenario* sc : {&kTest1, &kTest2}) {
        const RunResult r = run(*sc);
        worst_inc = std::max(worst_inc, r.summary.max_V_increase);
        for (std::size_t k = 1; k + 1 < r.log.size(); ++k) {
            const double slope = (r.log[k + 1].V - r.log[k - 1].V) / (r.log[k + 1].t - r.log[k - 1].t);
            worst_fd = std::max(worst_fd, std::fabs(slope - r.log[k].Vdot) / std::max(1.0, std::fabs(r.log[k].Vdot)));
        }
    }
    report(4, "Lyapunov decrease", worst_inc <= 1e-7 && worst_fd < 1e-3 && std::fabs(v0 - 7.56) <= 1e-9,
           fmt("V(0) = %.15g, max step increase %.1e, finite-difference mismatch %.1e", v0, worst_inc, worst_fd));
}

bool converged(const RunSummary& s) {
    return s.converged && std::fabs(s.final_q0) > 0.999 && s.final_q_norm < 1e-3 && s.final_omega_norm < 1e-3;
}

void regression_one() {
    Stopwatch sw;
    const RunSummary s = run(kTest1).summary;
    const double t = sw.seconds();
    report(5, "Test 1 convergence", converged(s) && s.converged_to == 1 && t < 2.0,
           fmt("q0 = %.9f, |q| = %.1e, |omega| = %.1e, %.2f s", s.final_q0, s.final_q_norm, s.final_omega_norm, t));
}

void regression_two() {
    const RunSummary s = run(kTest2).summary;
    report(6, "Test 2 without unwinding", converged(s) && s.converged_to == -1 && s.max_q0 <= 0.5,
           fmt("q0 = %.9f, |q| = %.1e, |omega| = %.1e, max q0(t) = %.3f", s.final_q0, s.final_q_norm,
               s.final_omega_norm, s.max_q0));
}

void instability() {
    const GainMatrices gm = build_W(kTest1.refs);
    const EquilibriumSet eq = enumerate_equilibria(gm, Variant::Theorem1);
    const ProbeSetup setup{kTest1.J, kTest1.refs, kTest1.controller};
    std::size_t probed = 0, passed = 0;
    double slowest = 0.0;
    for (const EquilibriumPoint& p : eq.points) {
        if (equilibrium_class(p.label) == 1) continue;
        ++probed;
        const ProbeResult r = instability_probe(p, 1e-4, setup);
        if (r.pass() && r.escape_time <= 60.0) ++passed;
        if (r.escaped) slowest = std::max(slowest, r.escape_time);
    }
    report(7, "instability probes", probed == 48 && passed == probed,
           fmt("%zu/%zu saddles escaped and ended in the origin's basin, slowest escape %.2f s", passed, probed, slowest));
}

void triad_variant() {
    ControllerConfig cfg;
    cfg.variant = Variant::Theorem2;
    const VectorController ctrl(kTest1.refs, cfg);
    const bool exact = ctrl.gains().W_gamma == 2.0 * cfg.gamma * Mat3::identity();
    std::mt19937_64 gen(8);
    double worst = 0.0;
    for (int n = 0; n < 10000; ++n) {
        const UnitQuaternion q = oracle::random_quaternion(gen);
        const UnitQuaternion qh = oracle::random_quaternion(gen);
        const ControllerOutput u = ctrl(measure(q, qh, kTest1.refs));
        const Vec3 qt = quat_error(q, qh).vec();
        const double n2 = dot(qt, qt);
        const double formula = -16.0 * cfg.gamma * cfg.gamma * n2 * (1.0 - n2);
        worst = std::max(worst, std::fabs(-dot(u.z_gamma, u.z_gamma) - formula));
    }
    const RunSummary a = run(*builtin_scenario("triad-test-1")).summary;
    const RunSummary b = run(*builtin_scenario("triad-test-2")).summary;
    const bool conv = converged(a) && a.converged_to == 1 && converged(b) && b.converged_to == -1 && b.max_q0 <= 0.5;
    report(8, "preconditioned triads", exact && worst <= 1e-10 && conv,
           fmt("W_gamma == 2 gamma I: %s, Vdot formula err %.1e, q0 -> %.6f / %.6f, max q0 %.3f", exact ? "yes" : "no",
               worst, a.final_q0, b.final_q0, b.max_q0));
}

void torque_bound_holds() {
    double worst = 0.0;
    for (const Scenario* sc : {&kTest1, &kTest2}) worst = std::max(worst, run(*sc).summary.max_tau_norm);
    const double bound = torque_bound(kTest1.controller, kTest1.refs);
    report(9, "torque bound", bound == 31.5 && worst <= bound, fmt("max |tau| = %.6f <= %.1f", worst, bound));
}

void sign_immunity() {
    double worst = 0.0;
    bool same_length = true;
    for (const Scenario* sc : {&kTest1, &kTest2}) {
        Scenario flipped = *sc;
        flipped.Q0 = -sc->Q0;
        flipped.Qhat0 = -sc->Qhat0;
        const RunResult a = run(*sc);
        const RunResult b = run(flipped);
        same_length = same_length && a.log.size() == b.log.size();
        for (std::size_t k = 0; k < std::min(a.log.size(), b.log.size()); ++k)
            worst = std::max(worst, norm(a.log[k].tau - b.log[k].tau));
    }
    report(10, "sign immunity", same_length && worst <= 1e-12, fmt("max pointwise |tau - tau'| = %.1e", worst));
}

} // namespace

int main() {
    try {
        innovation_closed_forms();
        positive_definiteness();
        equilibria();
        lyapunov_decrease();
        regression_one();
        regression_two();
        instability();
        triad_variant();
        torque_bound_holds();
        sign_immunity();
    } catch (const std::exception& e) {
        std::printf("[FAIL] aborted: %s\n", e.what());
        return 1;
    }
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
