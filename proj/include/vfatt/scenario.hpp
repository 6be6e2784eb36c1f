#pragma once

// Scenario description, JSON loading, simulation runs and their CSV/JSON output.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vfatt/analysis.hpp"
#include "vfatt/controller.hpp"
#include "vfatt/error.hpp"
#include "vfatt/measurements.hpp"
#include "vfatt/plant.hpp"
#include "vfatt/so3.hpp"

namespace vfatt {

// Desk-scale stand-ins for "has converged to ±identity at rest".
inline constexpr double kConvergedScalar = 0.999;
inline constexpr double kConvergedVector = 1e-3;

struct Scenario {
    std::string name;
    InertiaMatrix J;
    ReferenceSet refs;
    ControllerConfig controller;
    UnitQuaternion Q0;
    Vec3 omega0;
    UnitQuaternion Qhat0;
    SimConfig sim;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;

    void validate() const {
        refs.validate();
        controller.validate();
        sim.validate();
        if (!is_finite(omega0)) throw Error(ErrorKind::ValidationError, "omega0: not finite");
        if (!(noise_sigma >= 0.0)) throw Error(ErrorKind::ValidationError, "noise_sigma: must be >= 0");
        if (controller.variant == Variant::Theorem2 && !non_collinear(refs.r[0], refs.r[1]))
            throw Error(ErrorKind::ValidationError, "refs.r: the preconditioned variant needs r[0], r[1] non-collinear");
    }

    VectorController make_controller() const { return VectorController(refs, controller); }
    SensorModel make_sensor() const { return SensorModel{refs, noise_sigma, seed}; }
};

// ---------------------------------------------------------------------------
// Built-in scenarios
// ---------------------------------------------------------------------------

/// J = diag(0.5, 0.5, 1), r1 = [0, 0, 1], r2 = [1, 0, 1], gamma_i = 10, rho_i = 0.5,
/// omega(0) = 0, Q̂(0) = identity, dt = 1e-3 s, t_end = 30 s.
inline Scenario reference_scenario(std::string name, const UnitQuaternion& q0, Variant variant = Variant::Theorem1) {
    Scenario s;
    s.name = std::move(name);
    s.J = InertiaMatrix::diag(0.5, 0.5, 1.0);
    s.refs = ReferenceSet::uniform({{0.0, 0.0, 1.0}, {1.0, 0.0, 1.0}}, 10.0, 0.5);
    s.controller.variant = variant;
    s.controller.gamma = 10.0;
    s.controller.rho = 0.5;
    s.Q0 = q0;
    s.Qhat0 = UnitQuaternion::identity();
    s.sim = SimConfig{1e-3, 30.0, 1};
    return s;
}

struct BuiltinInfo {
    std::string name;
    std::string description;
};

inline std::vector<BuiltinInfo> builtin_scenarios() {
    return {
        {"test-1", "Q(0) = (0.8, 0, 0, 0.6); converges to q0 = +1"},
        {"test-2", "Q(0) = (-0.8, 0, 0, 0.6); converges to q0 = -1 without unwinding"},
        {"triad-test-1", "preconditioned triads, Q(0) = (0.8, 0, 0, 0.6)"},
        {"triad-test-2", "preconditioned triads, Q(0) = (-0.8, 0, 0, 0.6)"},
    };
}

inline std::optional<Scenario> builtin_scenario(const std::string& name) {
    const UnitQuaternion plus(0.8, {0.0, 0.0, 0.6});
    const UnitQuaternion minus(-0.8, {0.0, 0.0, 0.6});
    if (name == "test-1") return reference_scenario(name, plus);
    if (name == "test-2") return reference_scenario(name, minus);
    if (name == "triad-test-1") return reference_scenario(name, plus, Variant::Theorem2);
    if (name == "triad-test-2") return reference_scenario(name, minus, Variant::Theorem2);
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace detail {

using nlohmann::json;

[[noreturn]] inline void invalid(const std::string& path, const std::string& msg) {
    throw Error(ErrorKind::ValidationError, path + ": " + msg);
}

inline double number(const json& j, const std::string& path) {
    if (!j.is_number()) invalid(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) invalid(path, "not finite");
    return v;
}

inline Vec3 vec3(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) invalid(path, "expected an array of 3 numbers");
    return {number(j[0], path + "[0]"), number(j[1], path + "[1]"), number(j[2], path + "[2]")};
}

// Accepts [[a,b,c],[d,e,f],[g,h,i]] or the row-major flat [a,...,i].
inline Mat3 mat3(const json& j, const std::string& path) {
    Mat3 m;
    if (j.is_array() && j.size() == 9) {
        for (std::size_t i = 0; i < 9; ++i) m.m[i] = number(j[i], path + "[" + std::to_string(i) + "]");
        return m;
    }
    if (j.is_array() && j.size() == 3) {
        for (int r = 0; r < 3; ++r) {
            const Vec3 row = vec3(j[static_cast<std::size_t>(r)], path + "[" + std::to_string(r) + "]");
            for (int c = 0; c < 3; ++c) m(r, c) = row[c];
        }
        return m;
    }
    invalid(path, "expected a 3x3 matrix (nested rows or 9 row-major numbers)");
}

inline UnitQuaternion quaternion(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 4) invalid(path, "expected [q0, q1, q2, q3]");
    const Quat4 raw{number(j[0], path + "[0]"),
                    {number(j[1], path + "[1]"), number(j[2], path + "[2]"), number(j[3], path + "[3]")}};
    try {
        return UnitQuaternion::normalized(raw);
    } catch (const Error&) {
        invalid(path, "quaternion norm is too small to normalize");
    }
}

inline std::vector<double> numbers(const json& j, const std::string& path) {
    if (!j.is_array()) invalid(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline const json* find(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

inline const json& require(const json& obj, const char* key, const std::string& path) {
    const json* v = find(obj, key);
    if (!v) invalid(path.empty() ? key : path + "." + key, "missing required field");
    return *v;
}

inline std::string child(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }

inline json to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

inline json to_json(const Mat3& m) {
    return json::array({to_json(m.row(0)), to_json(m.row(1)), to_json(m.row(2))});
}

inline json to_json(const UnitQuaternion& q) { return json::array({q.scalar(), q.vec().x, q.vec().y, q.vec().z}); }

} // namespace detail

/// Builds and validates a scenario; errors carry the offending field path.
inline Scenario scenario_from_json(const nlohmann::json& j, const std::string& fallback_name = "scenario") {
    using namespace detail;
    if (!j.is_object()) invalid("$", "expected a JSON object");
    Scenario s;

    const json* name = find(j, "name");
    if (name && !name->is_string()) invalid("name", "expected a string");
    s.name = name ? name->get<std::string>() : fallback_name;

    try {
        s.J = InertiaMatrix(mat3(require(j, "J", ""), "J"));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ValidationError) throw;
        invalid("J", e.what());
    }

    const json& refs = require(j, "refs", "");
    if (!refs.is_object()) invalid("refs", "expected an object");
    const json& r = require(refs, "r", "refs");
    if (!r.is_array()) invalid("refs.r", "expected an array of vectors");
    for (std::size_t i = 0; i < r.size(); ++i) s.refs.r.push_back(vec3(r[i], "refs.r[" + std::to_string(i) + "]"));
    s.refs.gamma = numbers(require(refs, "gamma", "refs"), "refs.gamma");
    s.refs.rho = numbers(require(refs, "rho", "refs"), "refs.rho");
    if (s.refs.r.size() < 2) invalid("refs.r", "need at least two reference vectors");
    if (s.refs.gamma.size() != s.refs.r.size()) invalid("refs.gamma", "length must match refs.r");
    if (s.refs.rho.size() != s.refs.r.size()) invalid("refs.rho", "length must match refs.r");
    for (std::size_t i = 0; i < s.refs.size(); ++i) {
        if (!(s.refs.gamma[i] > 0.0)) invalid("refs.gamma[" + std::to_string(i) + "]", "must be > 0");
        if (!(s.refs.rho[i] > 0.0)) invalid("refs.rho[" + std::to_string(i) + "]", "must be > 0");
    }
    if (!s.refs.satisfies_assumption1()) invalid("refs.r", "at least two vectors must be non-collinear");

    if (const json* c = find(j, "controller")) {
        if (!c->is_object()) invalid("controller", "expected an object");
        if (const json* v = find(*c, "variant")) {
            const std::string name_v = v->is_string() ? v->get<std::string>() : "";
            if (name_v == "theorem1") s.controller.variant = Variant::Theorem1;
            else if (name_v == "theorem2") s.controller.variant = Variant::Theorem2;
            else invalid("controller.variant", "expected \"theorem1\" or \"theorem2\"");
        }
        if (const json* g = find(*c, "gamma")) s.controller.gamma = number(*g, "controller.gamma");
        if (const json* p = find(*c, "rho")) s.controller.rho = number(*p, "controller.rho");
        if (!(s.controller.gamma > 0.0)) invalid("controller.gamma", "must be > 0");
        if (!(s.controller.rho > 0.0)) invalid("controller.rho", "must be > 0");
        if (const json* d = find(*c, "desired_attitude")) {
            try {
                s.controller.desired_attitude = RotationMatrix::from_matrix(mat3(*d, "controller.desired_attitude"));
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::ValidationError) throw;
                invalid("controller.desired_attitude", "not a proper rotation matrix");
            }
        }
    }

    s.Q0 = quaternion(require(j, "Q0", ""), "Q0");
    if (const json* w = find(j, "omega0")) s.omega0 = vec3(*w, "omega0");
    if (const json* qh = find(j, "Qhat0")) s.Qhat0 = quaternion(*qh, "Qhat0");

    if (const json* sim = find(j, "sim")) {
        if (!sim->is_object()) invalid("sim", "expected an object");
        if (const json* v = find(*sim, "dt")) s.sim.dt = number(*v, "sim.dt");
        if (const json* v = find(*sim, "t_end")) s.sim.t_end = number(*v, "sim.t_end");
        if (const json* v = find(*sim, "renorm_every")) {
            if (!v->is_number_integer() || v->get<std::int64_t>() < 1) invalid("sim.renorm_every", "must be an integer >= 1");
            s.sim.renorm_every = v->get<std::size_t>();
        }
        if (!(s.sim.dt > 0.0)) invalid("sim.dt", "must be > 0");
        if (!(s.sim.t_end >= 0.0)) invalid("sim.t_end", "must be >= 0");
    }

    if (const json* v = find(j, "noise_sigma")) s.noise_sigma = number(*v, "noise_sigma");
    if (!(s.noise_sigma >= 0.0)) invalid("noise_sigma", "must be >= 0");
    if (const json* v = find(j, "seed")) {
        if (!v->is_number_integer() || v->get<std::int64_t>() < 0) invalid("seed", "must be a non-negative integer");
        s.seed = v->get<std::uint64_t>();
    }

    try {
        s.validate();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ValidationError) throw;
        throw Error(ErrorKind::ValidationError, e.what());
    }
    return s;
}

inline nlohmann::json scenario_to_json(const Scenario& s) {
    using detail::to_json;
    nlohmann::json refs;
    refs["r"] = nlohmann::json::array();
    for (const Vec3& r : s.refs.r) refs["r"].push_back(to_json(r));
    refs["gamma"] = s.refs.gamma;
    refs["rho"] = s.refs.rho;
    return {
        {"name", s.name},
        {"J", to_json(s.J.matrix())},
        {"refs", refs},
        {"controller",
         {{"variant", std::string(to_string(s.controller.variant))},
          {"gamma", s.controller.gamma},
          {"rho", s.controller.rho},
          {"desired_attitude", to_json(s.controller.desired_attitude.matrix())}}},
        {"Q0", to_json(s.Q0)},
        {"omega0", to_json(s.omega0)},
        {"Qhat0", to_json(s.Qhat0)},
        {"sim", {{"dt", s.sim.dt}, {"t_end", s.sim.t_end}, {"renorm_every", s.sim.renorm_every}}},
        {"noise_sigma", s.noise_sigma},
        {"seed", s.seed},
    };
}

/// A built-in name or a path to a JSON scenario file.
inline Scenario load_scenario(const std::string& name_or_path) {
    if (auto s = builtin_scenario(name_or_path)) return *s;
    std::ifstream in(name_or_path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open scenario '" + name_or_path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, name_or_path + ": " + e.what());
    }
    return scenario_from_json(j, std::filesystem::path(name_or_path).stem().string());
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

struct TrajectoryRow {
    double t = 0.0;
    Quat4 q;
    Quat4 qhat;
    Vec3 omega;
    Vec3 tau;
    Vec3 beta;
    double V = 0.0;
    double Vdot = 0.0;
    double q_norm_error = 0.0;
    double qhat_norm_error = 0.0;
};

using TrajectoryLog = std::vector<TrajectoryRow>;

struct RunSummary {
    std::size_t rows = 0;
    double final_q0 = 0.0;
    double final_q_norm = 0.0;
    double final_omega_norm = 0.0;
    bool converged = false;
    int converged_to = 0; // +1 or -1 when converged
    double max_q0 = -1.0;
    double min_q0 = 1.0;
    double max_tau_norm = 0.0;
    double torque_bound = 0.0;
    double max_V_increase = 0.0; // max over steps of V(k+1) - V(k)
    double V_initial = 0.0;
    double V_final = 0.0;
    double max_norm_drift = 0.0;
    std::optional<std::string> error; // set when the run stopped early
};

struct RunResult {
    TrajectoryLog log;
    RunSummary summary;
};

namespace detail {

// Lyapunov value and its analytic rate from noise-free measurements, valid for
// either variant and any constant desired attitude.
struct LyapunovProbe {
    double V = 0.0;
    double Vdot = 0.0;
};

inline LyapunovProbe lyapunov_from_measurements(const RigidBodyState& s, const VectorController& ctrl,
                                                const InertiaMatrix& j) {
    const ReferenceSet& refs = ctrl.refs();
    const ControllerConfig& cfg = ctrl.config();
    const BodyMeasurements clean = measure(s.q, s.qhat, refs);
    const ControllerOutput u = ctrl(clean);
    LyapunovProbe out;
    out.Vdot = -dot(u.z_gamma, u.z_gamma);
    if (cfg.variant == Variant::Theorem1) {
        out.V = lyapunov_V_measured(clean.bhat, clean.b, refs.r, refs.gamma, refs.rho, s.omega, j, cfg.desired_attitude);
    } else {
        const Triad uu = precondition_body(clean.b[0], clean.b[1], refs.r[0], refs.r[1]);
        const Triad uh = precondition_body(clean.bhat[0], clean.bhat[1], refs.r[0], refs.r[1]);
        const std::array<double, 3> g{cfg.gamma, cfg.gamma, cfg.gamma};
        const std::array<double, 3> p{cfg.rho, cfg.rho, cfg.rho};
        out.V = lyapunov_V_measured(uh, uu, ctrl.triad(), g, p, s.omega, j, cfg.desired_attitude);
    }
    return out;
}

} // namespace detail

/// Integrates the scenario and logs floor(t_end/dt) + 1 rows. A numerical
/// blow-up stops the run, keeps the rows logged so far, and sets summary.error.
inline RunResult run(const Scenario& sc) {
    sc.validate();
    const VectorController ctrl = sc.make_controller();
    ClosedLoop loop(sc.J, sc.make_sensor(), ctrl, sc.sim);
    RunResult res;
    RunSummary& sum = res.summary;
    sum.torque_bound = torque_bound(sc.controller, sc.refs);

    RigidBodyState s{sc.Q0, sc.omega0, sc.Qhat0};
    const std::size_t n = sc.sim.steps();
    res.log.reserve(n + 1);
    double prev_V = 0.0;
    for (std::size_t k = 0;; ++k) {
        const ControllerOutput u = loop.output(s);
        const detail::LyapunovProbe lp = detail::lyapunov_from_measurements(s, ctrl, sc.J);
        TrajectoryRow row;
        row.t = static_cast<double>(k) * sc.sim.dt;
        row.q = s.q.raw();
        row.qhat = s.qhat.raw();
        row.omega = s.omega;
        row.tau = u.tau;
        row.beta = u.beta;
        row.V = lp.V;
        row.Vdot = lp.Vdot;
        row.q_norm_error = s.q.norm_error();
        row.qhat_norm_error = s.qhat.norm_error();
        res.log.push_back(row);

        sum.max_q0 = std::max(sum.max_q0, row.q.s);
        sum.min_q0 = std::min(sum.min_q0, row.q.s);
        sum.max_tau_norm = std::max(sum.max_tau_norm, norm(row.tau));
        sum.max_norm_drift =
            std::max({sum.max_norm_drift, std::fabs(row.q_norm_error), std::fabs(row.qhat_norm_error)});
        if (k == 0) sum.V_initial = row.V;
        else sum.max_V_increase = std::max(sum.max_V_increase, row.V - prev_V);
        prev_V = row.V;

        if (k == n) break;
        try {
            s = loop.advance(s);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NumericalBlowUp) throw;
            sum.error = std::string(e.what()) + " at t = " + std::to_string(row.t);
            break;
        }
    }

    const TrajectoryRow& last = res.log.back();
    sum.rows = res.log.size();
    sum.final_q0 = last.q.s;
    sum.final_q_norm = norm(last.q.v);
    sum.final_omega_norm = norm(last.omega);
    sum.V_final = last.V;
    sum.converged = !sum.error && std::fabs(sum.final_q0) > kConvergedScalar && sum.final_q_norm < kConvergedVector &&
                    sum.final_omega_norm < kConvergedVector;
    sum.converged_to = sum.converged ? (sum.final_q0 > 0.0 ? 1 : -1) : 0;
    return res;
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

inline constexpr const char* kCsvHeader =
    "t,q0,q1,q2,q3,qh0,qh1,qh2,qh3,wx,wy,wz,taux,tauy,tauz,bx,by,bz,V,Vdot,qnormerr,qhnormerr";

inline void write_csv(const TrajectoryLog& log, std::ostream& out) {
    out << kCsvHeader << '\n';
    char buf[64];
    const auto put = [&](double v, bool last = false) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf << (last ? '\n' : ',');
    };
    for (const TrajectoryRow& r : log) {
        put(r.t);
        put(r.q.s), put(r.q.v.x), put(r.q.v.y), put(r.q.v.z);
        put(r.qhat.s), put(r.qhat.v.x), put(r.qhat.v.y), put(r.qhat.v.z);
        put(r.omega.x), put(r.omega.y), put(r.omega.z);
        put(r.tau.x), put(r.tau.y), put(r.tau.z);
        put(r.beta.x), put(r.beta.y), put(r.beta.z);
        put(r.V), put(r.Vdot), put(r.q_norm_error), put(r.qhat_norm_error, true);
    }
}

inline void write_csv(const TrajectoryLog& log, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
    write_csv(log, out);
    if (!out) throw Error(ErrorKind::IoError, "failed writing '" + path + "'");
}

struct Check {
    std::string name;
    bool pass = false;
    double residual = 0.0;
    std::string detail;
};

struct Report {
    std::string suite;
    std::vector<Check> checks;

    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }

    void add(std::string name, bool pass, double residual, std::string detail = {}) {
        checks.push_back({std::move(name), pass, residual, std::move(detail)});
    }
};

inline nlohmann::json report_to_json(const Report& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const Check& c : r.checks) {
        // JSON has no NaN/inf; non-finite residuals are written as null.
        nlohmann::json residual = std::isfinite(c.residual) ? nlohmann::json(c.residual) : nlohmann::json(nullptr);
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"residual", residual}, {"detail", c.detail}});
    }
    return {{"suite", r.suite}, {"checks", checks}};
}

inline void write_report(const Report& r, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
    out << report_to_json(r).dump(2) << '\n';
    if (!out) throw Error(ErrorKind::IoError, "failed writing '" + path + "'");
}

} // namespace vfatt
