#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "vfatt/scenario.hpp"

using namespace vfatt;
using nlohmann::json;

namespace {

std::string csv_of(const TrajectoryLog& log) {
    std::ostringstream os;
    write_csv(log, os);
    return os.str();
}

Scenario short_run(const std::string& name, double t_end) {
    Scenario s = *builtin_scenario(name);
    s.sim.t_end = t_end;
    return s;
}

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::InvalidArgument;
}

json minimal() {
    return json::parse(R"({
        "J": [[0.5,0,0],[0,0.5,0],[0,0,1]],
        "refs": {"r": [[0,0,1],[1,0,1]], "gamma": [10,10], "rho": [0.5,0.5]},
        "Q0": [0.8, 0, 0, 0.6]
    })");
}

} // namespace

TEST(Builtins, ReferenceParameters) {
    const Scenario s = load_scenario("test-1");
    EXPECT_EQ(s.Q0, UnitQuaternion(0.8, {0, 0, 0.6}));
    EXPECT_EQ(s.omega0, Vec3{});
    EXPECT_EQ(s.Qhat0, UnitQuaternion::identity());
    EXPECT_EQ(s.J.matrix(), Mat3::diag(0.5, 0.5, 1.0));
    ASSERT_EQ(s.refs.size(), 2u);
    EXPECT_EQ(s.refs.r[0], (Vec3{0, 0, 1}));
    EXPECT_EQ(s.refs.r[1], (Vec3{1, 0, 1}));
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(s.refs.gamma[i], 10.0);
        EXPECT_EQ(s.refs.rho[i], 0.5);
    }
    EXPECT_EQ(s.sim.dt, 1e-3);
    EXPECT_EQ(s.sim.t_end, 30.0);
    EXPECT_EQ(load_scenario("test-2").Q0, UnitQuaternion(-0.8, {0, 0, 0.6}));
    EXPECT_EQ(load_scenario("triad-test-1").controller.variant, Variant::Theorem2);
    EXPECT_EQ(builtin_scenarios().size(), 4u);
    EXPECT_FALSE(builtin_scenario("nope").has_value());
}

TEST(Json, MinimalDocumentUsesDefaults) {
    const Scenario s = scenario_from_json(minimal(), "fallback");
    EXPECT_EQ(s.name, "fallback");
    EXPECT_EQ(s.controller.variant, Variant::Theorem1);
    EXPECT_EQ(s.Qhat0, UnitQuaternion::identity());
    EXPECT_EQ(s.sim.steps(), 30000u);
}

TEST(Json, RoundTrip) {
    Scenario s = *builtin_scenario("triad-test-2");
    s.noise_sigma = 0.01;
    s.seed = 77;
    s.omega0 = {0.1, -0.2, 0.3};
    const Scenario t = scenario_from_json(scenario_to_json(s));
    EXPECT_EQ(t.name, s.name);
    EXPECT_EQ(t.Q0, s.Q0);
    EXPECT_EQ(t.omega0, s.omega0);
    EXPECT_EQ(t.controller.variant, s.controller.variant);
    EXPECT_EQ(t.noise_sigma, s.noise_sigma);
    EXPECT_EQ(t.seed, s.seed);
    EXPECT_EQ(t.J.matrix(), s.J.matrix());
    EXPECT_EQ(scenario_to_json(t), scenario_to_json(s));
}

TEST(Json, ValidationErrorsNameTheField) {
    const auto expect_field = [](json j, const std::string& field) {
        try {
            (void)scenario_from_json(j);
            ADD_FAILURE() << "accepted invalid " << field;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::ValidationError) << field;
            EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
        }
    };
    json j = minimal();
    j["refs"]["gamma"] = {-1, 10};
    expect_field(j, "refs.gamma[0]");
    j = minimal();
    j["controller"] = {{"gamma", -1}};
    expect_field(j, "controller.gamma");
    j = minimal();
    j["refs"]["r"] = {{0, 0, 1}, {0, 0, 2}};
    expect_field(j, "refs.r");
    j = minimal();
    j["J"] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 0}};
    expect_field(j, "J");
    j = minimal();
    j.erase("Q0");
    expect_field(j, "Q0");
    j = minimal();
    j["Q0"] = {0, 0, 0, 0};
    expect_field(j, "Q0");
    j = minimal();
    j["sim"] = {{"dt", 0}};
    expect_field(j, "sim.dt");
    j = minimal();
    j["controller"] = {{"variant", "theorem3"}};
    expect_field(j, "controller.variant");
    j = minimal();
    j["noise_sigma"] = -0.1;
    expect_field(j, "noise_sigma");
    j = minimal();
    j["controller"] = {{"desired_attitude", {{2, 0, 0}, {0, 1, 0}, {0, 0, 1}}}};
    expect_field(j, "controller.desired_attitude");
}

TEST(Json, FileErrors) {
    EXPECT_EQ(kind_of([] { load_scenario("/nonexistent/scenario.json"); }), ErrorKind::IoError);
    const auto path = std::filesystem::temp_directory_path() / "vfatt_bad.json";
    std::ofstream(path) << "{ not json";
    EXPECT_EQ(kind_of([&] { load_scenario(path.string()); }), ErrorKind::ParseError);
    std::filesystem::remove(path);
}

TEST(Run, ZeroHorizonGivesOneRow) {
    const RunResult r = run(short_run("test-1", 0.0));
    ASSERT_EQ(r.log.size(), 1u);
    EXPECT_EQ(r.log[0].t, 0.0);
    EXPECT_NEAR(r.log[0].V, 7.56, 1e-12);
    EXPECT_NEAR(r.log[0].Vdot, -236.16, 1e-10);
}

TEST(Run, RowCountAndTimeColumn) {
    const RunResult r = run(short_run("test-1", 0.5));
    ASSERT_EQ(r.log.size(), 501u);
    EXPECT_NEAR(r.log.back().t, 0.5, 1e-12);
    EXPECT_EQ(r.summary.rows, 501u);
}

TEST(Run, FirstRowHoldsInitialState) {
    const RunResult r = run(short_run("test-1", 0.01));
    const TrajectoryRow& row = r.log.front();
    EXPECT_EQ(row.q.s, 0.8);
    EXPECT_EQ(row.q.v.z, 0.6);
    EXPECT_NEAR(row.tau.x, 10.08, 1e-13);
    EXPECT_NEAR(row.tau.y, -7.56, 1e-13);
    EXPECT_NEAR(row.tau.z, -10.08, 1e-13);
    EXPECT_NEAR(row.beta.x, -9.6, 1e-13);
}

TEST(Run, InvalidScenarioRejected) {
    Scenario s = *builtin_scenario("test-1");
    s.sim.dt = -1;
    EXPECT_THROW((void)run(s), Error);
}

TEST(Csv, HeaderOnlyForEmptyLog) {
    EXPECT_EQ(csv_of({}), std::string(kCsvHeader) + "\n");
    EXPECT_EQ(std::string(kCsvHeader),
              "t,q0,q1,q2,q3,qh0,qh1,qh2,qh3,wx,wy,wz,taux,tauy,tauz,bx,by,bz,V,Vdot,qnormerr,qhnormerr");
}

TEST(Csv, FullPrecisionRoundTrip) {
    const RunResult r = run(short_run("test-2", 0.2));
    std::istringstream in(csv_of(r.log));
    std::string line;
    std::getline(in, line);
    std::size_t k = 0;
    while (std::getline(in, line)) {
        std::vector<double> cols;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cols.push_back(std::stod(cell));
        ASSERT_EQ(cols.size(), 22u);
        EXPECT_EQ(cols[0], r.log[k].t);
        EXPECT_EQ(cols[1], r.log[k].q.s);
        EXPECT_EQ(cols[12], r.log[k].tau.x);
        EXPECT_EQ(cols[18], r.log[k].V);
        ++k;
    }
    EXPECT_EQ(k, r.log.size());
}

TEST(Csv, RerunIsByteIdentical) {
    Scenario s = short_run("test-1", 2.0);
    s.noise_sigma = 0.02;
    s.seed = 123;
    const std::string a = csv_of(run(s).log);
    const std::string b = csv_of(run(s).log);
    EXPECT_EQ(a, b);
    s.seed = 124;
    EXPECT_NE(csv_of(run(s).log), a);
}

TEST(Csv, WritesToFile) {
    const auto path = std::filesystem::temp_directory_path() / "vfatt_run.csv";
    const RunResult r = run(short_run("test-1", 0.1));
    write_csv(r.log, path.string());
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), csv_of(r.log));
    std::filesystem::remove(path);
    EXPECT_EQ(kind_of([&] { write_csv(r.log, "/nonexistent/dir/x.csv"); }), ErrorKind::IoError);
}

TEST(ReportJson, Schema) {
    Report rep{"demo", {}};
    rep.add("a", true, 1e-14, "fine");
    rep.add("b", false, std::numeric_limits<double>::infinity());
    EXPECT_FALSE(rep.pass());
    const json j = report_to_json(rep);
    EXPECT_EQ(j["suite"], "demo");
    ASSERT_EQ(j["checks"].size(), 2u);
    EXPECT_EQ(j["checks"][0]["name"], "a");
    EXPECT_EQ(j["checks"][0]["pass"], true);
    EXPECT_EQ(j["checks"][0]["residual"], 1e-14);
    EXPECT_EQ(j["checks"][0]["detail"], "fine");
    EXPECT_TRUE(j["checks"][1]["residual"].is_null());
}

TEST(Regression, BothTestsConvergeWithinThresholds) {
    for (const char* name : {"test-1", "test-2"}) {
        const RunSummary s = run(*builtin_scenario(name)).summary;
        EXPECT_TRUE(s.converged) << name;
        EXPECT_LT(s.final_q_norm, 1e-3) << name;
        EXPECT_LT(s.final_omega_norm, 1e-3) << name;
        EXPECT_GT(std::fabs(s.final_q0), 0.999) << name;
        EXPECT_LE(s.max_V_increase, 1e-7) << name;
        EXPECT_LE(s.max_tau_norm, 31.5) << name;
    }
    EXPECT_EQ(run(*builtin_scenario("test-1")).summary.converged_to, 1);
    const RunSummary two = run(*builtin_scenario("test-2")).summary;
    EXPECT_EQ(two.converged_to, -1);
    EXPECT_LE(two.max_q0, 0.5);
}

TEST(Regression, NoisyRunStaysBounded) {
    Scenario s = *builtin_scenario("test-1");
    s.noise_sigma = 0.01;
    s.seed = 5;
    const RunSummary r = run(s).summary;
    EXPECT_FALSE(r.error.has_value());
    EXPECT_LE(r.max_tau_norm, 31.5 * 1.1);
    EXPECT_GT(std::fabs(r.final_q0), 0.99);
}
