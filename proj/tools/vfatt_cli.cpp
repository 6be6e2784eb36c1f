// vfatt: run scenarios, verification suites, and gain diagnostics from the shell.
//
// Exit codes: 0 success, 1 validation failure, 2 verification failure, 3 runtime error.

#include <cstdio>
#include <exception>
#include <iomanip>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vfatt/analysis.hpp"
#include "vfatt/scenario.hpp"
#include "vfatt/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kVerification = 2;
constexpr int kRuntime = 3;

int exit_code(vfatt::ErrorKind k) {
    using vfatt::ErrorKind;
    switch (k) {
    case ErrorKind::IoError:
    case ErrorKind::NumericalBlowUp: return kRuntime;
    default: return kValidation;
    }
}

int simulate(const std::string& scenario, const std::string& out) {
    const vfatt::Scenario sc = vfatt::load_scenario(scenario);
    const vfatt::RunResult r = vfatt::run(sc);
    vfatt::write_csv(r.log, out);
    const vfatt::RunSummary& s = r.summary;
    std::cout << sc.name << ": " << s.rows << " rows -> " << out << "\n"
              << "  final q0 = " << s.final_q0 << ", |q| = " << s.final_q_norm << ", |omega| = " << s.final_omega_norm
              << (s.converged ? " (converged)" : "") << "\n"
              << "  max |tau| = " << s.max_tau_norm << " (bound " << s.torque_bound << ")\n";
    if (s.error) {
        std::cerr << "error: " << *s.error << "\n";
        return kRuntime;
    }
    return kOk;
}

int verify(const std::string& suite, const std::string& report) {
    const vfatt::Report rep = vfatt::verify(suite);
    if (!report.empty()) vfatt::write_report(rep, report);
    std::size_t failed = 0;
    for (const vfatt::Check& c : rep.checks) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  residual=" << c.residual;
        if (!c.detail.empty()) std::cout << "  " << c.detail;
        std::cout << "\n";
        if (!c.pass) ++failed;
    }
    std::cout << suite << ": " << rep.checks.size() - failed << "/" << rep.checks.size() << " checks passed\n";
    return rep.pass() ? kOk : kVerification;
}

int list_scenarios() {
    for (const vfatt::BuiltinInfo& b : vfatt::builtin_scenarios())
        std::cout << std::left << std::setw(14) << b.name << b.description << "\n";
    return kOk;
}

void print_matrix(const char* label, const vfatt::Mat3& m) {
    std::cout << label << " =\n";
    for (std::size_t r = 0; r < 3; ++r) {
        std::printf("  [%12.6g %12.6g %12.6g]\n", m(r, 0), m(r, 1), m(r, 2));
    }
}

int gains(const std::string& scenario) {
    const vfatt::Scenario sc = vfatt::load_scenario(scenario);
    sc.validate();
    const vfatt::GainMatrices gm = sc.make_controller().gains();
    const vfatt::EigenDecomposition eg = vfatt::sym3_eigen(gm.W_gamma);
    const vfatt::EigenDecomposition er = vfatt::sym3_eigen(gm.W_rho);
    std::cout << "scenario " << sc.name << " (" << vfatt::to_string(sc.controller.variant) << ")\n";
    print_matrix("W_gamma", gm.W_gamma);
    std::printf("  eigenvalues %.12g %.12g %.12g\n", eg.values[0], eg.values[1], eg.values[2]);
    print_matrix("W_rho", gm.W_rho);
    std::printf("  eigenvalues %.12g %.12g %.12g\n", er.values[0], er.values[1], er.values[2]);
    std::printf("torque bound %.12g\n", vfatt::torque_bound(sc.controller, sc.refs));
    const vfatt::Phi1Certificate cert = vfatt::phi1_certificate(gm, sc.J);
    std::printf("basin constant c %.12g (lambda_m %.12g, lambda_M %.12g)\n", cert.c, cert.lambda_m, cert.lambda_M);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Velocity-free attitude stabilization from vector measurements"};
    app.require_subcommand(1);

    std::string scenario, out, suite, report;

    auto* sim = app.add_subcommand("simulate", "Integrate a scenario and write its trajectory as CSV");
    sim->add_option("--scenario", scenario, "Built-in name or JSON file")->required();
    sim->add_option("--out", out, "Output CSV path")->required();

    auto* ver = app.add_subcommand("verify", "Run a verification suite");
    ver->add_option("--suite", suite, "Suite name")->required()->check(CLI::IsMember(vfatt::suite_names()));
    ver->add_option("--report", report, "Write a JSON report to this path");

    auto* list = app.add_subcommand("list-scenarios", "List the built-in scenarios");

    auto* gain = app.add_subcommand("gains", "Print gain matrices, eigenvalues, torque bound and basin constant");
    gain->add_option("--scenario", scenario, "Built-in name or JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kValidation;
    }

    try {
        if (*sim) return simulate(scenario, out);
        if (*ver) return verify(suite, report);
        if (*list) return list_scenarios();
        if (*gain) return gains(scenario);
    } catch (const vfatt::Error& e) {
        std::cerr << "error (" << vfatt::to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kOk;
}
