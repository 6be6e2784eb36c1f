#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#ifndef VFATT_CLI
#error "VFATT_CLI must point at the vfatt executable"
#endif

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
};

Result cli(const std::string& args) {
    const fs::path log = fs::temp_directory_path() / "vfatt_cli_out.txt";
    const std::string cmd = std::string("\"") + VFATT_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

fs::path tmp(const std::string& name) { return fs::temp_directory_path() / name; }

} // namespace

TEST(Cli, ListScenarios) {
    const Result r = cli("list-scenarios");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("test-1"), std::string::npos);
    EXPECT_NE(r.out.find("triad-test-2"), std::string::npos);
}

TEST(Cli, SimulateBuiltin) {
    const fs::path out = tmp("vfatt_cli_sim.csv");
    const Result r = cli("simulate --scenario test-2 --out \"" + out.string() + "\"");
    EXPECT_EQ(r.code, 0) << r.out;
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "t,q0,q1,q2,q3,qh0,qh1,qh2,qh3,wx,wy,wz,taux,tauy,tauz,bx,by,bz,V,Vdot,qnormerr,qhnormerr");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    EXPECT_EQ(rows, 30001u);
    fs::remove(out);
}

TEST(Cli, SimulateScenarioFile) {
    const fs::path out = tmp("vfatt_cli_file.csv");
    const Result r = cli(std::string("simulate --scenario \"") + VFATT_SOURCE_DIR + "/scenarios/noisy-test-1.json\" --out \"" +
                         out.string() + "\"");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(fs::exists(out));
    fs::remove(out);
}

TEST(Cli, VerifyWritesReport) {
    const fs::path rep = tmp("vfatt_cli_report.json");
    const Result r = cli("verify --suite algebra --report \"" + rep.string() + "\"");
    EXPECT_EQ(r.code, 0) << r.out;
    std::ifstream in(rep);
    const nlohmann::json j = nlohmann::json::parse(in);
    EXPECT_EQ(j["suite"], "algebra");
    ASSERT_FALSE(j["checks"].empty());
    for (const auto& c : j["checks"]) {
        EXPECT_TRUE(c.contains("name"));
        EXPECT_TRUE(c["pass"].get<bool>());
        EXPECT_TRUE(c.contains("residual"));
        EXPECT_TRUE(c.contains("detail"));
    }
    fs::remove(rep);
}

TEST(Cli, Gains) {
    const Result r = cli("gains --scenario test-1");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("31.5"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("3.81966"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("0.38196"), std::string::npos) << r.out;
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(cli("").code, 1);
    EXPECT_EQ(cli("verify --suite nonsense").code, 1);
    EXPECT_EQ(cli("simulate --scenario test-1").code, 1);

    const fs::path bad = tmp("vfatt_cli_bad.json");
    std::ofstream(bad) << R"({"J": [[1,0,0],[0,1,0],[0,0,1]], "refs": {"r": [[0,0,1],[0,0,2]], "gamma": [1,1], "rho": [1,1]}, "Q0": [1,0,0,0]})";
    EXPECT_EQ(cli("gains --scenario \"" + bad.string() + "\"").code, 1);
    std::ofstream(bad) << "{ broken";
    EXPECT_EQ(cli("gains --scenario \"" + bad.string() + "\"").code, 1);
    fs::remove(bad);

    EXPECT_EQ(cli("gains --scenario /nonexistent/x.json").code, 3);
    EXPECT_EQ(cli("simulate --scenario test-1 --out /nonexistent/dir/x.csv").code, 3);
}
