#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lzsm/cli.hpp"

namespace fs = std::filesystem;
using lzsm::cli::run_cli;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "lzsm_cli");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

class CliFiles : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() / ("lzsm_cli_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                           "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    fs::path dir;
};

}  // namespace

TEST(Cli, ProbeLzsmProbability) {
    const auto r = run({"probe", "--what", "lzsm-prob", "--delta", "0.1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["value"].get<double>(), 0.5334880910911032, 1e-15);
    EXPECT_EQ(j["schema_version"], 1);
}

TEST(Cli, ProbeOtherScalars) {
    EXPECT_NEAR(nlohmann::json::parse(run({"probe", "--what", "jump-time", "--delta", "0"}).out)["value"].get<double>(),
                std::sqrt(2.0 * lzsm::pi), 1e-15);
    EXPECT_NEAR(nlohmann::json::parse(run({"probe", "--what", "stokes-phase", "--delta", "0"}).out)["value"].get<double>(),
                0.25 * lzsm::pi, 1e-15);
    const auto z = nlohmann::json::parse(
        run({"probe", "--what", "zeta", "--delta", "0", "--tau-a", "3", "--zeta-mode", "asymptotic"}).out);
    EXPECT_EQ(z["value"].get<double>(), 4.5);
    EXPECT_EQ(run({"probe", "--what", "jump-time", "--delta", "-1"}).code, 2);
}

TEST(Cli, SimulateDecoupledIsConstant) {
    const auto r = run({"simulate", "--method", "ode", "--delta", "0", "--init", "0,1"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream is(r.out);
    std::string line;
    int rows = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("tau,", 0) == 0) continue;
        EXPECT_NE(line.find(",ode,"), std::string::npos);
        // p_alpha and p_beta columns
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cols.push_back(c);
        ASSERT_EQ(cols.size(), 10u);
        EXPECT_EQ(std::stod(cols[6]), 0.0);
        EXPECT_NEAR(std::stod(cols[7]), 1.0, 1e-12);
        ++rows;
    }
    EXPECT_EQ(rows, 161);
}

TEST(Cli, CompareDefaultHeader) {
    const auto r = run({"compare"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream is(r.out);
    std::string a, b, c;
    std::getline(is, a);
    std::getline(is, b);
    std::getline(is, c);
    EXPECT_EQ(a, "# schema_version: 1");
    EXPECT_EQ(b.rfind("# delta: ", 0), 0u);
    EXPECT_EQ(c, "tau,method,re_alpha,im_alpha,re_beta,im_beta,p_alpha,p_beta,norm,in_jump_window");
}

TEST(Cli, JsonFormat) {
    const auto r = run({"compare", "--delta", "0.3", "--tau-count", "5", "--format", "json", "--methods", "zener,majorana"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["schema_version"], 1);
    EXPECT_EQ(j["rows"].size(), 10u);
}

TEST(Cli, DeterministicOutput) {
    const std::vector<std::string> args{"compare", "--delta", "0.3", "--tau-start", "-6", "--tau-end", "6",
                                        "--tau-count", "61", "--init", "0.6,0.8"};
    const auto a = run(args);
    const auto b = run(args);
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    const std::vector<std::string> sw{"sweep", "--delta-range", "0.1:1:4", "--tau-count", "41"};
    EXPECT_EQ(run(sw).out, run(sw).out);
}

TEST_F(CliFiles, OutputsAndMetadata) {
    const std::string out = (dir / "run.csv").string();
    const auto r = run({"compare", "--delta", "0.1", "0.3", "--tau-count", "21", "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    EXPECT_TRUE(fs::exists(dir / "run.delta-0.csv"));
    EXPECT_TRUE(fs::exists(dir / "run.delta-1.csv"));
    const auto meta = nlohmann::json::parse(slurp(dir / "run.csv.meta.json"));
    EXPECT_EQ(meta["schema_version"], 1);
    EXPECT_EQ(meta["deltas"].size(), 2u);
    EXPECT_FALSE(fs::exists(dir / "run.csv.tmp"));

    const std::string first = slurp(dir / "run.delta-1.csv");
    ASSERT_EQ(run({"compare", "--delta", "0.1", "0.3", "--tau-count", "21", "--out", out}).code, 0);
    EXPECT_EQ(slurp(dir / "run.delta-1.csv"), first);
}

TEST_F(CliFiles, ConfigFile) {
    const fs::path cfg = dir / "cfg.json";
    std::ofstream(cfg) << R"({"delta_values": [0.2], "tau_grid": {"start": -3, "end": 3, "count": 7},
                              "init": [0, 1], "methods": ["zener"], "format": "csv"})";
    const auto a = run({"compare", "--config", cfg.string()});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_NE(a.out.find("# delta: 0.20000000000000001"), std::string::npos);
    // explicit flags override the file
    const auto b = run({"compare", "--config", cfg.string(), "--delta", "0.4"});
    EXPECT_NE(b.out.find("# delta: 0.40000000000000002"), std::string::npos);

    std::ofstream(dir / "bad.json") << R"({"delta_values": [0.2], "colour": "red"})";
    const auto c = run({"compare", "--config", (dir / "bad.json").string()});
    EXPECT_EQ(c.code, 2);
    EXPECT_NE(c.err.find("colour"), std::string::npos);
    std::ofstream(dir / "bad2.json") << R"({"tau_grid": {"start": -3, "stop": 3}})";
    EXPECT_EQ(run({"compare", "--config", (dir / "bad2.json").string()}).code, 2);
    EXPECT_EQ(run({"compare", "--config", (dir / "missing.json").string()}).code, 4);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"compare", "--format", "xml"}).code, 2);
    EXPECT_EQ(run({"compare", "--init", "1,1"}).code, 2);
    EXPECT_EQ(run({"compare", "--tau-count", "1"}).code, 2);
    EXPECT_EQ(run({"simulate", "--method", "ode,zener"}).code, 2);
    EXPECT_EQ(run({"compare", "--delta", "0.1", "0.2"}).code, 2);
    EXPECT_EQ(run({"sweep", "--delta", "0"}).code, 2);
    EXPECT_EQ(run({"compare", "--delta", "0.1", "--out", "/nonexistent-dir/x.csv"}).code, 4);
    const auto num = run({"sweep", "--delta", "3000", "--tau-count", "3"});
    EXPECT_EQ(num.code, 3);
    const auto diag = nlohmann::json::parse(num.err);
    EXPECT_EQ(diag["error"], "overflow");
    EXPECT_EQ(run({"--help"}).code, 0);
}
