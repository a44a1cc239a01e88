#include "kfr/commands.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using kfr::testing::make;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run cli(const std::string& args) {
    std::string cmd = std::string(KFR_CLI_PATH) + " " + args + " 2>&1";
    Run r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
    int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() / ("kfr_cli_" + std::to_string(::getpid()) + "_" +
                                           ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    std::string file(const std::string& name, const std::string& content) {
        auto p = dir / name;
        std::ofstream(p) << content;
        return p.string();
    }
    std::string path(const std::string& name) const { return (dir / name).string(); }
    fs::path dir;
};

}  // namespace

TEST(Commands, SolveMethodsAgree) {
    auto inst = make({0}, {{1, 3}});
    for (auto m : {kfr::SolveMethod::Lp, kfr::SolveMethod::Dp, kfr::SolveMethod::Enumerate}) {
        kfr::SolveOptions opts;
        opts.method = m;
        auto out = kfr::run_solve(inst, opts);
        EXPECT_EQ(out.report["total"]["exact"], "3");
        EXPECT_FALSE(out.report.contains("wall_ms"));
    }
    kfr::SolveOptions timed;
    timed.timing = true;
    EXPECT_TRUE(kfr::run_solve(inst, timed).report.contains("wall_ms"));
}

TEST(Commands, ReportCostReparses) {
    auto inst = kfr::parse_instance(R"({"x0":["1/3","7/2"],"stages":[["1/2","5/3"],["3"]]})");
    auto out = kfr::run_solve(inst, {});
    EXPECT_EQ(kfr::parse_rational(out.report["total"]["exact"].get<std::string>()), out.schedule.total());
    EXPECT_EQ(out.report["method"], "lp+round");
}

TEST(Commands, ParseChecks) {
    EXPECT_EQ(kfr::parse_checks("theorem1,competitive").size(), 2u);
    EXPECT_EQ(kfr::parse_checks("all").size(), 5u);
    EXPECT_THROW(kfr::parse_checks("theorem1,bogus"), std::invalid_argument);
    EXPECT_THROW(kfr::parse_checks(""), std::invalid_argument);
}

TEST(Commands, VerifyMixedFacilityCounts) {
    std::vector<kfr::NamedInstance> items{{"a", make({0, 10}, {{2, 8}, {5, 8}})}, {"b", make({0, 1, 2}, {{4}, {6, 9}})}};
    auto out = kfr::run_verify(items, kfr::parse_checks("all"));
    EXPECT_TRUE(out.all_pass);
    EXPECT_EQ(out.report["summary"]["theorem1"]["evaluated"], 2);
    EXPECT_EQ(out.report["summary"]["competitive"]["evaluated"], 1);
    EXPECT_EQ(out.report["instances"][1]["online"], "skipped: K != 2");
}

TEST(Commands, CompareReportsEveryMethod) {
    auto j = kfr::run_compare(make({0, 10}, {{2, 8}, {5, 8}}));
    EXPECT_EQ(j["lp_objective"]["exact"], j["dp"]["exact"]);
    EXPECT_EQ(j["lp_round_prefix"]["exact"], j["dp"]["exact"]);
    EXPECT_EQ(j["enum"]["exact"], j["dp"]["exact"]);
    EXPECT_TRUE(j.contains("online"));
}

TEST_F(CliTest, SolveLpAndDp) {
    auto in = file("a.json", R"({"x0":[0],"stages":[[1,3]]})");
    auto lp = cli("solve --method lp -i " + in + " -o " + path("s.json"));
    ASSERT_EQ(lp.code, 0) << lp.out;
    EXPECT_EQ(nlohmann::json::parse(lp.out)["total"]["exact"], "3");
    EXPECT_EQ(nlohmann::json::parse(slurp(path("s.json")))["total"]["exact"], "3");
    auto dp = cli("solve --method dp -i " + in);
    ASSERT_EQ(dp.code, 0) << dp.out;
    EXPECT_EQ(nlohmann::json::parse(dp.out)["total"]["exact"], "3");
}

TEST_F(CliTest, OperationalErrorsExitOne) {
    auto missing = cli("solve -i " + path("nope.json"));
    EXPECT_EQ(missing.code, 1);
    EXPECT_NE(missing.out.find("cannot read"), std::string::npos);

    auto bad = cli("solve -i " + file("bad.json", R"({"x0":[0],"stages":[[]]})"));
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.out.find("empty stage"), std::string::npos);

    auto k3 = cli("online -i " + file("k3.json", R"({"x0":[0,1,2],"stages":[[1]]})"));
    EXPECT_EQ(k3.code, 1);
    EXPECT_NE(k3.out.find("online algorithm defined for K=2"), std::string::npos);

    auto unknown = cli("verify --checks theorem1,bogus --suite 1..2");
    EXPECT_EQ(unknown.code, 1);
    EXPECT_NE(unknown.out.find("usage error"), std::string::npos);

    auto budget = cli("solve --method dp -i " + file("big.json", R"({"x0":[0,1,2],"stages":[[3,4,5,6]]})"));
    EXPECT_EQ(budget.code, 0);
    ::setenv("KFR_ORACLE_BUDGET", "10", 1);
    auto limited = cli("solve --method dp -i " + path("big.json"));
    ::unsetenv("KFR_ORACLE_BUDGET");
    EXPECT_EQ(limited.code, 1);
    EXPECT_NE(limited.out.find("exceeds budget"), std::string::npos);
}

TEST_F(CliTest, OnlineWritesTraceCsvAndReport) {
    auto in = file("a.json", R"({"x0":[0,1],"stages":[[5,6],[0,10],[0,10]]})");
    auto r = cli("online -i " + in + " -o " + path("t.jsonl") + " --csv " + path("t.csv"));
    ASSERT_EQ(r.code, 0) << r.out;
    auto report = nlohmann::json::parse(r.out);
    EXPECT_EQ(report["method"], "online");
    EXPECT_EQ(report["branches"][0]["step2"], "median-right");
    std::istringstream lines(slurp(path("t.jsonl")));
    std::string line;
    int n = 0;
    while (std::getline(lines, line)) {
        EXPECT_TRUE(nlohmann::json::accept(line));
        ++n;
    }
    EXPECT_EQ(n, 3);
    EXPECT_EQ(slurp(path("t.csv")).substr(0, 6), "stage,");
}

TEST_F(CliTest, VerifySuiteAndAdversary) {
    auto r = cli("verify --checks theorem1,rounding-equiv --suite 1..12");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(nlohmann::json::parse(r.out)["summary"]["theorem1"]["passed"], 12);

    auto adv = cli("verify --checks competitive --model alternating-adversary --agents 2 --stages 6 --facilities 2 "
                   "--seed 1..5");
    ASSERT_EQ(adv.code, 0) << adv.out;
    auto j = nlohmann::json::parse(adv.out);
    EXPECT_EQ(j["summary"]["competitive"]["passed"], 5);
    EXPECT_LE(j["worst_ratio"]["value"]["float"].get<double>(), 63.0);
}

TEST_F(CliTest, GenIsDeterministic) {
    auto a = cli("gen --model clustered --agents 4 --stages 3 --facilities 2 --seed 9 -o " + path("a.json"));
    auto b = cli("gen --model clustered --agents 4 --stages 3 --facilities 2 --seed 9 -o " + path("b.json"));
    ASSERT_EQ(a.code, 0);
    ASSERT_EQ(b.code, 0);
    EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
    auto spec = file("spec.json", R"({"model":"clustered","agents":4,"stages":3,"facilities":2,"seed":9})");
    ASSERT_EQ(cli("gen --spec " + spec + " -o " + path("c.json")).code, 0);
    EXPECT_EQ(slurp(path("a.json")), slurp(path("c.json")));
}
