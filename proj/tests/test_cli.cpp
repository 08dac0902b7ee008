#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
    int status;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(FAULTSEARCH_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int st = pclose(pipe);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string tmp(const std::string& name) { return std::string(CLI_TMP_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Cli, Bound) {
    auto r = run("bound -m 2 -k 1 -f 0 --json");
    ASSERT_EQ(r.status, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["lambda0"].get<double>(), 9.0, 1e-12);
    EXPECT_NEAR(j["alpha"].get<double>(), 2.0, 1e-12);
    r = run("bound -m 2 -k 3 -f 1 --json");
    EXPECT_NEAR(nlohmann::json::parse(r.out)["lambda0"].get<double>(), 5.2331, 1e-4);
    r = run("bound --eta 2 --json");
    EXPECT_NEAR(nlohmann::json::parse(r.out)["fractional_ratio"].get<double>(), 9.0, 1e-12);
    EXPECT_EQ(run("bound -m 2 -k 1 -f 1").status, 1);
    r = run("bound -m 2 -k 4 -f 1 --json");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(nlohmann::json::parse(r.out)["regime"], "trivial");
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run("").status, 1);
    EXPECT_EQ(run("nosuch").status, 1);
    EXPECT_EQ(run("refute -m 2 -k 1").status, 1);
    EXPECT_EQ(run("--precision 128 bound").status, 1);
}

TEST(Cli, SimulateIsDeterministic) {
    const auto a = tmp("sweep_a.csv"), b = tmp("sweep_b.csv");
    auto r1 = run("simulate -m 2 -k 3 -f 1 -N 1000 --csv " + a);
    auto r2 = run("simulate -m 2 -k 3 -f 1 -N 1000 --csv " + b);
    ASSERT_EQ(r1.status, 0);
    EXPECT_EQ(r1.out, r2.out);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_EQ(slurp(a).rfind("# faultsearch sweep v1", 0), 0u);
    const auto j = nlohmann::json::parse(r1.out);
    EXPECT_LE(j["sup_ratio"].get<double>(), j["lambda0"].get<double>() + 1e-6);
    EXPECT_GE(j["sup_ratio"].get<double>(), j["lambda0"].get<double>() - 0.05);
}

TEST(Cli, SimulateStrategyFileAndUndetected) {
    const auto s = tmp("gap.txt");
    std::ofstream(s) << "# faultsearch strategy v1\nsetting orc 2\n1:2 2:5\n";
    EXPECT_EQ(run("simulate -k 1 --strategy " + s + " -N 10").status, 2);
    const auto g = tmp("gen.txt");
    ASSERT_EQ(run("generate -m 2 -k 1 -f 0 -N 100 --mode line -o " + g).status, 0);
    auto r = run("simulate --strategy " + g + " -N 100");
    ASSERT_EQ(r.status, 0);
    EXPECT_LT(nlohmann::json::parse(r.out)["sup_ratio"].get<double>(), 9.0);
    auto x = run("--precision extended simulate --strategy " + g + " -N 100");
    EXPECT_EQ(x.status, 0);
}

TEST(Cli, RefuteVerdicts) {
    auto r = run("refute -m 2 -k 1 -f 0 --lambda 8 -C 16 --auto-horizon");
    EXPECT_EQ(r.status, 2);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["verdict"], "coverage_failure");
    EXPECT_TRUE(j["witness"]["settled"].get<bool>());

    const auto trace = tmp("trace.csv");
    r = run("refute -m 2 -k 3 -f 1 --lambda 5.3332 -N 10000 --trace " + trace);
    EXPECT_EQ(r.status, 0);
    j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["verdict"], "certificate");
    EXPECT_EQ(slurp(trace).rfind("# faultsearch trace v1", 0), 0u);

    r = run("refute -m 2 -k 1 -f 0 --lambda 9.1 --mode line");
    EXPECT_EQ(r.status, 0);
    j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["audit"]["cap_violations"], 0);
    EXPECT_EQ(run("refute -m 2 -k 1 -f 0 --lambda 9 --auto-horizon -C 16").status, 1);
}

TEST(Cli, VerifyAndRationalize) {
    const auto a = tmp("assign.csv");
    auto r = run("verify -m 2 -k 1 -f 0 --lambda 9.01 -N 100 --assignment " + a);
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(slurp(a).rfind("# faultsearch assignment v1\nrobot,round,t_prime,t\n", 0), 0u);
    EXPECT_EQ(run("verify -m 2 -k 1 -f 0 --lambda 8 -N 100").status, 2);

    const auto in = tmp("frac.json");
    std::ofstream(in) << R"({"weights": [0.5, 0.5], "eta": 2, "delta": 0.01})";
    r = run("rationalize --input " + in);
    ASSERT_EQ(r.status, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["q"], 4);
    EXPECT_EQ(j["k"], 2);
}
