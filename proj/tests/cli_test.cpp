// Integration tests that spawn the actual CLI binary. argv[1] is the binary
// path, argv[2] the shipped specs directory.

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

std::string g_binary;
std::string g_specs;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = g_binary + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    EXPECT_NE(pipe, nullptr);
    RunResult r;
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

nlohmann::json parse_out(const RunResult& r) {
    return nlohmann::json::parse(r.out);
}

std::string spec(const std::string& name) { return g_specs + "/" + name; }

} // namespace

TEST(Cli, VerifyConfirmedExampleExitsZero) {
    auto r = run("verify --spec " + spec("eikonal_isotropic3.json"));
    EXPECT_EQ(r.exit_code, 0);
    auto j = parse_out(r);
    EXPECT_EQ(j["verdict"], "pass");
    EXPECT_EQ(j["seed"].get<std::uint64_t>(), 0xC0FFEEu);
    EXPECT_EQ(j["samples"].get<int>(), 200);
    for (const auto& c : j["constraints"]) {
        if (c["name"] == "pde_residual") {
            EXPECT_LE(c["max_abs_residual"].get<double>(), 1e-9);
        }
    }
}

TEST(Cli, VerifyDirectExampleExitsZero) {
    auto r = run("verify --spec " + spec("eikonal_isotropic3_direct.json"));
    EXPECT_EQ(r.exit_code, 0);
}

TEST(Cli, UnconfirmedExampleExitsTwoWithPowerConditions) {
    auto r = run("verify --spec " + spec("cubic_fermat3.json"));
    EXPECT_EQ(r.exit_code, 2);
    auto j = parse_out(r);
    EXPECT_EQ(j["verdict"], "unconfirmed");
    bool saw_iota2 = false, saw_iota3 = false, nonzero_measured = false;
    for (const auto& c : j["constraints"]) {
        std::string name = c["name"].get<std::string>();
        if (name == "power_sum_iota2") saw_iota2 = true;
        if (name == "power_sum_iota3") saw_iota3 = true;
        if (c["verdict"] == "unconfirmed" && c["max_abs_residual"].get<double>() > 1e-3)
            nonzero_measured = true;
        EXPECT_NE(c["verdict"], "fail");
    }
    EXPECT_TRUE(saw_iota2);
    EXPECT_TRUE(saw_iota3);
    EXPECT_TRUE(nonzero_measured);
}

TEST(Cli, ExponentialCubicVariantAlsoUnconfirmed) {
    EXPECT_EQ(run("verify --spec " + spec("exp_envelope_l3.json")).exit_code, 2);
    EXPECT_EQ(run("verify --spec " + spec("mixed_exponents7.json")).exit_code, 2);
}

TEST(Cli, ConfirmedFamilySpecsPass) {
    for (const char* name : {"exp_envelope_l2.json", "paraboloid.json", "eikonal_linear.json",
                             "directional_linear.json", "directional_exp.json",
                             "directional_cosh.json"}) {
        auto r = run("verify --spec " + spec(name));
        EXPECT_EQ(r.exit_code, 0) << name << "\n" << r.out;
    }
}

TEST(Cli, RootsSubcommand) {
    auto r = run("roots --coeffs -152,80,-100,91");
    EXPECT_EQ(r.exit_code, 0);
    auto j = parse_out(r);
    ASSERT_EQ(j.size(), 3u);
    int real_count = 0;
    for (const auto& root : j) {
        double re = root[0].get<double>(), im = root[1].get<double>();
        if (std::abs(im) < 1e-10) {
            ++real_count;
            EXPECT_NEAR(re, 1.3577, 5e-4);
        }
    }
    EXPECT_EQ(real_count, 1);
}

TEST(Cli, RootsRejectsZeroLeading) {
    EXPECT_EQ(run("roots --coeffs 1,2,0").exit_code, 3);
}

TEST(Cli, SolveDirectionFindsIsotropicDirection) {
    auto r = run("solve-direction --c 0.2857142857142857,0.42857142857142855,0.8571428571428571"
                 " --ell 2 --fix 3=-1");
    EXPECT_EQ(r.exit_code, 0);
    auto j = parse_out(r);
    ASSERT_EQ(j["candidates"].size(), 2u);
    bool found = false;
    for (const auto& cand : j["candidates"]) {
        double re = cand["d"][0][0].get<double>();
        double im = cand["d"][0][1].get<double>();
        if (std::abs(re - 12.0 / 13) < 1e-9 && std::abs(im + 21.0 / 13) < 1e-9) found = true;
        for (const auto& pc : cand["power_conditions"])
            EXPECT_LE(pc["abs"].get<double>(), 1e-10);
    }
    EXPECT_TRUE(found);
}

TEST(Cli, SolveDirectionCubicReportsAllConditions) {
    auto r = run("solve-direction --c 0.5,0.6666666666666666,0.8333333333333334"
                 " --ell 3 --fix 3=-1");
    EXPECT_EQ(r.exit_code, 0);
    auto j = parse_out(r);
    EXPECT_GE(j["candidates"].size(), 4u);
    for (const auto& cand : j["candidates"]) {
        ASSERT_EQ(cand["power_conditions"].size(), 3u); // never drops a condition
        EXPECT_LE(cand["power_conditions"][0]["abs"].get<double>(), 1e-8);
    }
}

TEST(Cli, TraceEmitsConservedResidual) {
    auto r = run("trace --spec " + spec("paraboloid.json") + " --tau-end 0.4,0 --steps 80");
    EXPECT_EQ(r.exit_code, 0);
    auto j = parse_out(r);
    EXPECT_TRUE(j.contains("tau_path"));
    ASSERT_EQ(j["states"].size(), 81u);
    for (const auto& s : j["states"]) {
        EXPECT_LE(s["residual"].get<double>(), 1e-7);
        EXPECT_EQ(s["z"].size(), 3u);
        EXPECT_EQ(s["Du"].size(), 3u);
    }
}

TEST(Cli, TraceBlowupReportsSingularityEstimate) {
    // Aiming the segment through the movable singularity tau* = 1/(2 u0)
    // of the u^2 right side must abort with the closed-form estimate.
    auto r = run("trace --spec " + spec("exp_envelope_l2.json") +
                 " --tau-end \" -0.0599115365948542,-0.1358287171726018\""
                 " --steps 4000 --z0 \"(2+0.3i),0.1,-1\"");
    EXPECT_EQ(r.exit_code, 1);
    auto j = parse_out(r);
    EXPECT_TRUE(j.contains("error"));
    EXPECT_TRUE(j.contains("tau_reached"));
    ASSERT_TRUE(j.contains("tau_singularity"));
    // The abort point sits next to the estimate.
    double dr = j["tau_reached"][0].get<double>() - j["tau_singularity"][0].get<double>();
    double di = j["tau_reached"][1].get<double>() - j["tau_singularity"][1].get<double>();
    EXPECT_LE(std::sqrt(dr * dr + di * di), 1e-3);
}

TEST(Cli, VerifyOdeCases) {
    EXPECT_EQ(run("verify-ode --case " + spec("ode_exp.json")).exit_code, 0);
    EXPECT_EQ(run("verify-ode --case " + spec("ode_sin.json")).exit_code, 0);
    EXPECT_EQ(run("verify-ode --case " + spec("ode_moebius.json")).exit_code, 0);
    EXPECT_EQ(run("verify-ode --case " + spec("ode_elliptic.json") + " --tol 1e-8").exit_code, 0);
}

TEST(Cli, PhiSubcommand) {
    auto r = run("phi --variant weighted_diff --core \"sin(0.3*z1)\" --rho 1,1,1");
    EXPECT_EQ(r.exit_code, 0);
    auto j = parse_out(r);
    EXPECT_EQ(j["verdict"], "pass");
    EXPECT_LE(j["max_scaled_annihilation"].get<double>(), 1e-10);
}

TEST(Cli, DumpSpecRoundTripsToIdenticalReport) {
    auto dumped = run("verify --spec " + spec("eikonal_isotropic3.json") + " --dump-spec");
    EXPECT_EQ(dumped.exit_code, 0);
    std::string tmp = "/tmp/waring_dumped_spec.json";
    {
        std::ofstream out(tmp);
        out << dumped.out;
    }
    auto r1 = run("verify --spec " + spec("eikonal_isotropic3.json"));
    auto r2 = run("verify --spec " + tmp);
    EXPECT_EQ(r1.exit_code, r2.exit_code);
    EXPECT_EQ(r1.out, r2.out);
}

TEST(Cli, UsageAndSpecErrorsExitThree) {
    EXPECT_EQ(run("verify").exit_code, 3);               // missing --spec
    EXPECT_EQ(run("verify --spec /nonexistent.json").exit_code, 3);
    EXPECT_EQ(run("nonsense").exit_code, 3);

    std::string tmp = "/tmp/waring_bad_spec.json";
    {
        std::ofstream out(tmp);
        out << R"({"dimension": 2, "family": {"type": "diagonal_linear"}, "surprise": 1})";
    }
    EXPECT_EQ(run("verify --spec " + tmp).exit_code, 3);
}

TEST(Cli, SeedAndSamplesFlagsChangeReportHeader) {
    auto r = run("verify --spec " + spec("eikonal_linear.json") + " --samples 64 --seed 42");
    EXPECT_EQ(r.exit_code, 0);
    auto j = parse_out(r);
    EXPECT_EQ(j["samples"].get<int>(), 64);
    EXPECT_EQ(j["seed"].get<std::uint64_t>(), 42u);
}

int main_impl(int argc, char** argv) {
    if (argc < 3) {
        fprintf(stderr, "usage: cli_test <binary> <specs-dir>\n");
        return 2;
    }
    g_binary = argv[1];
    g_specs = argv[2];
    ::testing::InitGoogleTest(&argc, argv);
    return RUN_ALL_TESTS();
}

int main(int argc, char** argv) { return main_impl(argc, argv); }
