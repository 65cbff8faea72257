#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "commands.hpp"
#include "config.hpp"
#include "rsf/steady.hpp"

using namespace rsf;
using namespace rsf::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("rsf_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

RunConfig small(const fs::path& out) {
    RunConfig c;
    c.numerics.N = 41;
    c.output.dir = out.string();
    return c;
}

}  // namespace

TEST(Config, ParsesAllSections) {
    const RunConfig c = parse_config_text(R"(
[model]
kappa = 0.16
eta = 1e-3
rho = 0.5
stiffness = "damage"
ell = 0.3
[numerics]
N = 201
tau = 0.005
[experiment]
v_inf = 0.2
kappa_list = [0.01, 0.04]
start = "rest"
probes = [1, 2.5]
[output]
dir = "runs/a"
profiles = false
)");
    EXPECT_DOUBLE_EQ(c.model.kappa, 0.16);
    EXPECT_DOUBLE_EQ(c.model.eta, 1e-3);
    EXPECT_DOUBLE_EQ(c.model.rho, 0.5);
    EXPECT_EQ(c.model.stiffness.mode, StiffnessMode::damage);
    EXPECT_EQ(c.numerics.N, 201);
    EXPECT_EQ(c.interior(), 199);
    EXPECT_DOUBLE_EQ(c.numerics.tau, 0.005);
    EXPECT_EQ(c.experiment.kappa_list, (std::vector<double>{0.01, 0.04}));
    EXPECT_EQ(c.experiment.probes, (std::vector<double>{1.0, 2.5}));
    EXPECT_EQ(c.experiment.start, "rest");
    EXPECT_EQ(c.output.dir, "runs/a");
    EXPECT_FALSE(c.output.profiles);
}

TEST(Config, RejectsMalformedInput) {
    EXPECT_THROW(parse_config_text("[model]\nkapa = 0.1\n"), ConfigError);
    EXPECT_THROW(parse_config_text("[modle]\nkappa = 0.1\n"), ConfigError);
    EXPECT_THROW(parse_config_text("[model]\nkappa = \"big\"\n"), ConfigError);
    EXPECT_THROW(parse_config_text("[model]\nkappa = -1.0\n"), ConfigError);
    EXPECT_THROW(parse_config_text("[numerics]\nN = 40\n"), ConfigError);
    EXPECT_THROW(parse_config_text("[experiment]\nstart = \"sideways\"\n"), ConfigError);
    EXPECT_THROW(parse_config_text("[model\nkappa = 1\n"), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/run.toml"), ConfigError);
}

TEST(Config, OverridesApplyAndValidate) {
    RunConfig c;
    Overrides o;
    o.v_inf = 0.3;
    o.kappa = 0.01;
    o.N = 101;
    o.tau = 0.02;
    o.out = "x";
    apply_overrides(c, o);
    EXPECT_DOUBLE_EQ(c.experiment.v_inf, 0.3);
    EXPECT_DOUBLE_EQ(c.model.kappa, 0.01);
    EXPECT_EQ(c.numerics.N, 101);
    EXPECT_DOUBLE_EQ(c.numerics.tau, 0.02);
    EXPECT_EQ(c.output.dir, "x");
    Overrides bad;
    bad.N = 100;
    EXPECT_THROW(apply_overrides(c, bad), ConfigError);
}

TEST(Commands, SteadyMatchesLibraryOutput) {
    const fs::path out = scratch_dir("steady");
    RunConfig c = small(out);
    c.model.kappa = 0.16;
    c.experiment.v_inf = 0.6;
    const CommandResult r = dispatch("steady", c);
    EXPECT_EQ(r.exit_code, exit_ok);
    const SteadyState st = solve_steady(c.model, Grid1D(1.0, 39), 0.6);
    std::ostringstream os;
    write_steady_csv(os, st);
    EXPECT_EQ(slurp(out / "steady.csv"), os.str());
    EXPECT_DOUBLE_EQ(r.summary["sigma"].get<double>(), st.sigma);
    EXPECT_TRUE(fs::exists(out / "summary.json"));
    fs::remove_all(out);
}

TEST(Commands, SweepIsDeterministicAcrossThreadCounts) {
    std::string first;
    for (int threads : {1, 2, 2}) {
        const fs::path out = scratch_dir("sweep" + std::to_string(threads));
        RunConfig c = small(out);
        c.experiment.kappa_list = {0.04, 0.16};
        c.experiment.v_inf_list = {0.1, 0.6};
        c.experiment.threads = threads;
        EXPECT_EQ(dispatch("sweep-steady", c).exit_code, exit_ok);
        const std::string s = slurp(out / "sweep_summary.csv");
        EXPECT_EQ(s.rfind("kappa,v_inf,sigma,h_star,theta_min,pi_max\n", 0), 0u);
        if (first.empty()) first = s;
        EXPECT_EQ(s, first);
        fs::remove_all(out);
    }
}

TEST(Commands, LimitSummary) {
    const fs::path out = scratch_dir("limit");
    RunConfig c = small(out);
    c.experiment.v_inf = 0.4;
    const CommandResult r = dispatch("limit", c);
    EXPECT_NEAR(r.summary["pi_star"].get<double>(), 1.4923, 1e-4);
    EXPECT_NEAR(r.summary["pi_circ"].get<double>(), 0.6193, 1e-4);
    EXPECT_TRUE(fs::exists(out / "R_hull.csv"));
    EXPECT_TRUE(fs::exists(out / "plateau.csv"));
    fs::remove_all(out);
}

TEST(Commands, SliderWritesPhasePortrait) {
    const fs::path out = scratch_dir("slider");
    RunConfig c = small(out);
    c.experiment.v_inf = 0.18;
    c.experiment.T = 20.0;
    const CommandResult r = dispatch("slider", c);
    EXPECT_EQ(r.exit_code, exit_ok);
    const std::string s = slurp(out / "phase.csv");
    EXPECT_EQ(s.rfind("t,sigma,theta_bar,pi\n", 0), 0u);
    fs::remove_all(out);
}

TEST(Commands, ExitCodes) {
    EXPECT_EQ(run_guarded([] { return CommandResult{}; }), exit_ok);
    EXPECT_EQ(run_guarded([]() -> CommandResult { throw ConfigError("bad"); }), exit_config);
    EXPECT_EQ(run_guarded([]() -> CommandResult { throw NonConvergence("x", 1.0, 3); }), exit_solver);
    EXPECT_EQ(run_guarded([] { return dispatch("no-such-command", RunConfig{}); }), exit_config);
    RunConfig c;
    c.model.rho = 0.0;
    c.output.dir = scratch_dir("evolve").string();
    EXPECT_EQ(run_guarded([&] { return dispatch("evolve-full", c); }), exit_config);
}

TEST(Presets, MapToCommands) {
    const auto names = preset_names();
    EXPECT_EQ(names.size(), 7u);
    RunConfig base;
    base.output.dir = "root";
    for (const auto& n : names) {
        const auto jobs = preset_jobs(n, base);
        EXPECT_FALSE(jobs.empty()) << n;
        for (const auto& j : jobs) {
            EXPECT_NO_THROW(j.config.validate());
            EXPECT_EQ(fs::path(j.config.output.dir), fs::path("root") / n / j.subdir);
        }
    }
    const auto fig9 = preset_jobs("fig9", base);
    EXPECT_EQ(fig9.back().command, "slider-bifurcate");
    EXPECT_DOUBLE_EQ(fig9.front().config.experiment.v_inf, 0.175);
    EXPECT_THROW(preset_jobs("fig2", base), ConfigError);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
    std::vector<int> hits(100, 0);
    parallel_for(100, 3, [&](int i) { ++hits[i]; });
    for (int h : hits) EXPECT_EQ(h, 1);
}
