#pragma once

// Run configuration: a TOML file with [model], [numerics], [experiment] and [output]
// tables, plus command-line overrides. Unknown keys are rejected.

#include <optional>
#include <string>
#include <vector>

#include "rsf/model.hpp"

namespace rsf::cli {

struct NumericsConfig {
    int N = 401;  // grid nodes including the two boundary nodes; must be odd
    double tau = 0.01;
    double tol = 1e-10;
    int max_iter = 500;
    double damping = 0.5;
    double dt = 0.01;  // slider step
};

struct ExperimentConfig {
    double v_inf = 0.6;
    double T = 200.0;
    std::vector<double> kappa_list;
    std::vector<double> v_inf_list;
    double h = 0.3;                // slider plastic-zone width
    std::string start = "steady";  // evolution start: "steady" (perturbed) or "rest"
    double perturbation = 1e-3;
    std::optional<double> sigma0, theta0;  // explicit slider or evolution start
    std::vector<double> probes;
    int record_every = 1;
    int ledger_every = 10;
    double ramp = 0.0;  // smooth start-up time for v_inf in evolve-full; 0 means constant
    double v_min = 0.17, v_max = 0.18;
    int samples = 21;
    double pi_max = 10.0;
    int threads = 0;  // 0 means hardware concurrency
};

struct OutputConfig {
    std::string dir = "out";
    bool profiles = true;
};

struct RunConfig {
    ModelParams model;
    NumericsConfig numerics;
    ExperimentConfig experiment;
    OutputConfig output;

    // Throws ConfigError on any inconsistency.
    void validate() const;
    int interior() const { return numerics.N - 2; }
};

RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");
RunConfig load_config(const std::string& path);

struct Overrides {
    std::optional<double> v_inf, kappa, tau;
    std::optional<int> N;
    std::optional<std::string> out;
};

void apply_overrides(RunConfig& cfg, const Overrides& o);

}  // namespace rsf::cli
