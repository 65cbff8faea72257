#pragma once

// Subcommand drivers. Each writes its files below cfg.output.dir and returns a JSON
// summary (also written as summary.json). Solver failures propagate as exceptions,
// except in sweeps, where failed cells are recorded and the sweep continues.

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"

namespace rsf::cli {

enum ExitCode { exit_ok = 0, exit_config = 1, exit_solver = 2 };

struct CommandResult {
    int exit_code = exit_ok;
    nlohmann::json summary;
};

CommandResult cmd_steady(const RunConfig& cfg);
CommandResult cmd_sweep_steady(const RunConfig& cfg);
CommandResult cmd_limit(const RunConfig& cfg);
CommandResult cmd_evolve(const RunConfig& cfg);
CommandResult cmd_sm(const RunConfig& cfg);
CommandResult cmd_slider(const RunConfig& cfg);
CommandResult cmd_slider_bifurcate(const RunConfig& cfg);

struct PresetJob {
    std::string command;  // subcommand name
    std::string subdir;
    RunConfig config;
};

std::vector<std::string> preset_names();
// Throws ConfigError for an unknown name.
std::vector<PresetJob> preset_jobs(const std::string& name, const RunConfig& base);
CommandResult cmd_repro(const std::string& name, const RunConfig& base);

std::vector<std::string> command_names();
CommandResult dispatch(const std::string& command, const RunConfig& cfg);

// Runs a command and maps exceptions to exit codes, reporting errors on stderr.
int run_guarded(const std::function<CommandResult()>& fn);

// Runs body(i) for i in [0, n) on up to `threads` workers (0 means hardware concurrency).
void parallel_for(int n, int threads, const std::function<void(int)>& body);

}  // namespace rsf::cli
