#pragma once

// Orchestration behind the command-line tool.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "trivine/io.hpp"
#include "trivine/report.hpp"

namespace trivine {

enum class Command { Fit, Sweep, Simulate };

struct RunConfig {
    Command command = Command::Fit;
    std::string data_path;
    std::string scenario_path;
    std::vector<MarginKind> margins{MarginKind::NormalLogit};
    std::vector<std::string> families{"BVN"};  // family tokens, see parse_families
    std::vector<Permutation> perms{Permutation{}};
    bool truncate = false;
    int nq = 15;
    int starts = 3;
    int max_iter = 500;
    std::optional<std::uint64_t> seed;
    // "default" (normal margins, BVN edges, permutation 1), "none", or a model string.
    std::string baseline = "default";
    std::string json_path;
    std::string report_path;
    int threads = 1;
};

// Throws std::invalid_argument on an invalid configuration.
void validate(const RunConfig& config);

std::vector<ModelSpec> config_specs(const RunConfig& config);
std::optional<ModelSpec> baseline_spec(const RunConfig& config);

struct RunOutput {
    Json document;
    std::string text;
    std::vector<std::string> warnings;
};

// Fit or sweep over in-memory data.
RunOutput run_fit(const RunConfig& config, const InputTable& input);
// Simulation from a parsed scenario; config.seed overrides its seed.
RunOutput run_simulation(const RunConfig& config, SimScenario scenario);

// Reads inputs, runs, writes the outputs. Returns the process exit code:
// 0 success, 2 configuration or input error, 1 anything else.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace trivine
