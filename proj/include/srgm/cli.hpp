#pragma once

// Subcommands of the `srgm` tool. Each command validates every input before
// computing anything and writes its outputs only after all computation
// succeeded.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace srgm::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInputError = 2,
    kNumericError = 3,
    kNotConverged = 4,
};

struct FitArgs {
    std::string faults_csv;
    std::string model = "go";
    std::string time_unit = "unspecified";
    std::optional<std::string> out;
};

struct OptimizeArgs {
    std::string fit_json;
    std::string config;
    std::optional<std::string> prev_fit_json;
    std::optional<std::string> out;
    std::optional<std::string> curve_csv;
};

struct PrioritizeArgs {
    std::string metrics_csv;
    std::string config;
    std::optional<std::string> weights_json;
    std::optional<std::string> save_weights;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;  ///< overrides network.seed
};

struct DecideArgs {
    std::string policy_json;
    std::string actuals_csv;
    std::string config;
    std::optional<std::string> out;
};

struct SimulateArgs {
    std::string params_json;
    double horizon = 0.0;
    std::uint64_t seed = 1;
    std::optional<std::string> out;
};

// These throw srgm errors; run() maps them to exit codes. Without an output
// path the JSON (or CSV) goes to `out`.
int cmd_fit(const FitArgs& args, std::ostream& out);
int cmd_optimize(const OptimizeArgs& args, std::ostream& out);
int cmd_prioritize(const PrioritizeArgs& args, std::ostream& out);
int cmd_decide(const DecideArgs& args, std::ostream& out);
int cmd_simulate(const SimulateArgs& args, std::ostream& out);

/// Parses `argv`-style arguments (without the program name) and dispatches.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace srgm::cli
