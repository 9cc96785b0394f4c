#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fraclyap/lyapunov.hpp"

namespace fraclyap::app {

enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitConfig = 2,
    kExitDivergence = 3,
    kExitViolated = 4,
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunOptions {
    int refine = 1;            // dt is divided by this
    bool swap_sides = false;   // verify only: harness self-test
    std::uint64_t seed = 42;   // stability / sweep corpus
};

struct CommandOutput {
    int exit_code = kExitOk;
    std::string body;     // CSV or JSON text, LF line endings
    std::string warning;  // for stderr; empty when there is nothing to say
};

/// Reads a JSON config file; parse failures become ConfigError.
nlohmann::json load_config(const std::string& path);

CommandOutput cmd_simulate(const nlohmann::json& cfg, const RunOptions& opts);
CommandOutput cmd_verify(const nlohmann::json& cfg, const RunOptions& opts);
CommandOutput cmd_equilibria(const nlohmann::json& cfg, const RunOptions& opts);
CommandOutput cmd_stability(const nlohmann::json& cfg, const RunOptions& opts);
CommandOutput cmd_sweep(const nlohmann::json& cfg, const RunOptions& opts);

/// The verify corpus as scan items (trajectories x orders x candidates).
std::vector<ScanItem> verify_items(const nlohmann::json& cfg, const RunOptions& opts);

/// Dispatches a subcommand, writes the body to `out_path` (or `out` when
/// empty) and maps errors to exit codes with a message on `err`.
int run(const std::string& command, const std::string& config_path, const std::string& out_path,
        const RunOptions& opts, std::ostream& out, std::ostream& err);

/// 15 significant digits with a '.' separator whatever the global locale.
std::string format_number(double v);

}  // namespace fraclyap::app
