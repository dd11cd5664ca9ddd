#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "beamlu/diagnostics.hpp"
#include "config.hpp"

namespace beamlu::cli {

inline constexpr int kSchemaVersion = 1;

/// One record per (matrix instance, blocking, method, tau_hat) tuple.
struct RunRecord {
    std::string matrix;
    std::string blocking;
    std::string method;
    double tau_hat = 0.0; // 0 for non-beam methods
    std::uint64_t seed = 0;
    std::size_t n = 0;

    double tau_abs = 0.0;
    std::size_t mods = 0;
    std::map<std::string, double> growth; // by norm name
    double residual_initial = 0.0;
    double residual_final = 0.0;
    std::size_t refine_iters = 0;
    bool woodbury_used = false;
    bool diverged = false;
    std::vector<BoundCheck> checks;
    bool numerical_failure = false;
    std::string failure_what;
    double wall_ms = 0.0;
};

struct RunOutcome {
    std::vector<RunRecord> records;
    bool any_check_failed = false;
    bool any_numerical_failure = false;
};

RunOutcome execute(const ExperimentConfig& cfg);

std::string json_report(const ExperimentConfig& cfg, const RunOutcome& out);
std::string csv_report(const RunOutcome& out);

/// Full `run` command: parse, execute, write reports.
/// Exit codes: 0 all checks satisfied and no numerical failures, 1 usage or
/// config errors, 2 check failure or numerical failure.
int run_command(const std::string& config_path, const std::string& output_override,
                const std::string& format_override, std::size_t jobs_override, bool quiet);

} // namespace beamlu::cli
