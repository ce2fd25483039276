#ifndef CAUSAL_STRIPS_CLI_H
#define CAUSAL_STRIPS_CLI_H

#include <iosfwd>
#include <string>
#include <vector>

namespace causal_strips::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_invalid_plan = 1,
    exit_unsolvable = 2,
    exit_unsupported = 3,
    exit_budget_exceeded = 4,
    exit_usage = 64,
    exit_internal = 70,
};

inline constexpr const char *max_states_env = "CAUSAL_STRIPS_MAX_STATES";

inline constexpr const char *bench_csv_header =
    "family,n,kappa_delta,solvable,plan_length,wall_time_ms,algorithm,status";

// Runs one command line (without the program name).
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

} // namespace causal_strips::cli

#endif
