#pragma once

#include <iosfwd>

namespace detnodes {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
    exit_ok = 0,
    exit_config_error = 2,
    exit_numerical_failure = 3,
    exit_check_failure = 4,
};

/// Subcommands: simulate, steady, verify-lemmas, estimate-constants, thresholds,
/// theorem1, theorem2, theorem3, sweep. Flags: --config PATH, --out DIR, --seed N.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace detnodes
