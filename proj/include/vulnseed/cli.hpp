#pragma once

#include <iosfwd>

namespace vulnseed {

/// Exit codes of the command line front end.
enum ExitCode : int {
    exit_ok = 0,
    exit_failures = 1,  // partial failure: quarantined sites, failed validation
    exit_usage = 2,     // bad configuration, missing inputs, malformed reports
};

/// Entry point of the `vulnseed` executable. Subcommands: mutate, validate, diff, score, run.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vulnseed
