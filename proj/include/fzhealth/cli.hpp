#pragma once

namespace fzh {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitData = 2,
    kExitNumerical = 3,
};

/// Entry point of the `fzhealth` tool (subcommands analyze, compare, synth,
/// summarize, plot-data). Returns the process exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace fzh
