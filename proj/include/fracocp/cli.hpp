#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fracocp {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfigError = 1,
    kExitNumericalAbort = 2,
    kExitIoError = 3,
};

/// Entry point of the `fracocp` tool. `args` excludes the program name.
///
///   simulate --config FILE [--alpha V] [--output-dir D] [--jobs N]
///   optimize --config FILE [--output-dir D] [--jobs N] [--paper-adjoint]
///   compare  --config FILE [--svg] [--jobs N] [--output-dir D] [--paper-adjoint]
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace fracocp
