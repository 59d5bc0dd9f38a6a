#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qlab::cli {

/// Exit codes shared by every command.
enum ExitCode : int {
    kOk = 0,
    kInputError = 1,
    kUnknown = 2,
    kDiscrepancy = 3,
};

struct Environment {
    /// Value of QLAB_MAX_BOUND, if set.
    std::optional<std::string> max_bound;

    static Environment from_process();
};

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Environment& env = {});

} // namespace qlab::cli
