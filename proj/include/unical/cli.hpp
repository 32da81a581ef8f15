#ifndef UNICAL_CLI_HPP
#define UNICAL_CLI_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace unical::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_not_convertible = 1,
    exit_input_error = 2,
    exit_not_well_defining = 3,
};

struct Environment {
    /// Value of UNICAL_REGISTRY: registry paths or bundled names separated by ':'.
    std::optional<std::string> registry_list;
};

Environment environment_from_process();

/// Runs one command line (without the program name) and returns its exit code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err, const Environment &env = {});

} // namespace unical::cli

#endif
