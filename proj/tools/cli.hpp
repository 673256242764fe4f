#ifndef TWOLEVEL_TOOLS_CLI_HPP
#define TWOLEVEL_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace twolevel::cli {

inline constexpr char const* tool_version = "0.1.0";

enum ExitCode : int { ok = 0, bad_arguments = 2, integration_failed = 3 };

/// Runs one command line (without the program name) and returns the exit code.
int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);

/// Frequency quantity: plain number (Hartree), or suffixed with `ev`,
/// `um` / `cm` (vacuum wavelength).
double parse_frequency(std::string_view text);

/// Time quantity: plain number (a.u.), or suffixed with `fs`, `ps`, `ns`.
double parse_time(std::string_view text);

}  // namespace twolevel::cli

#endif  // TWOLEVEL_TOOLS_CLI_HPP
