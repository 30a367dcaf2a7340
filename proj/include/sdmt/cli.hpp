#pragma once

#include <exception>
#include <iosfwd>
#include <string>
#include <vector>

namespace sdmt {

// Exit statuses of run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitNumerical = 4;

// Parses grids written as "a,b,c", "start:step:stop" or a single value.
// ValidationError on malformed text or a non-positive step.
std::vector<double> parse_grid(const std::string& text);

// Prints a one-line diagnostic for a toolkit error and returns its exit
// status. Anything that is not an sdmt::Error is rethrown.
int report_failure(std::exception_ptr failure, std::ostream& err);

// args excludes the program name. Subcommands: gain, outage-curve,
// dmt-curve, asymptote, check.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sdmt
