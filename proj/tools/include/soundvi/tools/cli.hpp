#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "soundvi/solver.hpp"

namespace soundvi::tools {

/// Exit statuses of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitSolverError = 3;

/// Entry point of the `soundvi` binary; args[0] is the program name.
int run_cli(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);

/// `result=<r> bounds=[<lo>,<hi>] iterations=<k> time_ms=<t>`
std::string format_result_line(SolveResult const& result);

struct ResultLine {
    double result = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    std::uint64_t iterations = 0;
    double time_ms = 0.0;
};

std::optional<ResultLine> parse_result_line(std::string_view line);

}  // namespace soundvi::tools
