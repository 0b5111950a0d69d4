#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "amelu/core.hpp"

namespace amelu::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kPass = 0, kError = 1, kFail = 2 };

/// Radians as a decimal literal or a multiple of pi: "1.5", "pi", "-pi/2", "2*pi/3".
double parse_angle(std::string_view text);

/// "j1,...,jN=theta" -> (tuple, angle).
std::pair<Tuple, double> parse_phase(std::string_view text);

/// Comma-separated angles.
std::vector<double> parse_theta_grid(std::string_view text);

/// %.17g, enough digits for a lossless double round trip.
std::string format_double(double v);

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace amelu::cli
