#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "fracground/config.hpp"

namespace fracground::cli {

/// Exit codes.
inline constexpr int kSuccess = 0;
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;

/// CSV: N,s,A,B,C,omega,sobolev,crit_exponent with s ascending.
int cmd_constants(int dimension, std::vector<double> s_list, std::ostream& out, std::ostream& err);
int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_solve(const RunConfig& config, double s, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fracground::cli
