#pragma once

// Subcommand wiring lives here so tests can drive the tool in-process.

#include <iostream>
#include <string>
#include <vector>

namespace bary::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;    // parse / validation problems
inline constexpr int kExitSolver = 3;   // solver failed to reach Optimal
inline constexpr int kExitSize = 4;     // a size cap refused the instance

int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

}  // namespace bary::cli

#include "bary/cli_impl.hpp"
