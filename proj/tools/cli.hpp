#pragma once

#include <iostream>

namespace attractor::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

// Subcommands: run, demo separatrix, presets.
int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr);

} // namespace attractor::cli
