#pragma once

#include <ostream>

namespace fraxonium::cli {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

// Parses argv and runs one subcommand. Diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& err);

}  // namespace fraxonium::cli
