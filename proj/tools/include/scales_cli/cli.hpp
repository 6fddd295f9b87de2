#pragma once

#include <ostream>

namespace scales::cli {

// Parses argv, runs one subcommand and writes its output. Returns 0 on
// success, 1 on domain errors, 2 when check-theorems finds a violated arrow,
// and CLI11's code for usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace scales::cli
