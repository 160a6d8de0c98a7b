#pragma once

#include <ostream>

namespace girg {

// Entry point of the girg-lab tool. Exit codes: 0 success, 1 validation failure
// or bad usage, 2 I/O error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace girg
