#pragma once

#include <iosfwd>

namespace gsh::cli {

/// Command-line entry point. Exit codes: 0 success, 1 validation error,
/// 2 numerical failure (saturation/exhaustion under --strict, demo failure).
int run(int argc, const char* const* argv, std::ostream& out);
int run(int argc, const char* const* argv);

}  // namespace gsh::cli
