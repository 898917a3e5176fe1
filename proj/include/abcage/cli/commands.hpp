#pragma once

#include <iosfwd>

namespace abcage::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Entry point of the `abcage` tool. Exit status 0 on success, 2 for usage
/// or configuration errors, 1 for runtime failures such as an unwritable
/// output directory.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace abcage::cli
