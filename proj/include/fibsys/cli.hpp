#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fibsys::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNotPerfect = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable holding the default output format (text, json or dot).
inline constexpr const char* kFormatEnv = "FIBSYS_FORMAT";

/// Runs one command line; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fibsys::cli
