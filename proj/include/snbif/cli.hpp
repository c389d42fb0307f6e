#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace snbif {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDegraded = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitUsage = 64;

/// Entry point of the `snbif` command line; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace snbif
