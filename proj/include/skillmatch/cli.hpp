#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace skillmatch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs one command line (without the program name). Never calls exit().
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace skillmatch::cli
