#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sras::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs one `sras` invocation. `args` excludes the program name. Results go to
/// `out` (or to --out files), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sras::cli
