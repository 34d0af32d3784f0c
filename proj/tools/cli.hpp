#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nesynth::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitRuntime = 3;

/// Runs the `nesynth` command line. `args` excludes the program name.
/// Diagnostics go to `err` as `CATEGORY: message`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace nesynth::cli
