#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace p3dc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Entry point behind the `p3dc` binary. `args` excludes the program name.
/// Errors go to `err` as `error_code: <code>: <message>`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace p3dc::cli
