#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace expmatch {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitBudget = 2;

/// Runs one CLI invocation. `args` excludes the program name. JSON goes to
/// `out`, diagnostics to `err`. Returns 0, 1 (bad input or a failed verify
/// criterion) or 2 (budget or timeout).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace expmatch
