#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace phasim::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Runs one subcommand. `args` excludes the program name.
/// Returns 0 on success, 1 on usage or validation errors, 2 on runtime errors.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phasim::harness
