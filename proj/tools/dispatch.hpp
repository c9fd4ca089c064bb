#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mtk::cli {

inline constexpr const char* kVersion = "0.1.0";

// Parses and runs exactly one subcommand, writing the result envelope to
// `out` (JSON) and structured errors to `err`. Returns the process exit
// code: ok=0, config_error=1, domain_error=2, numeric_error=3.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Runs each non-empty, non-comment line of `path` as an argv through
// dispatch; one failing step does not abort the rest. Returns the max of
// the per-step exit codes.
int run_scenario(const std::string& path, std::ostream& out, std::ostream& err);

}  // namespace mtk::cli
