#pragma once

// Command-line front end: verbs check, cohomology, monodromy, delzant, glue,
// moduli and catalog; global flags --json and --verbose.
//
// Exit codes: 0 success, 1 validation or obstruction failure, 2 usage or
// parse error.

#include <ostream>
#include <string>
#include <vector>

namespace intaff {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace intaff
