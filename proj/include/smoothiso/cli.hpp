#pragma once

#include <string>
#include <vector>

namespace smoothiso {

// Command-line front end. Exit codes: 0 success (test: no rejection),
// 10 test rejection, 2 unknown subcommand, 3 invalid configuration,
// 4 runtime failure.
int run(const std::vector<std::string>& args);

}  // namespace smoothiso
