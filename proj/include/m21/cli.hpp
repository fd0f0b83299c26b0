// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: analyze, scan, rho-delta, recommend, verify.
// Exit codes: 0 success, 1 input error, 2 verification failure.

#ifndef M21_CLI_HPP
#define M21_CLI_HPP

#include <string>
#include <vector>

namespace m21 {

int run_cli(const std::vector<std::string>& args);

}  // namespace m21

#endif
