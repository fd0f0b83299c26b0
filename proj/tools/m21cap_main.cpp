// SPDX-License-Identifier: Apache-2.0

#include <string>
#include <vector>

#include "m21/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return m21::run_cli(args);
}
