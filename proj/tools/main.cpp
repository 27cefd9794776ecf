// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dpu::cli::run(args, std::cout, std::cerr);
}
