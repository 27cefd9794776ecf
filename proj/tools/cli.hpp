// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dpu::cli {

/// Runs one command line (without argv[0]). Returns 0 on success, 1 on a
/// domain error or failed check, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dpu::cli
