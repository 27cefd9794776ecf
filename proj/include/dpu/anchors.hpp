// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#pragma once

// Reference values the model must keep reproducing. Each check recomputes a
// figure published for the hardware design and compares it exactly (or at the
// stated tolerance).

#include <string>
#include <vector>

namespace dpu {

struct AnchorResult {
    std::string module;
    std::string name;
    std::string expected;
    std::string actual;
    bool pass = false;
};

std::vector<AnchorResult> run_anchor_checks();

}  // namespace dpu
