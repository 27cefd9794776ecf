// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#pragma once

// Workload files list layers in execution order, one per line:
//
//   # name   kind     ih  iw  ic  oc  k  s  pad
//   conv1    conv     224 224 3   64  7  2  3
//   pool1    maxpool  112 112 64  64  3  2  1
//
// kind is one of conv, dwc, pool (aliases maxpool, avgpool), eltwise.
// Output dims, weight bytes and activation bytes are derived. Blank lines and
// '#' comments are ignored.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dpu/layer.hpp"

namespace dpu {

/// Throws ParseError (with the 1-based line) on malformed or invalid layers.
std::vector<LayerShape> parse_workload(const std::string& text);
std::vector<LayerShape> ingest(const std::filesystem::path& path);

std::string format_workload(const std::vector<LayerShape>& layers);

/// Names of the bundled fixtures ("resnet50", "mobilenet_v1").
std::vector<std::string> builtin_workload_names();
/// Text of a bundled fixture; throws Error for an unknown name.
std::string_view builtin_workload_text(std::string_view name);
std::vector<LayerShape> builtin_workload(std::string_view name);

}  // namespace dpu
