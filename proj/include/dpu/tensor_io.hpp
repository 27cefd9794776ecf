// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#pragma once

// Tensor files.
//
// Text:   first line "n,h,w,c,scale_exp", then n*h*w*c int8 values in
//         row-major NHWC order, separated by commas and/or whitespace.
//         Lines starting with '#' are comments.
// Binary: magic "QT8\0", five little-endian int32 (n, h, w, c, scale_exp),
//         then n*h*w*c int8 bytes.
//
// Binary is detected by the magic, not the extension. Bias files are a flat
// list of int32 values in the text syntax, without a header.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dpu/qtensor.hpp"

namespace dpu {

enum class TensorFormat { text, binary };

QTensor read_tensor(const std::filesystem::path& path);
QTensor parse_tensor_text(const std::string& text);
QTensor parse_tensor_binary(const std::string& bytes);

void write_tensor(const std::filesystem::path& path, const QTensor& t, TensorFormat fmt);
std::string format_tensor_text(const QTensor& t);
std::string format_tensor_binary(const QTensor& t);

std::vector<std::int32_t> read_int32_list(const std::filesystem::path& path);
std::vector<std::int32_t> parse_int32_list(const std::string& text);

}  // namespace dpu
