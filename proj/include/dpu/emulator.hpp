// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#pragma once

// Bit-accurate INT8 emulation of the Conv PE and DWC PE datapaths.
//
// Quantization is symmetric per-tensor with power-of-two scales. The
// accumulator (input_exp + weight_exp) gets the int32 bias, then the NL stage
// applies the activation and one rounding right shift, and saturates to int8.
// Output scale_exp = input_exp + weight_exp + requant_shift.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "dpu/layer.hpp"
#include "dpu/qtensor.hpp"

namespace dpu::emu {

inline constexpr int kAccBits = 48;
inline constexpr std::int64_t kAccMax = (std::int64_t{1} << (kAccBits - 1)) - 1;
inline constexpr std::int64_t kAccMin = -(std::int64_t{1} << (kAccBits - 1));

using FeatureVector = std::array<std::int8_t, 16>;
/// w[i][o]: input channel i, output lane o.
using WeightTile = std::array<std::array<std::int8_t, 8>, 16>;

struct Accumulator {
    std::array<std::int64_t, 8> lanes{};
    bool operator==(const Accumulator&) const = default;
};

/// Throws OverflowError when v is outside the signed 48-bit range.
std::int64_t check_acc(std::int64_t v);

Accumulator mac_1x16x8(const FeatureVector& f, const WeightTile& w, const Accumulator& acc_in);

/// Chained MACs: core j adds its product to the partial sum received over
/// the cascade from core j-1. Throws Error on empty or mismatched inputs.
Accumulator cascade_chain(std::span<const FeatureVector> f_tiles,
                          std::span<const WeightTile> w_tiles);

enum class Activation { identity, relu, leaky_relu };

struct NlSpec {
    Activation kind = Activation::identity;
    int alpha_shift = 3;    ///< leaky slope 2^-alpha_shift
    int requant_shift = 0;  ///< right shift; negative values shift left

    bool operator==(const NlSpec&) const = default;
};

/// Right shift by `shift` rounding half away from zero (left shift if negative).
std::int64_t round_shift(std::int64_t v, int shift);
std::int8_t saturate_i8(std::int64_t v);
/// Bias-added accumulator -> activation -> requantize -> saturate.
std::int8_t apply_nl(std::int64_t acc, const NlSpec& nl);

struct EmuStats {
    std::int64_t mac_ops = 0;         ///< 1x16x8 (conv) or 2x16 (dwc) vector MAC issues
    std::int64_t cascade_chains = 0;
    std::int64_t atomic_ops = 0;
    std::int64_t dwc_cycles = 0;
};

/// Tiled Conv PE dataflow. input (1, IH, IW, IC), weights (OC, K, K, IC).
QTensor conv_forward(const QTensor& input, const QTensor& weights,
                     std::span<const std::int32_t> bias, const LayerShape& layer,
                     const NlSpec& nl, EmuStats* stats = nullptr);

/// Tiled DWC PE dataflow. input (1, IH, IW, C), weights (1, K, K, C).
QTensor dwc_forward(const QTensor& input, const QTensor& weights,
                    std::span<const std::int32_t> bias, const LayerShape& layer,
                    const NlSpec& nl, EmuStats* stats = nullptr);

/// Standard convolution pushed through the DWC PE atomic path: for every
/// output channel, IC lanes are convolved like depth-wise channels and the
/// RACNL core reduces the lanes.
QTensor conv_forward_dwc_path(const QTensor& input, const QTensor& weights,
                              std::span<const std::int32_t> bias, const LayerShape& layer,
                              const NlSpec& nl, EmuStats* stats = nullptr);

/// Naive nested-loop reference for conv and dwc layers (no tiling).
QTensor reference_conv(const QTensor& input, const QTensor& weights,
                       std::span<const std::int32_t> bias, const LayerShape& layer,
                       const NlSpec& nl);

// MISC core operations.
QTensor eltwise_add(const QTensor& a, const QTensor& b, int out_shift);
QTensor maxpool(const QTensor& input, int k, int s);
QTensor avgpool(const QTensor& input, int k, int s);

/// Integer division rounding half away from zero.
std::int64_t div_round(std::int64_t num, std::int64_t den);

struct DiffReport {
    std::size_t elements = 0;
    std::size_t mismatches = 0;
    int max_abs_diff = 0;
    bool equal() const { return mismatches == 0; }
};

DiffReport diff(const QTensor& a, const QTensor& b);

}  // namespace dpu::emu
