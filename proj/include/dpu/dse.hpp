// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#pragma once

// Single-core bandwidth/parallelism model. One AIE MAC step is a 1x16x8
// INT8 GEMM: a 128-bit feature vector against a 1024-bit weight tile.
// Reusing a weight tile across WTReuse feature vectors and a feature vector
// across FMReuse weight tiles gives
//
//   FMLoad = ceil(WTReuse * 128  / BW_f)
//   WTLoad = ceil(FMReuse * 1024 / BW_w)
//   T_mac  = WTReuse * FMReuse
//
// and a scheme is balanced when both loads fit under T_mac.

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace dpu::dse {

inline constexpr int kFeatureVectorBits = 16 * 8;     ///< 16 int8 input channels
inline constexpr int kWeightTileBits = 16 * 8 * 8;    ///< 16 IC x 8 OC int8
inline constexpr int kOcPerMac = 8;
inline constexpr int kCoreInputBudgetBits = 192;
inline constexpr int kCoreOutputBudgetBits = 128;

struct BandwidthSplit {
    int bw_f = 32;  ///< bits/cycle for feature maps
    int bw_w = 16;  ///< bits/cycle for weights

    auto operator<=>(const BandwidthSplit&) const = default;
};

struct ParallelismScheme {
    BandwidthSplit split;
    std::int64_t fm_reuse = 0;
    std::int64_t wt_reuse = 0;
    std::int64_t oc_required = 0;
    std::int64_t pixels_required = 0;
    std::int64_t t_mac = 0;
    std::int64_t fm_load = 0;
    std::int64_t wt_load = 0;
    double ctc = 0.0;
    std::vector<std::string> warnings;

    bool balanced() const { return fm_load <= t_mac && wt_load <= t_mac; }
};

std::int64_t fm_load_cycles(std::int64_t wt_reuse, int bw_f);
std::int64_t wt_load_cycles(std::int64_t fm_reuse, int bw_w);

/// Fills every derived field of a scheme for the given reuse factors.
ParallelismScheme evaluate(BandwidthSplit split, std::int64_t fm_reuse, std::int64_t wt_reuse,
                           int input_budget_bits = kCoreInputBudgetBits);

/// Smallest reuse factors reaching CTC >= 1. Exceeding the per-core input
/// budget is reported as a warning.
ParallelismScheme min_balanced_scheme(BandwidthSplit split,
                                      int input_budget_bits = kCoreInputBudgetBits);

/// One minimal scheme per split, sorted by (bw_f, bw_w).
std::vector<ParallelismScheme> sweep(std::vector<BandwidthSplit> splits,
                                     int input_budget_bits = kCoreInputBudgetBits);

std::vector<BandwidthSplit> grid(const std::vector<int>& bw_f, const std::vector<int>& bw_w);

}  // namespace dpu::dse
