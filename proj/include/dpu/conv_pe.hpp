// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#pragma once

// Convolution PE model.
//
// A MAC core runs 1x16x8 MACs; reusing each weight tile over 4 rows and each
// feature vector over 4 OC groups gives a 4(IH) x 16(IC) x 32(OC) core tile
// in 16 cycles. At graph level the weights are broadcast to 2 cores, the
// feature maps to 4 cores and 4 cores cascade over IC, so one 16-cycle step of
// the 32 MAC cores covers 8 pixels x 64 IC x 128 OC. With the ACC partial-sum
// buffer sized for a 4 x 16 pixel tile per core, a full graph iteration is
// 8 x 16 = 128 pixels in 16 steps (256 cycles).

#include <cstdint>
#include <string>
#include <vector>

#include "dpu/arch.hpp"
#include "dpu/dse.hpp"
#include "dpu/layer.hpp"

namespace dpu::conv {

struct MacCoreTile {
    int ih = 4;
    int ic = 16;
    int oc = 32;
    int cycles = 16;
};

struct GraphGranularity {
    int ih = 8;
    int ic = 64;
    int oc = 128;
    int wt_broadcast = 2;
    int fm_broadcast = 4;
    int cascade_len = 4;
    int mac_cores = 32;
    int iw = 16;  ///< pixel tile width held in the ACC buffers
    MacCoreTile core;

    std::int64_t pixels_per_iteration() const { return std::int64_t{ih} * iw; }
    std::int64_t cycles_per_iteration() const { return std::int64_t{core.cycles} * iw; }
};

/// Structural identities between the core tile and the graph granularity.
std::vector<std::string> check_granularity(const GraphGranularity& g);

struct BufferPlan {
    int ih = 0;
    int iw = 0;
    std::int64_t psum_stack = 0;
    std::int64_t acc_out = 0;
    std::int64_t bias = 0;
    std::int64_t nl_out = 0;
    int banks_per_buffer = 2;
    int total_banks = 0;
    std::int64_t total_bytes = 0;  ///< psum + 2 x (acc_out + bias + nl_out)
    bool feasible = false;
    std::vector<std::string> violations;
    std::vector<std::string> warnings;
};

inline constexpr int kAccBytes = 4;
inline constexpr int kOutBytes = 1;
/// Cap on one ping-pong buffer role (two 8 KB halves).
inline constexpr std::int64_t kPingPongCapBytes = 2 * 8192;

BufferPlan buffer_plan(int ih, int iw, const ArchConfig& arch = default_arch());

/// Largest iw whose ACC output buffer fits the ping-pong cap.
int max_iw(int ih);

struct TileChoice {
    int ih = 0;
    int iw = 0;
    std::vector<std::string> warnings;
};

TileChoice choose_tile(const dse::ParallelismScheme& scheme);

/// Cycle estimate of a standard convolution on one Conv PE.
CycleEstimate layer_cycles(const LayerShape& layer, const GraphGranularity& g = {},
                           const ArchConfig& arch = default_arch(),
                           dse::BandwidthSplit split = {});

}  // namespace dpu::conv
