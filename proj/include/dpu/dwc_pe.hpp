// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#pragma once

// Depth-wise convolution PE model.
//
// Each MAC core owns one feature-map tile and the full kernel. An atomic
// computation produces 1(OH) x 2(OW) x 16(C); per kernel row the taps are
// consumed in pairs (weights zero-padded to an even count), one cycle per
// output pixel, giving 2 * k * ceil(k/2) cycles. A chain iteration produces
// 2(OH) x 8(OW) x 16(C), i.e. 8 atomic computations.

#include <cstdint>
#include <string>
#include <vector>

#include "dpu/arch.hpp"
#include "dpu/layer.hpp"

namespace dpu::dwc {

inline constexpr int kAtomicOh = 1;
inline constexpr int kAtomicOw = 2;
inline constexpr int kLanes = 16;
inline constexpr int kIterOh = 2;
inline constexpr int kIterOw = 8;
inline constexpr int kPixelBits = kLanes * 8;
inline constexpr int kDefaultBwF = 32;

bool is_supported(int k, int s);

struct DwcAtomicOp {
    int k = 3;
    int s = 1;
    int out_oh = kAtomicOh;
    int out_ow = kAtomicOw;
    int out_c = kLanes;
    std::int64_t cycles = 0;
};

DwcAtomicOp atomic_op(int k, int s);
std::int64_t atomic_cycles(int k, int s);

/// Input tile for a 2 x 8 output block is (s + k) x (7s + k) pixels of 16
/// channels, streamed at bw_f bits/cycle.
std::int64_t fm_load_cycles_dwc(int k, int s, int bw_f = kDefaultBwF);

struct DwcIteration {
    int k = 0;
    int s = 0;
    int out_oh = kIterOh;
    int out_ow = kIterOw;
    int out_c = kLanes;
    int atomic_ops = 0;
    std::int64_t compute_cycles = 0;
    std::int64_t fm_load_cycles = 0;
    double ctc = 0.0;
    Bound bound = Bound::compute;
};

DwcIteration iteration_ctc(int k, int s, int bw_f = kDefaultBwF);

struct DwcPeLayout {
    int groups = 3;
    int pairs_per_group = 8;
    int total_cores = 48;
    int weight_ports_per_cluster = 1;
    int rows_per_cluster = 2;
    int output_channels_needed = 24;
    int output_channels_native = 18;

    int pairs() const { return groups * pairs_per_group; }
    int clusters() const { return pairs() / rows_per_cluster; }
    bool needs_neighbor_tiles() const { return output_channels_needed > output_channels_native; }
};

std::vector<std::string> check_layout(const DwcPeLayout& layout);

/// Cycles for a depth-wise layer: iterations spread over the 24 MAC-RACNL
/// pairs in waves, each wave bounded by max(compute, fm load).
CycleEstimate dwc_layer_cycles(const LayerShape& layer, int bw_f = kDefaultBwF,
                               const ArchConfig& arch = default_arch());

struct PeInterfaceDemand {
    PeKind kind = PeKind::conv;
    int in_streams = 0;
    int out_streams = 0;
    int tiles = 0;
    bool borrows_neighbor_tiles = false;
};

struct InterfaceReport {
    std::vector<PeInterfaceDemand> per_pe;
    int tiles_required = 0;
    int tiles_available = 0;
    bool feasible = true;
    std::vector<std::string> violations;
};

PeInterfaceDemand interface_demand(PeKind kind, const ArchConfig& arch);
InterfaceReport interface_budget(const DpuConfig& dpu, const ArchConfig& arch);

}  // namespace dpu::dwc
