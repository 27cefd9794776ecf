// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#pragma once

// Whole-network mapping onto a DpuConfig.
//
// Layers run one after another over the whole batch. Each PE carries one
// batch element, so a layer needs ceil(batch / eligible PEs) rounds; weights
// come from DDR once per batch and are broadcast to all PEs. A layer costs
// max(compute, fm load, wt load, DDR) cycles. The one exception to serial
// execution is the low-channel unit: it runs the first layer of the next batch
// while the AIE array works on the rest of the current one.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dpu/arch.hpp"
#include "dpu/layer.hpp"

namespace dpu::sched {

enum class Engine { conv_pe, dwc_pe, low_channel, misc };

std::string_view to_string(Engine e);

struct ScheduleOptions {
    int batch = 1;
    /// On-chip FM buffer per engine; activation traffic beyond it goes to DDR.
    std::int64_t fm_buffer_bytes = 0;
    /// Run dwc layers on Conv PEs as dense convolutions when no DWC PE exists.
    bool force_dwc_on_conv = false;
};

struct DdrCost {
    std::int64_t weight_cycles = 0;
    std::int64_t activation_cycles = 0;
    std::int64_t total() const { return weight_cycles + activation_cycles; }
};

/// DDR transfer cycles (AIE clock) for a whole batch. Weights are counted
/// once, activation spill once per image.
DdrCost ddr_cycles(const LayerShape& layer, const ArchConfig& arch, int batch,
                   std::int64_t fm_buffer_bytes = 0);

/// DSP58 count of the low-channel unit: ceil(h * ic * oc / pack).
std::int64_t low_channel_dsp_count(int h, int ic, int oc, int pack);

/// Per-image cycles of `layer` on the low-channel unit, in its own clock.
/// Kernel width is folded into the IC parallelism.
std::int64_t low_channel_cycles(const LayerShape& layer, const LowChannelUnit& unit);

struct LayerAssignment {
    Engine engine = Engine::conv_pe;
    std::vector<int> pe_indices;  ///< PEs that execute the layer (empty for LC unit)
    int engines_used = 1;         ///< engines busy in one round
    int rounds = 1;
    CycleEstimate per_image;      ///< one image on one engine, AIE cycles
    DdrCost ddr;
    std::int64_t cycles = 0;      ///< whole batch
    Bound bound = Bound::compute;
    double utilization = 0.0;
    bool overlapped = false;      ///< runs concurrently with the AIE array
};

struct Schedule {
    std::vector<LayerShape> layers;
    std::vector<LayerAssignment> assignments;  ///< parallel to layers
    DpuConfig dpu;
    ArchConfig arch;
    int batch = 1;
    /// Critical path of one batch: the overlapped layer (if any) followed by
    /// every AIE/MISC layer.
    std::int64_t total_cycles = 0;
    /// Cycles between consecutive batches once the low-channel stage overlaps.
    std::int64_t steady_cycles = 0;
    double estimated_latency_s = 0.0;
    double estimated_fps = 0.0;
    std::int64_t useful_macs = 0;  ///< per image
    std::vector<std::string> warnings;
};

/// Throws Error when dwc layers have no DWC PE to run on (unless forced) or
/// the configuration is invalid.
Schedule assign(const std::vector<LayerShape>& layers, const DpuConfig& dpu,
                const ArchConfig& arch = default_arch(), const ScheduleOptions& opts = {});

struct LayerRow {
    std::string name;
    LayerKind kind = LayerKind::conv;
    Engine engine = Engine::conv_pe;
    std::int64_t cycles = 0;
    std::int64_t compute_cycles = 0;
    std::int64_t fm_load_cycles = 0;
    std::int64_t wt_load_cycles = 0;
    std::int64_t ddr_cycles = 0;
    double utilization = 0.0;
    Bound bound = Bound::compute;
    bool overlapped = false;
};

struct Report {
    std::vector<LayerRow> rows;
    int n_pe = 0;
    int batch = 1;
    std::int64_t total_cycles = 0;
    std::int64_t steady_cycles = 0;
    double latency_s = 0.0;
    double fps = 0.0;
    double peak_fraction = 0.0;
    std::int64_t useful_macs = 0;
    std::optional<std::size_t> lowest_utilization_conv;  ///< row index
    std::vector<std::string> warnings;
};

Report report(const Schedule& schedule);

std::string to_text(const Report& r);
std::string to_csv(const Report& r);
nlohmann::json to_json(const Report& r);

std::string schedule_text(const Schedule& s);

}  // namespace dpu::sched
