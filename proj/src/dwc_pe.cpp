// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#include "dpu/dwc_pe.hpp"

#include <algorithm>

#include "dpu/conv_pe.hpp"
#include "dpu/error.hpp"

namespace dpu::dwc {

bool is_supported(int k, int s) { return (k == 1 || k == 3 || k == 5 || k == 7) && (s == 1 || s == 2); }

namespace {

void require_supported(int k, int s) {
    if (!is_supported(k, s))
        throw Error("unsupported dwc kernel/stride (" + std::to_string(k) + ", " +
                    std::to_string(s) + ")");
}

}  // namespace

std::int64_t atomic_cycles(int k, int s) {
    require_supported(k, s);
    return 2 * std::int64_t{k} * ceil_div(k, 2);
}

DwcAtomicOp atomic_op(int k, int s) {
    DwcAtomicOp op;
    op.k = k;
    op.s = s;
    op.cycles = atomic_cycles(k, s);
    return op;
}

std::int64_t fm_load_cycles_dwc(int k, int s, int bw_f) {
    require_supported(k, s);
    if (bw_f <= 0) throw Error("feature-map bandwidth must be > 0");
    const std::int64_t rows = std::int64_t{kIterOh - 1} * s + k;
    const std::int64_t cols = std::int64_t{kIterOw - 1} * s + k;
    return ceil_div(rows * cols * kPixelBits, bw_f);
}

DwcIteration iteration_ctc(int k, int s, int bw_f) {
    DwcIteration it;
    it.k = k;
    it.s = s;
    it.atomic_ops = (kIterOh * kIterOw) / (kAtomicOh * kAtomicOw);
    it.compute_cycles = it.atomic_ops * atomic_cycles(k, s);
    it.fm_load_cycles = fm_load_cycles_dwc(k, s, bw_f);
    it.ctc = static_cast<double>(it.compute_cycles) / static_cast<double>(it.fm_load_cycles);
    it.bound = it.ctc < 1.0 ? Bound::fm : Bound::compute;
    return it;
}

std::vector<std::string> check_layout(const DwcPeLayout& l) {
    std::vector<std::string> v;
    if (l.total_cores != l.groups * l.pairs_per_group * 2)
        v.push_back("total_cores != groups x pairs_per_group x 2");
    if (l.total_cores != kCoresPerPe) v.push_back("DWC PE must use the same 48 cores as a Conv PE");
    if (l.pairs() % l.rows_per_cluster != 0) v.push_back("pairs do not split into clusters");
    return v;
}

CycleEstimate dwc_layer_cycles(const LayerShape& layer, int bw_f, const ArchConfig& arch) {
    if (layer.kind != LayerKind::dwc)
        throw Error("dwc_layer_cycles expects a dwc layer, got " +
                    std::string(to_string(layer.kind)));
    if (layer.oh < 1 || layer.ow < 1 || layer.oc < 1) throw Error("layer " + layer.name + " has empty dims");
    const DwcIteration it = iteration_ctc(layer.k, layer.s, bw_f);
    const DwcPeLayout layout;

    const std::int64_t iterations = ceil_div(layer.oh, kIterOh) * ceil_div(layer.ow, kIterOw) *
                                    ceil_div(layer.oc, kLanes);
    const std::int64_t waves = ceil_div(iterations, layout.pairs());

    CycleEstimate e;
    e.compute_cycles = waves * it.compute_cycles;
    e.fm_load_cycles = waves * it.fm_load_cycles;
    e.wt_load_cycles = 0;
    e.bound = classify(e.compute_cycles, e.fm_load_cycles, e.wt_load_cycles);
    e.useful_macs = layer.useful_macs();
    e.utilization = static_cast<double>(e.useful_macs) /
                    (static_cast<double>(e.compute_cycles) * layout.pairs() *
                     arch.mac_int8_per_core_per_cycle);
    return e;
}

PeInterfaceDemand interface_demand(PeKind kind, const ArchConfig& arch) {
    PeInterfaceDemand d;
    d.kind = kind;
    if (kind == PeKind::conv) {
        const conv::GraphGranularity g;
        const int acc_nl_pairs = (kCoresPerPe - g.mac_cores) / 2;
        const int fm_streams = g.mac_cores / g.fm_broadcast;
        const int wt_streams = g.mac_cores / g.wt_broadcast;
        d.in_streams = fm_streams + wt_streams + acc_nl_pairs;  // + one bias port per pair
        d.out_streams = acc_nl_pairs;
    } else {
        const DwcPeLayout l;
        // fm per MAC core; weights and bias per 2-row cluster
        d.in_streams = l.pairs() + 2 * l.clusters();
        d.out_streams = l.output_channels_needed;
        d.borrows_neighbor_tiles = l.needs_neighbor_tiles();
    }
    d.tiles = static_cast<int>(std::max(ceil_div(d.in_streams, arch.streams_pl_to_aie_per_tile),
                                        ceil_div(d.out_streams, arch.streams_aie_to_pl_per_tile)));
    return d;
}

InterfaceReport interface_budget(const DpuConfig& dpu, const ArchConfig& arch) {
    InterfaceReport r;
    r.tiles_available = arch.interface_tiles_pl;
    bool borrowing = false;
    for (PeKind kind : dpu.pe_kinds) {
        r.per_pe.push_back(interface_demand(kind, arch));
        r.tiles_required += r.per_pe.back().tiles;
        borrowing = borrowing || r.per_pe.back().borrows_neighbor_tiles;
    }
    if (r.tiles_required > r.tiles_available)
        r.violations.push_back("interface tiles: need " + std::to_string(r.tiles_required) +
                               ", only " + std::to_string(r.tiles_available) +
                               " have PL connections");
    if (borrowing && dpu.n_pe > kMaxPeWithDwc)
        r.violations.push_back("dwc limits design to 6PE (n_pe = " + std::to_string(dpu.n_pe) + ")");
    r.feasible = r.violations.empty();
    return r;
}

}  // namespace dpu::dwc
