// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#include "dpu/scheduler.hpp"

#include <algorithm>
#include <cmath>

#include "dpu/conv_pe.hpp"
#include "dpu/dwc_pe.hpp"
#include "dpu/error.hpp"

namespace dpu::sched {

std::string_view to_string(Engine e) {
    switch (e) {
        case Engine::conv_pe: return "conv_pe";
        case Engine::dwc_pe: return "dwc_pe";
        case Engine::low_channel: return "low_channel";
        case Engine::misc: return "misc";
    }
    return "?";
}

DdrCost ddr_cycles(const LayerShape& layer, const ArchConfig& arch, int batch,
                   std::int64_t fm_buffer_bytes) {
    if (batch < 1) throw Error("batch must be >= 1");
    const double cycles_per_byte = arch.aie_freq / arch.ddr_bw;
    const std::int64_t spill = std::max<std::int64_t>(0, layer.activation_bytes - fm_buffer_bytes);
    DdrCost c;
    c.weight_cycles = static_cast<std::int64_t>(std::ceil(static_cast<double>(layer.weight_bytes) * cycles_per_byte));
    c.activation_cycles =
        static_cast<std::int64_t>(std::ceil(static_cast<double>(spill) * batch * cycles_per_byte));
    return c;
}

std::int64_t low_channel_dsp_count(int h, int ic, int oc, int pack) {
    if (pack <= 0) throw Error("packing factor must be > 0");
    if (h <= 0 || ic <= 0 || oc <= 0) throw Error("low-channel parallelism must be > 0");
    return ceil_div(std::int64_t{h} * ic * oc, pack);
}

std::int64_t low_channel_cycles(const LayerShape& layer, const LowChannelUnit& unit) {
    if (layer.kind != LayerKind::conv) throw Error("low-channel unit runs conv layers only");
    if (unit.h <= 0 || unit.ic <= 0 || unit.oc <= 0) throw Error("low-channel parallelism must be > 0");
    // One kernel row per pass; the kernel width is folded into the IC lanes.
    return ceil_div(layer.oh, unit.h) * layer.ow * layer.k *
           ceil_div(std::int64_t{layer.k} * layer.ic, unit.ic) * ceil_div(layer.oc, unit.oc);
}

namespace {

constexpr int kMiscLanes = 16;

struct Cost {
    std::int64_t cycles = 0;
    Bound bound = Bound::compute;
};

Cost batch_cost(const CycleEstimate& per_image, int rounds, const DdrCost& ddr) {
    const std::int64_t compute = per_image.compute_cycles * rounds;
    const std::int64_t fm = per_image.fm_load_cycles * rounds;
    const std::int64_t wt = per_image.wt_load_cycles * rounds;
    Cost c;
    c.bound = classify(compute, fm, wt);
    c.cycles = std::max({compute, fm, wt});
    if (ddr.total() > c.cycles) {
        c.cycles = ddr.total();
        c.bound = Bound::ddr;
    }
    return c;
}

std::vector<int> pe_indices(const DpuConfig& dpu, PeKind kind, int limit) {
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(dpu.pe_kinds.size()) && static_cast<int>(idx.size()) < limit; ++i)
        if (dpu.pe_kinds[static_cast<std::size_t>(i)] == kind) idx.push_back(i);
    return idx;
}

CycleEstimate misc_estimate(const LayerShape& l) {
    const std::int64_t taps = l.kind == LayerKind::pool ? std::int64_t{l.k} * l.k : 1;
    CycleEstimate e;
    e.compute_cycles = ceil_div(l.output_elems(), kMiscLanes) * taps;
    e.bound = Bound::compute;
    e.utilization = static_cast<double>(l.output_elems() * taps) /
                    static_cast<double>(e.compute_cycles * kMiscLanes);
    return e;
}

}  // namespace

Schedule assign(const std::vector<LayerShape>& layers, const DpuConfig& dpu,
                const ArchConfig& arch, const ScheduleOptions& opts) {
    if (layers.empty()) throw Error("no layers to schedule");
    if (opts.batch < 1) throw Error("batch must be >= 1");
    if (auto v = validate(dpu, arch); !v.ok()) throw Error("invalid configuration: " + v.violations.front());

    Schedule s;
    s.layers = layers;
    s.dpu = dpu;
    s.arch = arch;
    s.batch = opts.batch;

    const int B = opts.batch;
    const int n_conv = dpu.count(PeKind::conv);
    const int n_dwc = dpu.count(PeKind::dwc);
    const double mac_rate = arch.mac_int8_per_core_per_cycle;
    const conv::GraphGranularity g;
    const dwc::DwcPeLayout dl;
    const auto& lc = dpu.low_channel;

    std::optional<std::size_t> first_conv;
    for (std::size_t i = 0; i < layers.size(); ++i)
        if (layers[i].kind == LayerKind::conv) {
            first_conv = i;
            break;
        }

    for (std::size_t i = 0; i < layers.size(); ++i) {
        const LayerShape& l = layers[i];
        LayerAssignment a;
        a.ddr = ddr_cycles(l, arch, B, opts.fm_buffer_bytes);
        double engine_rate = 0.0;  // MACs per AIE cycle of one engine
        std::int64_t useful = l.useful_macs();

        switch (l.kind) {
            case LayerKind::conv: {
                PeKind kind = n_conv > 0 ? PeKind::conv : PeKind::dwc;
                const int eligible = n_conv > 0 ? n_conv : n_dwc;
                a.per_image = conv::layer_cycles(l, g, arch);
                if (kind == PeKind::dwc) {
                    // DWC PE runs standard conv on its 24 MAC cores.
                    a.per_image.compute_cycles = ceil_div(a.per_image.compute_cycles * g.mac_cores, dl.pairs());
                    engine_rate = dl.pairs() * mac_rate;
                } else {
                    engine_rate = g.mac_cores * mac_rate;
                }
                a.engine = kind == PeKind::conv ? Engine::conv_pe : Engine::dwc_pe;
                a.rounds = static_cast<int>(ceil_div(B, eligible));
                a.engines_used = std::min(B, eligible);
                a.pe_indices = pe_indices(dpu, kind, a.engines_used);

                if (lc.enabled && first_conv == i) {
                    if (l.ic > lc.ic) {
                        s.warnings.push_back("layer " + l.name + " has ic " + std::to_string(l.ic) +
                                             " above the low-channel unit's " + std::to_string(lc.ic) +
                                             "; kept on the AIE array");
                    } else {
                        const auto aie_cost = batch_cost(a.per_image, a.rounds, a.ddr);
                        CycleEstimate lce;
                        lce.compute_cycles = static_cast<std::int64_t>(std::ceil(
                            static_cast<double>(low_channel_cycles(l, lc)) * arch.aie_freq / lc.clock_hz));
                        lce.useful_macs = useful;
                        const double lc_rate = static_cast<double>(lc.h) * lc.ic * lc.oc * lc.clock_hz / arch.aie_freq;
                        lce.utilization = static_cast<double>(useful) / (lce.compute_cycles * lc_rate);
                        const auto lc_cost = batch_cost(lce, B, a.ddr);
                        if (lc_cost.cycles < aie_cost.cycles) {
                            a.engine = Engine::low_channel;
                            a.per_image = lce;
                            a.rounds = B;  // one unit, images in sequence
                            a.engines_used = 1;
                            a.pe_indices.clear();
                            a.overlapped = true;
                            engine_rate = lc_rate;
                        } else {
                            s.warnings.push_back("low-channel unit is not faster than the AIE array on " +
                                                 l.name + "; kept on the AIE array");
                        }
                    }
                }
                break;
            }
            case LayerKind::dwc: {
                if (n_dwc > 0) {
                    a.engine = Engine::dwc_pe;
                    a.per_image = dwc::dwc_layer_cycles(l, dwc::kDefaultBwF, arch);
                    a.rounds = static_cast<int>(ceil_div(B, n_dwc));
                    a.engines_used = std::min(B, n_dwc);
                    a.pe_indices = pe_indices(dpu, PeKind::dwc, a.engines_used);
                    engine_rate = dl.pairs() * mac_rate;
                } else if (opts.force_dwc_on_conv) {
                    // Dense convolution with a diagonal kernel.
                    LayerShape dense = l;
                    dense.kind = LayerKind::conv;
                    a.engine = Engine::conv_pe;
                    a.per_image = conv::layer_cycles(dense, g, arch);
                    a.per_image.useful_macs = useful;
                    a.rounds = static_cast<int>(ceil_div(B, n_conv));
                    a.engines_used = std::min(B, n_conv);
                    a.pe_indices = pe_indices(dpu, PeKind::conv, a.engines_used);
                    engine_rate = g.mac_cores * mac_rate;
                    s.warnings.push_back("layer " + l.name + " is depth-wise; run as a dense conv on Conv PEs");
                } else {
                    throw Error("layer " + l.name + " is depth-wise but the configuration has no DWC PE");
                }
                break;
            }
            case LayerKind::pool:
            case LayerKind::eltwise: {
                a.engine = Engine::misc;
                a.per_image = misc_estimate(l);
                a.rounds = static_cast<int>(ceil_div(B, dpu.n_pe));
                a.engines_used = std::min(B, dpu.n_pe);
                for (int p = 0; p < a.engines_used; ++p) a.pe_indices.push_back(p);
                useful = l.output_elems() * (l.kind == LayerKind::pool ? std::int64_t{l.k} * l.k : 1);
                engine_rate = kMiscLanes;
                break;
            }
        }

        const Cost c = batch_cost(a.per_image, a.rounds, a.ddr);
        a.cycles = c.cycles;
        a.bound = c.bound;
        a.utilization = c.cycles > 0 ? static_cast<double>(useful) * B /
                                           (static_cast<double>(c.cycles) * a.engines_used * engine_rate)
                                     : 0.0;
        s.assignments.push_back(std::move(a));
        s.useful_macs += l.useful_macs();
    }

    std::int64_t serial = 0;
    std::int64_t overlapped = 0;
    for (const auto& a : s.assignments) (a.overlapped ? overlapped : serial) += a.cycles;
    s.total_cycles = serial + overlapped;
    s.steady_cycles = overlapped > 0 ? std::max(serial, overlapped) : serial;
    s.estimated_latency_s = static_cast<double>(s.total_cycles) / arch.aie_freq;
    s.estimated_fps = static_cast<double>(B) * arch.aie_freq / static_cast<double>(s.steady_cycles);
    return s;
}

}  // namespace dpu::sched
