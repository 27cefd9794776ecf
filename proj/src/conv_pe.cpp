// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#include "dpu/conv_pe.hpp"

#include <algorithm>

#include "dpu/error.hpp"

namespace dpu::conv {

std::vector<std::string> check_granularity(const GraphGranularity& g) {
    std::vector<std::string> v;
    const auto& t = g.core;
    if (t.ih * (t.ic / 16) * (t.oc / dse::kOcPerMac) != t.cycles)
        v.push_back("core tile ih x ic/16 x oc/8 != cycles");
    if (g.ih != t.ih * g.wt_broadcast) v.push_back("graph ih != core ih x wt_broadcast");
    if (g.oc != t.oc * g.fm_broadcast) v.push_back("graph oc != core oc x fm_broadcast");
    if (g.ic != t.ic * g.cascade_len) v.push_back("graph ic != 16 x cascade_len");
    if (g.mac_cores != g.wt_broadcast * g.fm_broadcast * g.cascade_len)
        v.push_back("mac_cores != wt_broadcast x fm_broadcast x cascade_len");
    return v;
}

BufferPlan buffer_plan(int ih, int iw, const ArchConfig& arch) {
    if (ih < 1 || iw < 1) throw Error("buffer_plan needs ih, iw >= 1");
    BufferPlan p;
    p.ih = ih;
    p.iw = iw;
    const std::int64_t pixels = std::int64_t{ih} * iw;
    const int oc = MacCoreTile{}.oc;
    p.psum_stack = pixels * oc * kAccBytes;
    p.acc_out = p.psum_stack;
    p.bias = std::int64_t{oc} * kAccBytes;
    p.nl_out = pixels * oc * kOutBytes;
    p.banks_per_buffer = 2;
    // PsumStack once, the other three buffers ping-ponged.
    p.total_banks = p.banks_per_buffer + 2 * 3 * p.banks_per_buffer;
    p.total_bytes = p.psum_stack + 2 * (p.acc_out + p.bias + p.nl_out);

    if (p.total_bytes > arch.pair_mem_bytes())
        p.violations.push_back("buffers need " + std::to_string(p.total_bytes) + " B of " +
                               std::to_string(arch.pair_mem_bytes()) + " B pair memory");
    if (p.acc_out > kPingPongCapBytes)
        p.violations.push_back("acc_out " + std::to_string(p.acc_out) + " B exceeds the " +
                               std::to_string(kPingPongCapBytes) + " B ping-pong cap");
    if (p.total_banks > arch.pair_banks())
        p.violations.push_back("buffers need " + std::to_string(p.total_banks) + " banks of " +
                               std::to_string(arch.pair_banks()));

    const std::int64_t bank_capacity = p.banks_per_buffer * arch.bank_bytes();
    auto check_fit = [&](const char* name, std::int64_t bytes) {
        if (bytes > bank_capacity)
            p.warnings.push_back(std::string(name) + " (" + std::to_string(bytes) +
                                 " B) spills past its " + std::to_string(p.banks_per_buffer) +
                                 " banks");
    };
    check_fit("psum_stack", p.psum_stack);
    check_fit("acc_out", p.acc_out);
    check_fit("nl_out", p.nl_out);

    p.feasible = p.violations.empty();
    return p;
}

int max_iw(int ih) {
    if (ih < 1) throw Error("max_iw needs ih >= 1");
    const std::int64_t per_pixel = std::int64_t{MacCoreTile{}.oc} * kAccBytes;
    return static_cast<int>(kPingPongCapBytes / (per_pixel * ih));
}

TileChoice choose_tile(const dse::ParallelismScheme& scheme) {
    TileChoice t;
    t.ih = MacCoreTile{}.ih;
    if (scheme.pixels_required < 1) throw Error("scheme has no pixel requirement");
    const std::int64_t target = ceil_div(scheme.pixels_required, t.ih);
    if (scheme.pixels_required % t.ih != 0)
        t.warnings.push_back("pixels_required " + std::to_string(scheme.pixels_required) +
                             " not divisible by ih " + std::to_string(t.ih) + ", rounded up");
    const int cap = max_iw(t.ih);
    if (target > cap) {
        t.warnings.push_back("reuse target iw " + std::to_string(target) +
                             " exceeds buffer capacity, clamped to " + std::to_string(cap));
        t.iw = cap;
    } else {
        t.iw = static_cast<int>(target);
    }
    return t;
}

CycleEstimate layer_cycles(const LayerShape& layer, const GraphGranularity& g,
                           const ArchConfig& arch, dse::BandwidthSplit split) {
    if (layer.kind != LayerKind::conv)
        throw Error("layer_cycles expects a conv layer, got " + std::string(to_string(layer.kind)));
    if (layer.oh < 1 || layer.ow < 1 || layer.ic < 1 || layer.oc < 1 || layer.k < 1)
        throw Error("layer " + layer.name + " has empty dims");

    // Kernel positions are separate iterations accumulated in the ACC core.
    const std::int64_t iterations = ceil_div(layer.output_pixels(), g.pixels_per_iteration()) *
                                    std::int64_t{layer.k} * layer.k * ceil_div(layer.ic, g.ic) *
                                    ceil_div(layer.oc, g.oc);

    // Per MAC core and iteration: a core.ih x iw pixel tile of 16-channel
    // vectors, and core.oc/8 weight tiles reused across it. Broadcast streams
    // feed all their consumers at the same rate.
    const std::int64_t core_pixels = std::int64_t{g.core.ih} * g.iw;
    const std::int64_t fm_per_iter = dse::fm_load_cycles(core_pixels, split.bw_f);
    const std::int64_t wt_per_iter = dse::wt_load_cycles(g.core.oc / dse::kOcPerMac, split.bw_w);

    CycleEstimate e;
    e.compute_cycles = iterations * g.cycles_per_iteration();
    e.fm_load_cycles = iterations * fm_per_iter;
    e.wt_load_cycles = iterations * wt_per_iter;
    e.bound = classify(e.compute_cycles, e.fm_load_cycles, e.wt_load_cycles);
    e.useful_macs = layer.useful_macs();
    const double capacity = static_cast<double>(e.compute_cycles) * g.mac_cores *
                            arch.mac_int8_per_core_per_cycle;
    e.utilization = static_cast<double>(e.useful_macs) / capacity;
    e.low_channel_candidate = layer.ic < g.core.ic && e.utilization < 0.2;
    return e;
}

}  // namespace dpu::conv
