// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#include "dpu/anchors.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "dpu/arch.hpp"
#include "dpu/cascade.hpp"
#include "dpu/conv_pe.hpp"
#include "dpu/dse.hpp"
#include "dpu/dwc_pe.hpp"
#include "dpu/error.hpp"
#include "dpu/scheduler.hpp"
#include "dpu/workload.hpp"

namespace dpu {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Sink {
    std::vector<AnchorResult> out;

    void add(std::string module, std::string name, std::string expected, std::function<std::string()> actual,
             std::function<bool()> pass) {
        AnchorResult r{std::move(module), std::move(name), std::move(expected), {}, false};
        try {
            r.actual = actual();
            r.pass = pass();
        } catch (const std::exception& e) {
            r.actual = std::string("error: ") + e.what();
        }
        out.push_back(std::move(r));
    }

    template <class T>
    void eq(std::string module, std::string name, T expected, std::function<T()> f) {
        add(std::move(module), std::move(name), num(static_cast<double>(expected)),
            [f] { return num(static_cast<double>(f())); }, [f, expected] { return f() == expected; });
    }

    void near(std::string module, std::string name, double expected, double rel, std::function<double()> f) {
        add(std::move(module), std::move(name), num(expected) + " +/- " + num(rel * 100) + "%",
            [f] { return num(f()); }, [f, expected, rel] { return std::abs(f() - expected) <= rel * expected; });
    }

    void flag(std::string module, std::string name, std::function<bool()> f) {
        add(std::move(module), std::move(name), "true", [f] { return f() ? "true" : "false"; }, f);
    }
};

DpuConfig mixed(int n_pe, int n_dwc) {
    DpuConfig d = DpuConfig::uniform(n_pe, PeKind::conv);
    for (int i = 0; i < n_dwc; ++i) d.pe_kinds[static_cast<std::size_t>(n_pe - 1 - i)] = PeKind::dwc;
    return d;
}

}  // namespace

std::vector<AnchorResult> run_anchor_checks() {
    Sink s;
    const ArchConfig arch = default_arch();

    s.eq<std::int64_t>("arch-model", "core local memory bytes", 32768, [&] { return arch.local_mem_bytes(); });
    s.eq<std::int64_t>("arch-model", "ACC/NL pair memory bytes", 65536, [&] { return arch.pair_mem_bytes(); });
    s.near("arch-model", "peak ops/s, 8 PE", 131.0e12, 0.01,
           [&] { return peak_tops(DpuConfig::uniform(8, PeKind::conv), arch); });
    s.near("arch-model", "peak ops/s, 2 PE", 32.6e12, 0.01,
           [&] { return peak_tops(DpuConfig::uniform(2, PeKind::conv), arch); });
    s.flag("arch-model", "8 conv PEs validate", [&] { return validate(DpuConfig::uniform(8, PeKind::conv), arch).ok(); });
    s.flag("arch-model", "DWC PE with 8 PEs rejected", [&] { return !validate(mixed(8, 1), arch).ok(); });
    s.flag("arch-model", "DWC PE with 6 PEs accepted", [&] { return validate(mixed(6, 1), arch).ok(); });
    s.near("arch-model", "DDR bandwidth bytes/s", 102.4e9, 0.0, [&] { return arch.ddr_bw; });

    s.eq<std::int64_t>("dse", "fm reuse at (32, 16)", 4, [] { return dse::min_balanced_scheme({32, 16}).fm_reuse; });
    s.eq<std::int64_t>("dse", "wt reuse at (32, 16)", 64, [] { return dse::min_balanced_scheme({32, 16}).wt_reuse; });
    s.flag("dse", "OC >= 32 and pixels >= 64 at (32, 16)", [] {
        auto m = dse::min_balanced_scheme({32, 16});
        return m.oc_required >= 32 && m.pixels_required >= 64 && m.balanced();
    });
    s.eq<std::int64_t>("dse", "FM load for 64-pixel reuse at 32 b/cycle", 256,
                       [] { return dse::fm_load_cycles(64, 32); });

    s.eq<int>("conv-pe", "max IW at IH 4", 32, [] { return conv::max_iw(4); });
    s.eq<std::int64_t>("conv-pe", "psum stack bytes at 4 x 16", 8192,
                       [&] { return conv::buffer_plan(4, 16, arch).psum_stack; });
    s.flag("conv-pe", "4 x 16 buffer plan feasible", [&] { return conv::buffer_plan(4, 16, arch).feasible; });
    s.flag("conv-pe", "graph granularity identities", [] { return conv::check_granularity({}).empty(); });
    s.flag("conv-pe", "first ResNet conv under 20% utilization", [] {
        auto l = builtin_workload("resnet50").front();
        return conv::layer_cycles(l).utilization < 0.2;
    });

    s.near("cascade-sim", "steady utilization with a bubble", 1.0, 0.0, [] {
        cascade::ChainConfig c;
        c.total_iterations = 32;
        c.bubbles = {{2, 9}};
        auto t = cascade::simulate(c);
        return cascade::utilization(t, cascade::warmup_horizon(c));
    });

    s.eq<std::int64_t>("dwc-pe", "3x3 stride-1 atomic cycles", 12, [] { return dwc::atomic_cycles(3, 1); });
    s.flag("dwc-pe", "CTC rises with kernel size, peak at 7", [] {
        double prev = 0.0;
        for (int k : {1, 3, 5, 7}) {
            const double c = dwc::iteration_ctc(k, 1).ctc;
            if (c <= prev) return false;
            prev = c;
        }
        return true;
    });
    s.flag("dwc-pe", "stride 2 lowers CTC", [] { return dwc::iteration_ctc(3, 2).ctc < dwc::iteration_ctc(3, 1).ctc; });
    s.flag("dwc-pe", "24 pairs need neighbour interface tiles", [] {
        dwc::DwcPeLayout l;
        return l.pairs() == 24 && l.needs_neighbor_tiles() && dwc::check_layout(l).empty();
    });

    s.eq<std::int64_t>("scheduler", "low-channel DSP58 count", 672,
                       [] { return sched::low_channel_dsp_count(4, 21, 32, 4); });
    s.flag("scheduler", "report flags ResNet conv1 as lowest conv utilization", [] {
        auto r = sched::report(sched::assign(builtin_workload("resnet50"), DpuConfig::uniform(8, PeKind::conv)));
        return r.lowest_utilization_conv == 0 && r.rows[0].utilization < 0.2;
    });
    s.flag("scheduler", "low-channel unit shortens the critical path", [] {
        const auto layers = builtin_workload("resnet50");
        DpuConfig d = DpuConfig::uniform(8, PeKind::conv);
        const auto base = sched::assign(layers, d).total_cycles;
        d.low_channel.enabled = true;
        return sched::assign(layers, d).total_cycles < base;
    });
    s.flag("scheduler", "MobileNet dwc layers land on DWC PEs", [] {
        const auto layers = builtin_workload("mobilenet_v1");
        const auto sch = sched::assign(layers, mixed(6, 2));
        for (std::size_t i = 0; i < layers.size(); ++i)
            if (layers[i].kind == LayerKind::dwc && sch.assignments[i].engine != sched::Engine::dwc_pe) return false;
        return true;
    });
    return s.out;
}

}  // namespace dpu
