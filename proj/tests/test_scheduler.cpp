// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "dpu/conv_pe.hpp"
#include "dpu/dwc_pe.hpp"
#include "dpu/error.hpp"
#include "dpu/scheduler.hpp"
#include "dpu/workload.hpp"

using namespace dpu;
using namespace dpu::sched;
using Catch::Approx;

namespace {

DpuConfig mixed(int n_pe, int n_dwc) {
    auto d = DpuConfig::uniform(n_pe, PeKind::conv);
    for (int i = 0; i < n_dwc; ++i) d.pe_kinds[static_cast<std::size_t>(n_pe - 1 - i)] = PeKind::dwc;
    return d;
}

DpuConfig with_lc(DpuConfig d) {
    d.low_channel.enabled = true;
    return d;
}

ScheduleOptions batch(int b) {
    ScheduleOptions o;
    o.batch = b;
    return o;
}

}  // namespace

TEST_CASE("DDR transfer cycles") {
    const auto arch = default_arch();
    LayerShape w = make_layer("w", LayerKind::conv, 1, 1, 1, 1, 1, 1, 0);
    w.weight_bytes = 1'000'000;
    w.activation_bytes = 0;
    // 1e6 B / 102.4e9 B/s x 1.333e9 Hz = 13017.58
    CHECK(ddr_cycles(w, arch, 1).weight_cycles == 13018);
    CHECK(ddr_cycles(w, arch, 8).weight_cycles == 13018);

    const auto e = make_layer("e", LayerKind::eltwise, 28, 28, 128, 128, 1, 1, 0);
    const auto c = ddr_cycles(e, arch, 1);
    CHECK(c.weight_cycles == 0);
    CHECK(c.activation_cycles == static_cast<std::int64_t>(std::ceil(3.0 * 28 * 28 * 128 * 1.333e9 / 102.4e9)));
    CHECK(ddr_cycles(e, arch, 1, e.activation_bytes).activation_cycles == 0);
    CHECK(ddr_cycles(e, arch, 2).activation_cycles >= 2 * c.activation_cycles - 1);
    CHECK_THROWS_AS(ddr_cycles(e, arch, 0), Error);
}

TEST_CASE("weight DDR cost per image falls with batch") {
    const auto arch = default_arch();
    const auto heavy = make_layer("fc_like", LayerKind::conv, 7, 7, 512, 2048, 3, 1, 1);
    const double one = static_cast<double>(ddr_cycles(heavy, arch, 1).weight_cycles);
    const double eight = static_cast<double>(ddr_cycles(heavy, arch, 8).weight_cycles) / 8.0;
    CHECK(eight <= one / 8.0 + 1.0);
    for (int b = 1; b < 16; ++b)
        CHECK(ddr_cycles(heavy, arch, b + 1).weight_cycles / double(b + 1) <=
              ddr_cycles(heavy, arch, b).weight_cycles / double(b));
}

TEST_CASE("low-channel unit sizing") {
    CHECK(low_channel_dsp_count(4, 21, 32, 4) == 672);
    CHECK(low_channel_dsp_count(1, 1, 1, 1) == 1);
    CHECK(low_channel_dsp_count(4, 21, 32, 1) == 2688);
    CHECK(low_channel_dsp_count(1, 3, 1, 2) == 2);
    CHECK_THROWS_AS(low_channel_dsp_count(4, 21, 32, 0), Error);

    const auto conv1 = builtin_workload("resnet50").front();
    // 28 row groups x 112 columns x 7 kernel rows x 1 IC pass x 2 OC passes
    CHECK(low_channel_cycles(conv1, LowChannelUnit{}) == 43904);
}

TEST_CASE("ResNet on 8 conv PEs") {
    const auto layers = builtin_workload("resnet50");
    const auto s = assign(layers, DpuConfig::uniform(8, PeKind::conv));
    REQUIRE(s.assignments.size() == layers.size());
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const auto& a = s.assignments[i];
        CHECK(a.engine == (layers[i].kind == LayerKind::conv ? Engine::conv_pe : Engine::misc));
        CHECK(a.cycles >= a.ddr.total());
        CHECK(a.utilization > 0.0);
        CHECK(a.utilization <= 1.0 + 1e-12);
    }
    CHECK(s.assignments[0].utilization == Approx(0.0234).margin(1e-4));
    const auto r = report(s);
    REQUIRE(r.lowest_utilization_conv.has_value());
    CHECK(*r.lowest_utilization_conv == 0);
    CHECK(r.rows[0].utilization < 0.2);
    CHECK(s.total_cycles == s.steady_cycles);
    CHECK(s.estimated_fps == Approx(1.333e9 / s.total_cycles));
}

TEST_CASE("low-channel unit takes conv1 and overlaps it") {
    const auto layers = builtin_workload("resnet50");
    const auto base = assign(layers, DpuConfig::uniform(8, PeKind::conv));
    const auto lc = assign(layers, with_lc(DpuConfig::uniform(8, PeKind::conv)));
    CHECK(lc.assignments[0].engine == Engine::low_channel);
    CHECK(lc.assignments[0].overlapped);
    CHECK(lc.assignments[0].pe_indices.empty());
    for (std::size_t i = 1; i < layers.size(); ++i) CHECK(lc.assignments[i].engine != Engine::low_channel);
    CHECK(lc.total_cycles < base.total_cycles);
    CHECK(lc.steady_cycles <= lc.total_cycles);
    CHECK(lc.estimated_fps > base.estimated_fps);
    // 43904 PL cycles at 300 MHz in AIE cycles
    CHECK(lc.assignments[0].per_image.compute_cycles == static_cast<std::int64_t>(std::ceil(43904 * 1.333e9 / 300e6)));
}

TEST_CASE("low-channel unit never lengthens the critical path") {
    const std::vector<std::string> firsts = {
        "c conv 224 224 3 64 7 2 3", "c conv 32 32 3 16 3 1 1", "c conv 8 8 16 128 1 1 0",
        "c conv 64 64 21 32 1 1 0",  "c conv 32 32 40 64 3 1 1", "c conv 224 224 3 32 3 2 1"};
    for (const auto& f : firsts)
        for (int b : {1, 3, 8}) {
            const auto layers = parse_workload(f + "\nd conv 28 28 64 64 3 1 1\n");
            const auto off = assign(layers, DpuConfig::uniform(8, PeKind::conv), default_arch(), batch(b));
            const auto on = assign(layers, with_lc(DpuConfig::uniform(8, PeKind::conv)), default_arch(), batch(b));
            INFO(f << " batch " << b);
            CHECK(on.total_cycles <= off.total_cycles);
            CHECK(on.steady_cycles <= off.steady_cycles);
        }
}

TEST_CASE("too many input channels fall back to the AIE array") {
    const auto layers = parse_workload("c conv 32 32 40 64 3 1 1\n");
    const auto s = assign(layers, with_lc(DpuConfig::uniform(8, PeKind::conv)));
    CHECK(s.assignments[0].engine == Engine::conv_pe);
    CHECK_FALSE(s.warnings.empty());
}

TEST_CASE("MobileNet needs DWC PEs") {
    const auto layers = builtin_workload("mobilenet_v1");
    CHECK_THROWS_WITH(assign(layers, DpuConfig::uniform(8, PeKind::conv)),
                      Catch::Matchers::ContainsSubstring("no DWC PE"));
    const auto s = assign(layers, mixed(6, 2));
    for (std::size_t i = 0; i < layers.size(); ++i) {
        if (layers[i].kind == LayerKind::dwc) {
            CHECK(s.assignments[i].engine == Engine::dwc_pe);
            for (int p : s.assignments[i].pe_indices) CHECK(p >= 4);
        } else if (layers[i].kind == LayerKind::conv) {
            CHECK(s.assignments[i].engine == Engine::conv_pe);
        }
    }
    CHECK_THROWS_AS(assign(layers, mixed(8, 1)), Error);
}

TEST_CASE("DWC PEs beat dense emulation of depth-wise layers") {
    const auto layers = builtin_workload("mobilenet_v1");
    ScheduleOptions forced;
    forced.force_dwc_on_conv = true;
    for (int b : {1, 6}) {
        forced.batch = b;
        const auto conv_only = assign(layers, DpuConfig::uniform(6, PeKind::conv), default_arch(), forced);
        CHECK_FALSE(conv_only.warnings.empty());
        for (int n_dwc : {1, 2, 3}) {
            const auto with_dwc = assign(layers, mixed(6, n_dwc), default_arch(), batch(b));
            INFO("batch " << b << " dwc PEs " << n_dwc);
            CHECK(with_dwc.estimated_fps >= conv_only.estimated_fps);
        }
    }
}

TEST_CASE("conv layers run on DWC PEs when no Conv PE exists") {
    const auto layers = builtin_workload("mobilenet_v1");
    const auto s = assign(layers, DpuConfig::uniform(4, PeKind::dwc));
    const auto ref = conv::layer_cycles(layers[0]);
    CHECK(s.assignments[0].engine == Engine::dwc_pe);
    CHECK(s.assignments[0].per_image.compute_cycles == (ref.compute_cycles * 32 + 23) / 24);
}

TEST_CASE("useful work is conserved across schedules") {
    const auto layers = builtin_workload("resnet50");
    std::int64_t macs = 0;
    for (const auto& l : layers) macs += l.useful_macs();
    for (int n : {2, 4, 6, 8})
        for (int b : {1, 4, 8}) {
            const auto s = assign(layers, DpuConfig::uniform(n, PeKind::conv), default_arch(), batch(b));
            CHECK(s.useful_macs == macs);
            CHECK(report(s).useful_macs == macs);
        }
}

TEST_CASE("throughput does not drop with more PEs") {
    for (const char* w : {"resnet50", "mobilenet_v1"}) {
        const auto layers = builtin_workload(w);
        const bool dw = std::string(w) == "mobilenet_v1";
        for (int b : {8, 16}) {
            double prev = 0.0;
            for (int n : {2, 4, 6, 8}) {
                if (dw && n > 6) continue;
                const auto cfg = dw ? mixed(n, 1) : DpuConfig::uniform(n, PeKind::conv);
                const double fps = assign(layers, cfg, default_arch(), batch(b)).estimated_fps;
                INFO(w << " n_pe " << n << " batch " << b);
                CHECK(fps >= prev);
                prev = fps;
            }
        }
    }
}

TEST_CASE("batch spreads over PEs in rounds") {
    const auto layers = parse_workload("c conv 56 56 64 64 3 1 1\n");
    const auto one = assign(layers, DpuConfig::uniform(4, PeKind::conv));
    const auto four = assign(layers, DpuConfig::uniform(4, PeKind::conv), default_arch(), batch(4));
    const auto five = assign(layers, DpuConfig::uniform(4, PeKind::conv), default_arch(), batch(5));
    CHECK(four.assignments[0].rounds == 1);
    CHECK(four.assignments[0].engines_used == 4);
    CHECK(four.assignments[0].pe_indices == std::vector<int>{0, 1, 2, 3});
    CHECK(five.assignments[0].rounds == 2);
    CHECK(four.total_cycles >= one.total_cycles);
    CHECK(four.estimated_fps > 3.0 * one.estimated_fps);
}

TEST_CASE("single-layer report equals the layer estimate") {
    const auto layers = parse_workload("c conv 56 56 64 64 3 1 1\n");
    const auto s = assign(layers, DpuConfig::uniform(8, PeKind::conv));
    const auto est = conv::layer_cycles(layers[0]);
    const auto ddr = ddr_cycles(layers[0], default_arch(), 1);
    const auto r = report(s);
    CHECK(r.total_cycles == std::max(est.cycles(), ddr.total()));
    CHECK(r.rows.size() == 1);
    CHECK(r.rows[0].compute_cycles == est.compute_cycles);
    CHECK(r.rows[0].utilization == Approx(est.utilization));
}

TEST_CASE("MISC costs") {
    const auto layers = parse_workload("p maxpool 112 112 64 64 3 2 1\ne eltwise 56 56 256 256 1 1 0\n");
    const auto s = assign(layers, DpuConfig::uniform(2, PeKind::conv));
    CHECK(s.assignments[0].engine == Engine::misc);
    CHECK(s.assignments[0].per_image.compute_cycles == 56 * 56 * 64 / 16 * 9);
    CHECK(s.assignments[1].per_image.compute_cycles == 56 * 56 * 256 / 16);
}

TEST_CASE("report renderings") {
    const auto r = report(assign(builtin_workload("resnet50"), DpuConfig::uniform(8, PeKind::conv)));
    const auto text = to_text(r);
    CHECK(text.find("lowest conv utilization") != std::string::npos);
    CHECK(text.find("fps") != std::string::npos);

    std::istringstream csv(to_csv(r));
    std::string line;
    std::size_t lines = 0;
    while (std::getline(csv, line)) ++lines;
    CHECK(lines == r.rows.size() + 1);

    const auto j = to_json(r);
    CHECK(j["layers"].size() == r.rows.size());
    CHECK(j["lowest_utilization_conv"] == "conv1");
    CHECK(nlohmann::json::parse(j.dump()) == j);
    CHECK(r.peak_fraction > 0.0);
    CHECK(r.peak_fraction < 1.0);

    // once the low-channel unit takes conv1 it is no longer the weak spot
    const auto lc = report(assign(builtin_workload("resnet50"), with_lc(DpuConfig::uniform(8, PeKind::conv))));
    CHECK(lc.rows[0].engine == Engine::low_channel);
    CHECK(lc.lowest_utilization_conv != std::optional<std::size_t>(0));
}

TEST_CASE("scheduling is deterministic") {
    const auto layers = builtin_workload("mobilenet_v1");
    CHECK(to_csv(report(assign(layers, mixed(6, 2)))) == to_csv(report(assign(layers, mixed(6, 2)))));
}
