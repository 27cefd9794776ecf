// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "dpu/error.hpp"
#include "dpu/workload.hpp"

using namespace dpu;

namespace {

std::size_t count(const std::vector<LayerShape>& v, LayerKind k) {
    return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [k](const auto& l) { return l.kind == k; }));
}

}  // namespace

TEST_CASE("layer shape derivation") {
    const auto l = make_layer("c", LayerKind::conv, 224, 224, 3, 64, 7, 2, 3);
    CHECK(l.oh == 112);
    CHECK(l.ow == 112);
    CHECK(l.useful_macs() == 112LL * 112 * 64 * 3 * 49);
    CHECK(l.weight_bytes == 49 * 3 * 64 + 4 * 64);
    CHECK(l.activation_bytes == 224 * 224 * 3 + 112 * 112 * 64);

    const auto d = make_layer("d", LayerKind::dwc, 112, 112, 32, 32, 3, 1, 1);
    CHECK(d.useful_macs() == 112LL * 112 * 32 * 9);
    CHECK(d.weight_bytes == 9 * 32 + 4 * 32);

    const auto e = make_layer("e", LayerKind::eltwise, 7, 7, 8, 8, 1, 1, 0);
    CHECK(e.useful_macs() == 0);
    CHECK(e.weight_bytes == 0);
    CHECK(e.activation_bytes == 3 * 7 * 7 * 8);

    CHECK(out_dim(5, 7, 1, 0) == 0);
    CHECK_FALSE(check_layer(make_layer("bad", LayerKind::conv, 5, 5, 3, 3, 7, 1, 0)).empty());
}

TEST_CASE("bundled ResNet fixture") {
    const auto r = builtin_workload("resnet50");
    CHECK(count(r, LayerKind::conv) == 53);
    CHECK(count(r, LayerKind::eltwise) == 16);
    CHECK(count(r, LayerKind::pool) == 2);
    CHECK(r.front().name == "conv1");
    CHECK(r.back().oh == 1);
    std::int64_t macs = 0;
    for (const auto& l : r) macs += l.useful_macs();
    // ~4.1 GMAC for the conv body at 224x224
    CHECK(macs > 4.0e9);
    CHECK(macs < 4.2e9);
}

TEST_CASE("bundled MobileNet fixture") {
    const auto m = builtin_workload("mobilenet_v1");
    CHECK(m.size() == 28);
    CHECK(count(m, LayerKind::dwc) == 13);
    CHECK(count(m, LayerKind::conv) == 14);
    for (const auto& l : m)
        if (l.kind == LayerKind::dwc) CHECK(l.k == 3);
}

TEST_CASE("fixture files on disk match the compiled-in copies") {
    for (const auto& name : builtin_workload_names()) {
        const auto disk = ingest(std::filesystem::path(DPU_WORKLOAD_DIR) / (name + ".txt"));
        CHECK(disk == builtin_workload(name));
    }
    CHECK_THROWS_AS(builtin_workload("vgg"), Error);
}

TEST_CASE("parse errors") {
    CHECK_THROWS_WITH(parse_workload(""), Catch::Matchers::ContainsSubstring("no layers"));
    CHECK_THROWS_WITH(parse_workload("# only comments\n\n"), Catch::Matchers::ContainsSubstring("no layers"));
    CHECK_THROWS_WITH(parse_workload("dw dwc 8 8 16 16 4 1 1\n"),
                      Catch::Matchers::ContainsSubstring("unsupported kernel"));
    try {
        parse_workload("a conv 8 8 3 8 3 1 1\nb conv 8 8 x 8 3 1 1\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_workload("a fc 8 8 3 8 1 1 0\n"), ParseError);
    CHECK_THROWS_AS(parse_workload("a conv 8 8 3 8 1 1\n"), ParseError);
    CHECK_THROWS_AS(parse_workload("a eltwise 8 8 3 8 1 1 0\n"), ParseError);
}

TEST_CASE("format and parse round trip") {
    const auto r = builtin_workload("resnet50");
    CHECK(parse_workload(format_workload(r)) == r);
}

TEST_CASE("ingest reports the path") {
    const auto path = std::filesystem::temp_directory_path() / "dpu_bad_workload.txt";
    {
        std::ofstream f(path);
        f << "x conv 4 4 4\n";
    }
    CHECK_THROWS_WITH(ingest(path), Catch::Matchers::ContainsSubstring("dpu_bad_workload.txt"));
    std::filesystem::remove(path);
    CHECK_THROWS_AS(ingest(path), Error);
}
