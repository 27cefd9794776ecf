// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "dpu/error.hpp"
#include "oracle.hpp"

using namespace dpu;
using namespace dpu::emu;
using dpu::testing::ConvCase;

namespace {

std::vector<std::int8_t> to_vec(const QTensor& t) { return {t.data().begin(), t.data().end()}; }

WeightTile fill_tile(std::int8_t v) {
    WeightTile w;
    for (auto& row : w) row.fill(v);
    return w;
}

}  // namespace

TEST_CASE("single MAC issue") {
    FeatureVector ones;
    ones.fill(1);
    auto acc = mac_1x16x8(ones, fill_tile(1), {});
    for (auto v : acc.lanes) CHECK(v == 16);

    FeatureVector big;
    big.fill(127);
    acc = mac_1x16x8(big, fill_tile(-128), {});
    for (auto v : acc.lanes) CHECK(v == -260096);

    std::mt19937_64 rng(5);
    for (int n = 0; n < 200; ++n) {
        FeatureVector f;
        WeightTile w;
        Accumulator in;
        for (auto& x : f) x = testing::rand_i8(rng);
        for (auto& r : w)
            for (auto& x : r) x = testing::rand_i8(rng);
        for (auto& x : in.lanes) x = std::uniform_int_distribution<std::int64_t>(-1'000'000, 1'000'000)(rng);
        const auto out = mac_1x16x8(f, w, in);
        for (int o = 0; o < 8; ++o) {
            std::int64_t want = in.lanes[o];
            for (int i = 0; i < 16; ++i) want += f[i] * w[i][o];
            CHECK(out.lanes[o] == want);
        }
    }
}

TEST_CASE("48-bit accumulator overflow is reported") {
    FeatureVector one;
    one.fill(1);
    Accumulator near;
    near.lanes.fill(kAccMax - 10);
    CHECK_THROWS_AS(mac_1x16x8(one, fill_tile(1), near), OverflowError);
    near.lanes.fill(kAccMax - 16);
    CHECK_NOTHROW(mac_1x16x8(one, fill_tile(1), near));
    CHECK_THROWS_AS(check_acc(kAccMin - 1), OverflowError);
}

TEST_CASE("cascade chain is a flat dot product") {
    FeatureVector ones;
    ones.fill(1);
    std::vector<FeatureVector> f(4, ones);
    std::vector<WeightTile> w(4, fill_tile(1));
    for (auto v : cascade_chain(f, w).lanes) CHECK(v == 64);
    CHECK(cascade_chain(std::span(f).first(1), std::span(w).first(1)) == mac_1x16x8(ones, w[0], {}));
    CHECK_THROWS_AS(cascade_chain(f, std::span(w).first(3)), Error);
    CHECK_THROWS_AS(cascade_chain({}, {}), Error);

    std::mt19937_64 rng(9);
    for (int n = 0; n < 100; ++n) {
        for (auto& fv : f)
            for (auto& x : fv) x = testing::rand_i8(rng);
        for (auto& t : w)
            for (auto& r : t)
                for (auto& x : r) x = testing::rand_i8(rng);
        const auto acc = cascade_chain(f, w);
        for (int o = 0; o < 8; ++o) {
            std::int64_t want = 0;
            for (int c = 0; c < 64; ++c) want += f[c / 16][c % 16] * w[c / 16][c % 16][o];
            CHECK(acc.lanes[o] == want);
        }
    }
}

TEST_CASE("rounding and saturation") {
    CHECK(round_shift(5, 1) == 3);
    CHECK(round_shift(-5, 1) == -3);
    CHECK(round_shift(4, 1) == 2);
    CHECK(round_shift(-6, 2) == -2);
    CHECK(round_shift(3, -2) == 12);
    CHECK(saturate_i8(300) == 127);
    CHECK(saturate_i8(-300) == -128);
    for (std::int64_t v = -5000; v <= 5000; v += 7)
        for (int s = 0; s < 12; ++s) CHECK(round_shift(v, s) == testing::oracle_requant(v, s));

    NlSpec leaky{Activation::leaky_relu, 3, 0};
    CHECK(apply_nl(-80, leaky) == -10);
    CHECK(apply_nl(-4, leaky) == -1);  // -0.5 rounds away from zero
    CHECK(apply_nl(40, leaky) == 40);
    CHECK(apply_nl(-80, {Activation::relu, 3, 0}) == 0);
    CHECK(apply_nl(1000, {Activation::identity, 3, 2}) == 127);
    CHECK(div_round(7, 2) == 4);
    CHECK(div_round(-7, 2) == -4);
    CHECK(div_round(-5, 3) == -2);
}

TEST_CASE("single element conv") {
    const auto l = make_layer("one", LayerKind::conv, 1, 1, 1, 1, 1, 1, 0);
    const QTensor in({1, 1, 1, 1}, {7}, -3);
    const QTensor w({1, 1, 1, 1}, {-6}, -2);
    const std::vector<std::int32_t> bias{10};
    const auto out = conv_forward(in, w, bias, l, {Activation::identity, 3, 2});
    CHECK(out.at(0, 0, 0, 0) == -8);  // (7 * -6 + 10) / 4 = -8
    CHECK(out.scale_exp() == -3);
}

TEST_CASE("hand-computed 3x3 single channel") {
    // input 1..9, weights all 1 except centre 2, pad 1
    std::vector<std::int8_t> px(9);
    for (int i = 0; i < 9; ++i) px[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(i + 1);
    const QTensor in({1, 3, 3, 1}, px);
    const QTensor w({1, 3, 3, 1}, {1, 1, 1, 1, 2, 1, 1, 1, 1});
    const auto l = make_layer("h", LayerKind::conv, 3, 3, 1, 1, 3, 1, 1);
    const std::vector<std::int32_t> bias{0};
    const auto out = conv_forward(in, w, bias, l, {});
    // centre: sum(1..9) + 5 = 50; corner (0,0): 1*2 + 2 + 4 + 5 = 13
    CHECK(out.at(0, 1, 1, 0) == 50);
    CHECK(out.at(0, 0, 0, 0) == 13);
    CHECK(out.at(0, 2, 2, 0) == 9 * 2 + 8 + 6 + 5);
}

TEST_CASE("identity 1x1 kernel copies the input") {
    for (int c : {1, 5, 8}) {
        std::mt19937_64 rng(static_cast<unsigned>(c));
        const auto in = testing::rand_tensor(rng, {1, 6, 7, c}, 0);
        std::vector<std::int8_t> w(static_cast<std::size_t>(c * c), 0);
        for (int i = 0; i < c; ++i) w[static_cast<std::size_t>(i * c + i)] = 1;
        const auto l = make_layer("id", LayerKind::conv, 6, 7, c, c, 1, 1, 0);
        const auto out = conv_forward(in, QTensor({c, 1, 1, c}, w), std::vector<std::int32_t>(c, 0), l, {});
        CHECK(to_vec(out) == to_vec(in));
    }
}

TEST_CASE("zero input gives requantized bias everywhere") {
    const auto l = make_layer("z", LayerKind::conv, 5, 5, 20, 12, 3, 1, 1);
    std::mt19937_64 rng(3);
    const auto w = testing::rand_tensor(rng, {12, 3, 3, 20}, 0);
    std::vector<std::int32_t> bias(12);
    for (int i = 0; i < 12; ++i) bias[static_cast<std::size_t>(i)] = (i - 6) * 37;
    const NlSpec nl{Activation::identity, 3, 2};
    const auto out = conv_forward(QTensor::zeros({1, 5, 5, 20}), w, bias, l, nl);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 5; ++x)
            for (int o = 0; o < 12; ++o) CHECK(out.at(0, y, x, o) == apply_nl(bias[static_cast<std::size_t>(o)], nl));
}

TEST_CASE("conv dataflow matches the oracles on random shapes") {
    std::mt19937_64 rng(2024);
    for (int n = 0; n < 100; ++n) {
        const ConvCase c = testing::random_conv(rng);
        INFO(c.layer.ih << "x" << c.layer.iw << " ic " << c.layer.ic << " oc " << c.layer.oc << " k " << c.layer.k
                        << " s " << c.layer.s);
        const auto want = testing::oracle_conv(c);
        const auto ref = reference_conv(c.input, c.weights, c.bias, c.layer, c.nl);
        REQUIRE(to_vec(ref) == want);
        EmuStats st;
        const auto got = conv_forward(c.input, c.weights, c.bias, c.layer, c.nl, &st);
        CHECK(to_vec(got) == want);
        CHECK(got.scale_exp() == c.input.scale_exp() + c.weights.scale_exp() + c.nl.requant_shift);
        CHECK(st.mac_ops > 0);
    }
}

TEST_CASE("dwc dataflow matches the oracles on random shapes") {
    std::mt19937_64 rng(77);
    for (int n = 0; n < 100; ++n) {
        const ConvCase c = testing::random_dwc(rng);
        INFO(c.layer.ih << "x" << c.layer.iw << " c " << c.layer.ic << " k " << c.layer.k << " s " << c.layer.s
                        << " pad " << c.layer.pad);
        const auto want = testing::oracle_conv(c);
        REQUIRE(to_vec(reference_conv(c.input, c.weights, c.bias, c.layer, c.nl)) == want);
        EmuStats st;
        CHECK(to_vec(dwc_forward(c.input, c.weights, c.bias, c.layer, c.nl, &st)) == want);
        CHECK(st.atomic_ops > 0);
    }
}

TEST_CASE("dwc trivial kernels") {
    std::mt19937_64 rng(1);
    const auto in = testing::rand_tensor(rng, {1, 9, 10, 20}, -4);
    const std::vector<std::int32_t> zero(20, 0);

    const auto l1 = make_layer("u", LayerKind::dwc, 9, 10, 20, 20, 1, 1, 0);
    const auto out1 = dwc_forward(in, QTensor({1, 1, 1, 20}, std::vector<std::int8_t>(20, 1)), zero, l1, {});
    CHECK(to_vec(out1) == to_vec(in));

    std::vector<std::int8_t> delta(9 * 20, 0);
    for (int c = 0; c < 20; ++c) delta[static_cast<std::size_t>(4 * 20 + c)] = 1;
    const auto l3 = make_layer("d", LayerKind::dwc, 9, 10, 20, 20, 3, 1, 0);
    const auto out3 = dwc_forward(in, QTensor({1, 3, 3, 20}, delta), zero, l3, {});
    for (int y = 0; y < l3.oh; ++y)
        for (int x = 0; x < l3.ow; ++x)
            for (int c = 0; c < 20; ++c) CHECK(out3.at(0, y, x, c) == in.at(0, y + 1, x + 1, c));
}

TEST_CASE("standard conv through the DWC path equals the Conv PE path") {
    std::mt19937_64 rng(31);
    for (int n = 0; n < 30; ++n) {
        const ConvCase c = testing::random_conv(rng);
        EmuStats st;
        const auto a = conv_forward(c.input, c.weights, c.bias, c.layer, c.nl);
        const auto b = conv_forward_dwc_path(c.input, c.weights, c.bias, c.layer, c.nl, &st);
        CHECK(a == b);
    }
}

TEST_CASE("outputs are always int8 and shape errors are caught") {
    std::mt19937_64 rng(4);
    auto c = testing::random_conv(rng);
    c.nl = {Activation::identity, 3, -4};  // left shift drives most values to saturation
    const auto out = conv_forward(c.input, c.weights, c.bias, c.layer, c.nl);
    const auto want = testing::oracle_conv(c);
    CHECK(to_vec(out) == want);
    CHECK(std::any_of(want.begin(), want.end(), [](std::int8_t v) { return v == 127 || v == -128; }));

    CHECK_THROWS_AS(conv_forward(c.input, c.weights, std::vector<std::int32_t>(1, 0), c.layer, c.nl), Error);
    auto bad = make_layer("b", LayerKind::dwc, 8, 8, 4, 4, 3, 1, 1);
    bad.k = 4;
    CHECK_THROWS_AS(dwc_forward(QTensor::zeros({1, 8, 8, 4}), QTensor::zeros({1, 4, 4, 4}),
                                std::vector<std::int32_t>(4, 0), bad, {}),
                    Error);
}

TEST_CASE("MISC operations") {
    std::mt19937_64 rng(8);
    const auto x = testing::rand_tensor(rng, {1, 4, 4, 3}, -2);
    CHECK(to_vec(eltwise_add(x, QTensor::zeros(x.dims(), -2), 0)) == to_vec(x));
    CHECK_THROWS_AS(eltwise_add(x, QTensor::zeros(x.dims(), -1), 0), Error);
    const QTensor sat({1, 1, 1, 2}, {100, -100});
    CHECK(to_vec(eltwise_add(sat, sat, 0)) == std::vector<std::int8_t>{127, -128});
    CHECK(to_vec(eltwise_add(sat, sat, 1)) == std::vector<std::int8_t>{100, -100});

    std::vector<std::int8_t> g(16);
    for (int i = 0; i < 16; ++i) g[static_cast<std::size_t>(i)] = static_cast<std::int8_t>((i * 7) % 16 - 8);
    // rows: [-8 -1 6 -3] [4 -5 2 -7] [0 7 -2 5] [-4 3 -6 1]
    const auto mp = maxpool(QTensor({1, 4, 4, 1}, g), 2, 2);
    CHECK(to_vec(mp) == std::vector<std::int8_t>{4, 6, 7, 5});

    const auto big = testing::rand_tensor(rng, {1, 9, 9, 5}, 0);
    for (int k : {2, 3}) {
        const auto ap = avgpool(big, k, k == 2 ? 2 : 1);
        const auto& d = ap.dims();
        for (int y = 0; y < d.h; ++y)
            for (int xx = 0; xx < d.w; ++xx)
                for (int c = 0; c < d.c; ++c) {
                    const int s = k == 2 ? 2 : 1;
                    double sum = 0;
                    for (int dy = 0; dy < k; ++dy)
                        for (int dx = 0; dx < k; ++dx) sum += big.at(0, y * s + dy, xx * s + dx, c);
                    CHECK(ap.at(0, y, xx, c) == static_cast<int>(std::round(sum / (k * k))));
                }
    }
}

TEST_CASE("diff report") {
    const QTensor a({1, 1, 1, 3}, {1, 2, 3});
    const QTensor b({1, 1, 1, 3}, {1, -2, 3});
    const auto d = diff(a, b);
    CHECK(d.elements == 3);
    CHECK(d.mismatches == 1);
    CHECK(d.max_abs_diff == 4);
    CHECK(diff(a, a).equal());
    CHECK_THROWS_AS(diff(a, QTensor::zeros({1, 1, 1, 2})), Error);
}
