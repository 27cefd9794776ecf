// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#include <algorithm>
#include <limits>

#include "dpu/emulator.hpp"
#include "dpu/error.hpp"
#include "dpu/layer.hpp"

namespace dpu::emu {

std::int64_t div_round(std::int64_t num, std::int64_t den) {
    if (den <= 0) throw Error("div_round needs a positive divisor");
    const std::int64_t mag = num < 0 ? -num : num;
    const std::int64_t q = (2 * mag + den) / (2 * den);
    return num < 0 ? -q : q;
}

QTensor eltwise_add(const QTensor& a, const QTensor& b, int out_shift) {
    if (!(a.dims() == b.dims())) throw Error("eltwise_add: operand dims differ");
    if (a.scale_exp() != b.scale_exp())
        throw Error("eltwise_add: scale mismatch (" + std::to_string(a.scale_exp()) + " vs " +
                    std::to_string(b.scale_exp()) + ")");
    std::vector<std::int8_t> out(a.data().size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = saturate_i8(round_shift(std::int64_t{a.data()[i]} + b.data()[i], out_shift));
    return QTensor(a.dims(), std::move(out), a.scale_exp() + out_shift);
}

namespace {

template <class Reduce>
QTensor pool(const QTensor& in, int k, int s, Reduce&& reduce) {
    const auto& d = in.dims();
    if (k < 1 || s < 1) throw Error("pool kernel and stride must be >= 1");
    const int oh = out_dim(d.h, k, s, 0);
    const int ow = out_dim(d.w, k, s, 0);
    if (oh < 1 || ow < 1) throw Error("pool kernel larger than input");
    std::vector<std::int8_t> out;
    out.reserve(static_cast<std::size_t>(d.n) * oh * ow * d.c);
    for (int n = 0; n < d.n; ++n)
        for (int y = 0; y < oh; ++y)
            for (int x = 0; x < ow; ++x)
                for (int c = 0; c < d.c; ++c) out.push_back(reduce(n, y * s, x * s, c));
    return QTensor({d.n, oh, ow, d.c}, std::move(out), in.scale_exp());
}

}  // namespace

QTensor maxpool(const QTensor& input, int k, int s) {
    return pool(input, k, s, [&](int n, int y0, int x0, int c) {
        int m = std::numeric_limits<int>::min();
        for (int dy = 0; dy < k; ++dy)
            for (int dx = 0; dx < k; ++dx) m = std::max(m, int{input.at(n, y0 + dy, x0 + dx, c)});
        return static_cast<std::int8_t>(m);
    });
}

QTensor avgpool(const QTensor& input, int k, int s) {
    return pool(input, k, s, [&](int n, int y0, int x0, int c) {
        std::int64_t sum = 0;
        for (int dy = 0; dy < k; ++dy)
            for (int dx = 0; dx < k; ++dx) sum += input.at(n, y0 + dy, x0 + dx, c);
        return saturate_i8(div_round(sum, std::int64_t{k} * k));
    });
}

}  // namespace dpu::emu
