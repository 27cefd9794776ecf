// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

// Plain nested-loop convolution used as the oracle for the tiled datapaths.
// Shares nothing with them except the NL stage.

#include <string>

#include "dpu/emulator.hpp"
#include "dpu/error.hpp"

namespace dpu::emu {

QTensor reference_conv(const QTensor& input, const QTensor& weights,
                       std::span<const std::int32_t> bias, const LayerShape& layer,
                       const NlSpec& nl) {
    const bool depthwise = layer.kind == LayerKind::dwc;
    if (layer.kind != LayerKind::conv && !depthwise)
        throw Error("reference_conv handles conv and dwc layers only");
    const auto& in = input.dims();
    const auto& wd = weights.dims();
    if (in.n != 1 || in.h != layer.ih || in.w != layer.iw || in.c != layer.ic)
        throw Error("reference_conv: input dims do not match layer");
    if (depthwise ? (wd.n != 1 || wd.h != layer.k || wd.w != layer.k || wd.c != layer.oc ||
                     layer.ic != layer.oc)
                  : (wd.n != layer.oc || wd.h != layer.k || wd.w != layer.k || wd.c != layer.ic))
        throw Error("reference_conv: weight dims do not match layer");
    if (static_cast<int>(bias.size()) != layer.oc) throw Error("reference_conv: bias length");

    std::vector<std::int8_t> out;
    out.reserve(static_cast<std::size_t>(layer.oh) * layer.ow * layer.oc);
    for (int oy = 0; oy < layer.oh; ++oy)
        for (int ox = 0; ox < layer.ow; ++ox)
            for (int oc = 0; oc < layer.oc; ++oc) {
                std::int64_t acc = bias[static_cast<std::size_t>(oc)];
                for (int ky = 0; ky < layer.k; ++ky)
                    for (int kx = 0; kx < layer.k; ++kx) {
                        const int y = oy * layer.s + ky - layer.pad;
                        const int x = ox * layer.s + kx - layer.pad;
                        if (y < 0 || x < 0 || y >= layer.ih || x >= layer.iw) continue;
                        if (depthwise) {
                            acc += std::int64_t{input.at(0, y, x, oc)} * weights.at(0, ky, kx, oc);
                        } else {
                            for (int ic = 0; ic < layer.ic; ++ic)
                                acc += std::int64_t{input.at(0, y, x, ic)} * weights.at(oc, ky, kx, ic);
                        }
                    }
                out.push_back(apply_nl(acc, nl));
            }
    return QTensor({1, layer.oh, layer.ow, layer.oc}, std::move(out),
                   input.scale_exp() + weights.scale_exp() + nl.requant_shift);
}

}  // namespace dpu::emu
