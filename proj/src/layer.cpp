// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#include "dpu/layer.hpp"

#include <algorithm>

namespace dpu {

std::string_view to_string(LayerKind kind) {
    switch (kind) {
        case LayerKind::conv: return "conv";
        case LayerKind::dwc: return "dwc";
        case LayerKind::pool: return "pool";
        case LayerKind::eltwise: return "eltwise";
    }
    return "?";
}

std::string_view to_string(Bound b) {
    switch (b) {
        case Bound::compute: return "compute";
        case Bound::fm: return "fm";
        case Bound::wt: return "wt";
        case Bound::ddr: return "ddr";
    }
    return "?";
}

std::int64_t LayerShape::useful_macs() const {
    const std::int64_t taps = std::int64_t{k} * k;
    switch (kind) {
        case LayerKind::conv: return output_pixels() * taps * ic * oc;
        case LayerKind::dwc: return output_pixels() * taps * oc;
        default: return 0;
    }
}

int out_dim(int in, int k, int s, int pad) {
    if (s <= 0) return 0;
    const int span = in + 2 * pad - k;
    if (span < 0) return 0;
    return span / s + 1;
}

LayerShape make_layer(std::string name, LayerKind kind, int ih, int iw, int ic, int oc, int k,
                      int s, int pad) {
    LayerShape l;
    l.name = std::move(name);
    l.kind = kind;
    l.ih = ih;
    l.iw = iw;
    l.ic = ic;
    l.oc = oc;
    l.k = k;
    l.s = s;
    l.pad = pad;
    l.oh = out_dim(ih, k, s, pad);
    l.ow = out_dim(iw, k, s, pad);

    const std::int64_t in_bytes = std::int64_t{ih} * iw * ic;
    const std::int64_t out_bytes = std::int64_t{l.oh} * l.ow * oc;
    switch (kind) {
        case LayerKind::conv:
            l.weight_bytes = std::int64_t{k} * k * ic * oc + 4 * std::int64_t{oc};
            l.activation_bytes = in_bytes + out_bytes;
            break;
        case LayerKind::dwc:
            l.weight_bytes = std::int64_t{k} * k * oc + 4 * std::int64_t{oc};
            l.activation_bytes = in_bytes + out_bytes;
            break;
        case LayerKind::pool:
            l.activation_bytes = in_bytes + out_bytes;
            break;
        case LayerKind::eltwise:
            // two operands
            l.activation_bytes = 2 * in_bytes + out_bytes;
            break;
    }
    return l;
}

std::vector<std::string> check_layer(const LayerShape& l) {
    std::vector<std::string> v;
    if (std::min({l.ih, l.iw, l.ic, l.oc, l.k, l.s}) < 1) v.push_back("dims must be >= 1");
    if (l.pad < 0) v.push_back("padding must be >= 0");
    if (l.oh < 1 || l.ow < 1) v.push_back("kernel larger than padded input");
    if (l.oh != out_dim(l.ih, l.k, l.s, l.pad) || l.ow != out_dim(l.iw, l.k, l.s, l.pad))
        v.push_back("output dims inconsistent with input, kernel, stride and padding");
    if (l.kind == LayerKind::dwc) {
        if (l.k % 2 == 0 || l.k > 7) v.push_back("unsupported kernel " + std::to_string(l.k));
        if (l.s > 2) v.push_back("unsupported stride " + std::to_string(l.s));
        if (l.ic != l.oc) v.push_back("dwc layer needs ic == oc");
    }
    if ((l.kind == LayerKind::pool || l.kind == LayerKind::eltwise) && l.ic != l.oc)
        v.push_back(std::string(to_string(l.kind)) + " layer needs ic == oc");
    if (l.kind == LayerKind::eltwise && (l.k != 1 || l.s != 1 || l.pad != 0))
        v.push_back("eltwise layer needs k = 1, s = 1, pad = 0");
    return v;
}

Bound classify(std::int64_t compute, std::int64_t fm, std::int64_t wt) {
    if (compute >= fm && compute >= wt) return Bound::compute;
    return fm >= wt ? Bound::fm : Bound::wt;
}

std::int64_t CycleEstimate::cycles() const {
    return std::max({compute_cycles, fm_load_cycles, wt_load_cycles});
}

}  // namespace dpu
