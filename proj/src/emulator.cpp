// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#include "dpu/emulator.hpp"

#include <algorithm>
#include <cstdlib>

#include "dpu/conv_pe.hpp"
#include "dpu/dwc_pe.hpp"
#include "dpu/error.hpp"

namespace dpu::emu {

std::int64_t check_acc(std::int64_t v) {
    if (v > kAccMax || v < kAccMin)
        throw OverflowError("accumulator value " + std::to_string(v) + " exceeds 48 bits");
    return v;
}

Accumulator mac_1x16x8(const FeatureVector& f, const WeightTile& w, const Accumulator& acc_in) {
    Accumulator out = acc_in;
    for (int o = 0; o < 8; ++o) {
        std::int64_t sum = 0;
        for (int i = 0; i < 16; ++i) sum += std::int64_t{f[i]} * w[i][o];
        out.lanes[o] = check_acc(out.lanes[o] + sum);
    }
    return out;
}

Accumulator cascade_chain(std::span<const FeatureVector> f_tiles,
                          std::span<const WeightTile> w_tiles) {
    if (f_tiles.empty()) throw Error("cascade chain needs at least one core");
    if (f_tiles.size() != w_tiles.size())
        throw Error("cascade chain: " + std::to_string(f_tiles.size()) + " feature tiles vs " +
                    std::to_string(w_tiles.size()) + " weight tiles");
    Accumulator acc;
    for (std::size_t j = 0; j < f_tiles.size(); ++j) acc = mac_1x16x8(f_tiles[j], w_tiles[j], acc);
    return acc;
}

std::int64_t round_shift(std::int64_t v, int shift) {
    if (shift == 0) return v;
    if (shift < 0) {
        if (shift < -40) throw Error("requant shift out of range");
        return v * (std::int64_t{1} << -shift);
    }
    if (shift > 62) return 0;
    const std::int64_t mag = v < 0 ? -v : v;
    const std::int64_t q = (mag + (std::int64_t{1} << (shift - 1))) >> shift;
    return v < 0 ? -q : q;
}

std::int8_t saturate_i8(std::int64_t v) { return static_cast<std::int8_t>(std::clamp<std::int64_t>(v, -128, 127)); }

std::int8_t apply_nl(std::int64_t acc, const NlSpec& nl) {
    std::int64_t v = acc;
    switch (nl.kind) {
        case Activation::identity: break;
        case Activation::relu: v = std::max<std::int64_t>(v, 0); break;
        case Activation::leaky_relu:
            if (v < 0) v = round_shift(v, nl.alpha_shift);
            break;
    }
    return saturate_i8(round_shift(v, nl.requant_shift));
}

namespace {

void expect_dims(const QTensor& t, TensorDims want, const char* what) {
    const auto& d = t.dims();
    if (!(d == want))
        throw Error(std::string(what) + " dims (" + std::to_string(d.n) + "," + std::to_string(d.h) +
                    "," + std::to_string(d.w) + "," + std::to_string(d.c) + ") expected (" +
                    std::to_string(want.n) + "," + std::to_string(want.h) + "," +
                    std::to_string(want.w) + "," + std::to_string(want.c) + ")");
}

void check_shape(const LayerShape& layer, LayerKind kind) {
    if (layer.kind != kind)
        throw Error("expected a " + std::string(to_string(kind)) + " layer, got " +
                    std::string(to_string(layer.kind)));
    auto v = check_layer(layer);
    if (!v.empty()) throw Error("layer " + layer.name + ": " + v.front());
}

// Loader-side zero padding.
inline std::int8_t fetch(const QTensor& in, int y, int x, int c) {
    const auto& d = in.dims();
    if (y < 0 || x < 0 || y >= d.h || x >= d.w || c >= d.c) return 0;
    return in.at(0, y, x, c);
}

QTensor finish(const LayerShape& layer, std::span<const std::int64_t> psum,
               std::span<const std::int32_t> bias, const NlSpec& nl, int scale_exp) {
    std::vector<std::int8_t> out(psum.size());
    for (std::size_t i = 0; i < psum.size(); ++i) {
        const auto o = static_cast<std::size_t>(i % static_cast<std::size_t>(layer.oc));
        out[i] = apply_nl(check_acc(psum[i] + bias[o]), nl);
    }
    return QTensor({1, layer.oh, layer.ow, layer.oc}, std::move(out), scale_exp);
}

using LaneAcc = std::array<std::array<std::int64_t, dwc::kLanes>, dwc::kAtomicOw>;

// One atomic DWC computation: outputs (oy, ox0) and (oy, ox0+1) for 16 lanes.
// Per kernel row the taps go in pairs; each cycle issues two 16-lane vector
// MACs (taps 2p and 2p+1) for one of the two output pixels. `weight(ky, tap,
// lane)` is zero for the padded odd tap. Lane l reads input channel c0 + l.
template <class WeightFn>
void atomic_dwc(const QTensor& in, int oy, int ox0, int k, int s, int pad, int c0,
                WeightFn&& weight, LaneAcc& acc, EmuStats* stats) {
    const int pairs = (k + 1) / 2;
    std::int64_t cycles = 0;
    for (int ky = 0; ky < k; ++ky) {
        const int y = oy * s + ky - pad;
        for (int p = 0; p < pairs; ++p) {
            for (int j = 0; j < dwc::kAtomicOw; ++j) {
                const int xb = (ox0 + j) * s - pad;
                for (int tap = 2 * p; tap < 2 * p + 2; ++tap) {
                    for (int l = 0; l < dwc::kLanes; ++l) {
                        const std::int64_t prod =
                            std::int64_t{fetch(in, y, xb + tap, c0 + l)} * weight(ky, tap, l);
                        acc[j][l] = check_acc(acc[j][l] + prod);
                    }
                }
                ++cycles;
            }
        }
    }
    if (stats) {
        ++stats->atomic_ops;
        stats->dwc_cycles += cycles;
        stats->mac_ops += 2 * cycles;
    }
}

// Walks a layer in 2(OH) x 8(OW) chain iterations of 8 atomic computations.
template <class AtomicFn>
void for_each_atomic(const LayerShape& layer, AtomicFn&& fn) {
    for (int oh0 = 0; oh0 < layer.oh; oh0 += dwc::kIterOh)
        for (int ow0 = 0; ow0 < layer.ow; ow0 += dwc::kIterOw)
            for (int r = 0; r < dwc::kIterOh; ++r)
                for (int a = 0; a < dwc::kIterOw / dwc::kAtomicOw; ++a)
                    fn(oh0 + r, ow0 + a * dwc::kAtomicOw);
}

// Zero-padded, lane-aligned weight vectors of one 16-channel block:
// [ky][tap][lane], taps rounded up to an even count.
struct DwcWeightBlock {
    int k = 0;
    int taps = 0;
    std::vector<std::int8_t> v;
    std::int8_t operator()(int ky, int tap, int lane) const {
        return v[(static_cast<std::size_t>(ky) * taps + tap) * dwc::kLanes + lane];
    }
};

template <class Src>
DwcWeightBlock pack_block(int k, Src&& src) {
    DwcWeightBlock b;
    b.k = k;
    b.taps = 2 * ((k + 1) / 2);
    b.v.assign(static_cast<std::size_t>(k) * b.taps * dwc::kLanes, 0);
    for (int ky = 0; ky < k; ++ky)
        for (int kx = 0; kx < k; ++kx)
            for (int l = 0; l < dwc::kLanes; ++l)
                b.v[(static_cast<std::size_t>(ky) * b.taps + kx) * dwc::kLanes + l] = src(ky, kx, l);
    return b;
}

}  // namespace

QTensor conv_forward(const QTensor& input, const QTensor& weights,
                     std::span<const std::int32_t> bias, const LayerShape& layer,
                     const NlSpec& nl, EmuStats* stats) {
    check_shape(layer, LayerKind::conv);
    expect_dims(input, {1, layer.ih, layer.iw, layer.ic}, "input");
    expect_dims(weights, {layer.oc, layer.k, layer.k, layer.ic}, "weights");
    if (bias.size() != static_cast<std::size_t>(layer.oc)) throw Error("bias length != oc");

    const conv::GraphGranularity g;
    const int lane_groups = g.core.oc / 8;                   // 8-lane MAC groups per core tile
    const int px_per_core = g.core.ih;                       // pixels per core per step
    const int px_per_step = px_per_core * g.wt_broadcast;    // 8
    const int ic_blocks = static_cast<int>(ceil_div(layer.ic, g.ic));
    const int oc_blocks = static_cast<int>(ceil_div(layer.oc, g.oc));
    const std::int64_t pixels = layer.output_pixels();
    const std::int64_t steps = ceil_div(pixels, px_per_step);

    std::vector<std::int64_t> psum(static_cast<std::size_t>(pixels) * layer.oc, 0);

    // Weight tiles for one (oc block, kernel position, ic block):
    // [fm_broadcast][lane group][cascade stage]
    std::vector<WeightTile> wt(static_cast<std::size_t>(g.fm_broadcast) * lane_groups * g.cascade_len);
    std::vector<FeatureVector> ft(static_cast<std::size_t>(g.cascade_len));

    for (int ob = 0; ob < oc_blocks; ++ob) {
        for (int ky = 0; ky < layer.k; ++ky) {
            for (int kx = 0; kx < layer.k; ++kx) {
                for (int ib = 0; ib < ic_blocks; ++ib) {
                    for (int fb = 0; fb < g.fm_broadcast; ++fb)
                        for (int lg = 0; lg < lane_groups; ++lg)
                            for (int st = 0; st < g.cascade_len; ++st) {
                                WeightTile& t = wt[(static_cast<std::size_t>(fb) * lane_groups + lg) *
                                                       g.cascade_len + st];
                                for (int i = 0; i < 16; ++i)
                                    for (int o = 0; o < 8; ++o) {
                                        const int ic = ib * g.ic + st * g.core.ic + i;
                                        const int oc = ob * g.oc + fb * g.core.oc + lg * 8 + o;
                                        t[i][o] = (ic < layer.ic && oc < layer.oc)
                                                      ? weights.at(oc, ky, kx, ic)
                                                      : std::int8_t{0};
                                    }
                            }

                    for (std::int64_t step = 0; step < steps; ++step) {
                        for (int wb = 0; wb < g.wt_broadcast; ++wb) {
                            for (int q = 0; q < px_per_core; ++q) {
                                const std::int64_t p = step * px_per_step + wb * px_per_core + q;
                                const bool real = p < pixels;
                                const int oy = real ? static_cast<int>(p / layer.ow) : 0;
                                const int ox = real ? static_cast<int>(p % layer.ow) : 0;
                                const int y = oy * layer.s + ky - layer.pad;
                                const int x = ox * layer.s + kx - layer.pad;
                                for (int st = 0; st < g.cascade_len; ++st)
                                    for (int i = 0; i < 16; ++i)
                                        ft[st][i] = real ? fetch(input, y, x, ib * g.ic + st * g.core.ic + i)
                                                         : std::int8_t{0};

                                for (int fb = 0; fb < g.fm_broadcast; ++fb)
                                    for (int lg = 0; lg < lane_groups; ++lg) {
                                        const auto* tiles =
                                            &wt[(static_cast<std::size_t>(fb) * lane_groups + lg) *
                                                g.cascade_len];
                                        const Accumulator acc = cascade_chain(
                                            ft, std::span<const WeightTile>(tiles, g.cascade_len));
                                        if (stats) {
                                            ++stats->cascade_chains;
                                            stats->mac_ops += g.cascade_len;
                                        }
                                        if (!real) continue;
                                        // ACC core: kernel-level accumulation
                                        for (int o = 0; o < 8; ++o) {
                                            const int oc = ob * g.oc + fb * g.core.oc + lg * 8 + o;
                                            if (oc >= layer.oc) continue;
                                            auto& cell = psum[static_cast<std::size_t>(p) * layer.oc + oc];
                                            cell = check_acc(cell + acc.lanes[o]);
                                        }
                                    }
                            }
                        }
                    }
                }
            }
        }
    }
    return finish(layer, psum, bias, nl, input.scale_exp() + weights.scale_exp() + nl.requant_shift);
}

QTensor dwc_forward(const QTensor& input, const QTensor& weights,
                    std::span<const std::int32_t> bias, const LayerShape& layer,
                    const NlSpec& nl, EmuStats* stats) {
    check_shape(layer, LayerKind::dwc);
    if (!dwc::is_supported(layer.k, layer.s)) throw Error("unsupported dwc kernel/stride");
    expect_dims(input, {1, layer.ih, layer.iw, layer.ic}, "input");
    expect_dims(weights, {1, layer.k, layer.k, layer.oc}, "weights");
    if (bias.size() != static_cast<std::size_t>(layer.oc)) throw Error("bias length != channels");

    const int C = layer.oc;
    std::vector<std::int64_t> psum(static_cast<std::size_t>(layer.output_pixels()) * C, 0);

    for (int c0 = 0; c0 < C; c0 += dwc::kLanes) {
        const DwcWeightBlock wb = pack_block(layer.k, [&](int ky, int kx, int l) {
            return c0 + l < C ? weights.at(0, ky, kx, c0 + l) : std::int8_t{0};
        });
        for_each_atomic(layer, [&](int oy, int ox0) {
            LaneAcc acc{};
            atomic_dwc(input, oy, ox0, layer.k, layer.s, layer.pad, c0, wb, acc, stats);
            if (oy >= layer.oh) return;
            for (int j = 0; j < dwc::kAtomicOw; ++j) {
                const int ox = ox0 + j;
                if (ox >= layer.ow) continue;
                for (int l = 0; l < dwc::kLanes && c0 + l < C; ++l)
                    psum[(static_cast<std::size_t>(oy) * layer.ow + ox) * C + c0 + l] = acc[j][l];
            }
        });
    }
    return finish(layer, psum, bias, nl, input.scale_exp() + weights.scale_exp() + nl.requant_shift);
}

QTensor conv_forward_dwc_path(const QTensor& input, const QTensor& weights,
                              std::span<const std::int32_t> bias, const LayerShape& layer,
                              const NlSpec& nl, EmuStats* stats) {
    check_shape(layer, LayerKind::conv);
    expect_dims(input, {1, layer.ih, layer.iw, layer.ic}, "input");
    expect_dims(weights, {layer.oc, layer.k, layer.k, layer.ic}, "weights");
    if (bias.size() != static_cast<std::size_t>(layer.oc)) throw Error("bias length != oc");

    std::vector<std::int64_t> psum(static_cast<std::size_t>(layer.output_pixels()) * layer.oc, 0);
    for (int oc = 0; oc < layer.oc; ++oc) {
        for (int c0 = 0; c0 < layer.ic; c0 += dwc::kLanes) {
            const DwcWeightBlock wb = pack_block(layer.k, [&](int ky, int kx, int l) {
                return c0 + l < layer.ic ? weights.at(oc, ky, kx, c0 + l) : std::int8_t{0};
            });
            for_each_atomic(layer, [&](int oy, int ox0) {
                LaneAcc acc{};
                atomic_dwc(input, oy, ox0, layer.k, layer.s, layer.pad, c0, wb, acc, stats);
                if (oy >= layer.oh) return;
                // RACNL: reduce lanes, accumulate across IC blocks
                for (int j = 0; j < dwc::kAtomicOw; ++j) {
                    const int ox = ox0 + j;
                    if (ox >= layer.ow) continue;
                    std::int64_t sum = 0;
                    for (int l = 0; l < dwc::kLanes; ++l) sum += acc[j][l];
                    auto& cell = psum[(static_cast<std::size_t>(oy) * layer.ow + ox) * layer.oc + oc];
                    cell = check_acc(cell + sum);
                }
            });
        }
    }
    return finish(layer, psum, bias, nl, input.scale_exp() + weights.scale_exp() + nl.requant_shift);
}

DiffReport diff(const QTensor& a, const QTensor& b) {
    if (!(a.dims() == b.dims())) throw Error("cannot diff tensors with different dims");
    DiffReport r;
    r.elements = a.data().size();
    for (std::size_t i = 0; i < r.elements; ++i) {
        const int d = std::abs(int{a.data()[i]} - int{b.data()[i]});
        if (d != 0) ++r.mismatches;
        r.max_abs_diff = std::max(r.max_abs_diff, d);
    }
    if (a.scale_exp() != b.scale_exp()) r.mismatches = std::max<std::size_t>(r.mismatches, 1);
    return r;
}

}  // namespace dpu::emu
