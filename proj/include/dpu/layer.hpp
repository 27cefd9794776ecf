// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dpu {

enum class LayerKind { conv, dwc, pool, eltwise };

std::string_view to_string(LayerKind kind);

/// One CNN layer. Activations and weights are INT8.
struct LayerShape {
    std::string name;
    LayerKind kind = LayerKind::conv;
    int ih = 1, iw = 1, ic = 1;
    int oh = 1, ow = 1, oc = 1;
    int k = 1;
    int s = 1;
    int pad = 0;
    std::int64_t weight_bytes = 0;      ///< kernel + int32 bias
    std::int64_t activation_bytes = 0;  ///< inputs read + outputs written

    std::int64_t output_pixels() const { return std::int64_t{oh} * ow; }
    std::int64_t output_elems() const { return output_pixels() * oc; }
    /// MACs the layer needs on an ideal machine (0 for pool/eltwise).
    std::int64_t useful_macs() const;

    bool operator==(const LayerShape&) const = default;
};

/// floor((in + 2*pad - k) / s) + 1, or 0 when the kernel does not fit.
int out_dim(int in, int k, int s, int pad);

/// Builds a layer with derived output dims and byte counts.
LayerShape make_layer(std::string name, LayerKind kind, int ih, int iw, int ic, int oc, int k,
                      int s, int pad);

/// Invariant violations (empty when valid).
std::vector<std::string> check_layer(const LayerShape& layer);

enum class Bound { compute, fm, wt, ddr };

std::string_view to_string(Bound b);

struct CycleEstimate {
    std::int64_t compute_cycles = 0;
    std::int64_t fm_load_cycles = 0;
    std::int64_t wt_load_cycles = 0;
    Bound bound = Bound::compute;
    double utilization = 0.0;
    std::int64_t useful_macs = 0;
    bool low_channel_candidate = false;

    /// Cycles with loads double-buffered against compute.
    std::int64_t cycles() const;
};

/// Argmax of the three terms; ties resolve towards compute.
Bound classify(std::int64_t compute, std::int64_t fm, std::int64_t wt);

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

}  // namespace dpu
