// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#include "dpu/dse.hpp"

#include <algorithm>

#include "dpu/error.hpp"
#include "dpu/layer.hpp"

namespace dpu::dse {

namespace {

void require_positive(std::int64_t v, const char* what) {
    if (v <= 0) throw Error(std::string(what) + " must be > 0");
}

}  // namespace

std::int64_t fm_load_cycles(std::int64_t wt_reuse, int bw_f) {
    require_positive(wt_reuse, "wt_reuse");
    require_positive(bw_f, "feature-map bandwidth");
    return ceil_div(wt_reuse * kFeatureVectorBits, bw_f);
}

std::int64_t wt_load_cycles(std::int64_t fm_reuse, int bw_w) {
    require_positive(fm_reuse, "fm_reuse");
    require_positive(bw_w, "weight bandwidth");
    return ceil_div(fm_reuse * kWeightTileBits, bw_w);
}

ParallelismScheme evaluate(BandwidthSplit split, std::int64_t fm_reuse, std::int64_t wt_reuse,
                           int input_budget_bits) {
    ParallelismScheme s;
    s.split = split;
    s.fm_reuse = fm_reuse;
    s.wt_reuse = wt_reuse;
    s.fm_load = fm_load_cycles(wt_reuse, split.bw_f);
    s.wt_load = wt_load_cycles(fm_reuse, split.bw_w);
    s.t_mac = wt_reuse * fm_reuse;
    s.oc_required = kOcPerMac * fm_reuse;
    s.pixels_required = wt_reuse;
    s.ctc = static_cast<double>(s.t_mac) / static_cast<double>(std::max(s.fm_load, s.wt_load));
    if (split.bw_f + split.bw_w > input_budget_bits)
        s.warnings.push_back("bw_f + bw_w = " + std::to_string(split.bw_f + split.bw_w) +
                             " bits exceeds the " + std::to_string(input_budget_bits) +
                             "-bit per-core input stream");
    return s;
}

ParallelismScheme min_balanced_scheme(BandwidthSplit split, int input_budget_bits) {
    require_positive(split.bw_f, "feature-map bandwidth");
    require_positive(split.bw_w, "weight bandwidth");
    // FMLoad <= T_mac reduces to FMReuse >= 128 / BW_f for every WTReuse, and
    // WTLoad <= T_mac to WTReuse >= 1024 / BW_w, so the two minima decouple.
    const std::int64_t fm_reuse = ceil_div(kFeatureVectorBits, split.bw_f);
    const std::int64_t wt_reuse = ceil_div(kWeightTileBits, split.bw_w);
    return evaluate(split, fm_reuse, wt_reuse, input_budget_bits);
}

std::vector<ParallelismScheme> sweep(std::vector<BandwidthSplit> splits, int input_budget_bits) {
    std::sort(splits.begin(), splits.end());
    std::vector<ParallelismScheme> out;
    out.reserve(splits.size());
    for (const auto& s : splits) out.push_back(min_balanced_scheme(s, input_budget_bits));
    return out;
}

std::vector<BandwidthSplit> grid(const std::vector<int>& bw_f, const std::vector<int>& bw_w) {
    std::vector<BandwidthSplit> g;
    for (int f : bw_f)
        for (int w : bw_w) g.push_back({f, w});
    return g;
}

}  // namespace dpu::dse
