// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#include "dpu/arch.hpp"

#include <algorithm>

#include "dpu/dwc_pe.hpp"
#include "dpu/error.hpp"

namespace dpu {

ArchConfig default_arch() { return ArchConfig{}; }

std::vector<std::string> check_arch(const ArchConfig& a) {
    std::vector<std::string> v;
    auto positive = [&](const char* name, double x) {
        if (!(x > 0)) v.push_back(std::string(name) + " must be > 0");
    };
    positive("aie_rows", a.aie_rows);
    positive("aie_cols", a.aie_cols);
    positive("interface_tiles_total", a.interface_tiles_total);
    positive("interface_tiles_pl", a.interface_tiles_pl);
    positive("streams_pl_to_aie_per_tile", a.streams_pl_to_aie_per_tile);
    positive("streams_aie_to_pl_per_tile", a.streams_aie_to_pl_per_tile);
    positive("stream_width_bits", a.stream_width_bits);
    positive("agg_bw_pl_to_aie", a.agg_bw_pl_to_aie);
    positive("agg_bw_aie_to_pl", a.agg_bw_aie_to_pl);
    positive("local_mem_banks", a.local_mem_banks);
    positive("bank_words", a.bank_words);
    positive("bank_word_bytes", a.bank_word_bytes);
    positive("mac_int8_per_core_per_cycle", a.mac_int8_per_core_per_cycle);
    positive("cascade_width_bits", a.cascade_width_bits);
    positive("aie_freq", a.aie_freq);
    positive("ddr_bw", a.ddr_bw);
    if (a.interface_tiles_pl > a.interface_tiles_total)
        v.push_back("interface_tiles_pl exceeds interface_tiles_total");
    if (a.local_mem_bytes() != 32768)
        v.push_back("local memory per core is " + std::to_string(a.local_mem_bytes()) +
                    " B, expected 32768 B (8 banks x 256 words x 16 B)");
    return v;
}

std::string_view to_string(PeKind kind) { return kind == PeKind::conv ? "conv" : "dwc"; }

std::string_view to_string(MiscLocation loc) { return loc == MiscLocation::aie ? "aie" : "pl"; }

PeKind parse_pe_kind(std::string_view s) {
    if (s == "conv") return PeKind::conv;
    if (s == "dwc") return PeKind::dwc;
    throw Error("unknown PE kind '" + std::string(s) + "'");
}

MiscLocation parse_misc_location(std::string_view s) {
    if (s == "aie") return MiscLocation::aie;
    if (s == "pl") return MiscLocation::pl;
    throw Error("unknown MISC location '" + std::string(s) + "'");
}

DpuConfig DpuConfig::uniform(int n_pe, PeKind kind) {
    DpuConfig cfg;
    cfg.n_pe = n_pe;
    cfg.pe_kinds.assign(static_cast<std::size_t>(std::max(n_pe, 0)), kind);
    return cfg;
}

int DpuConfig::count(PeKind kind) const {
    return static_cast<int>(std::count(pe_kinds.begin(), pe_kinds.end(), kind));
}

bool is_supported_pe_count(int n_pe) {
    return n_pe == 2 || n_pe == 4 || n_pe == 6 || n_pe == 8;
}

double peak_tops(const DpuConfig& cfg, const ArchConfig& arch) {
    if (!is_supported_pe_count(cfg.n_pe))
        throw Error("unsupported PE count " + std::to_string(cfg.n_pe) + " (expected 2/4/6/8)");
    return static_cast<double>(cfg.n_pe) * kCoresPerPe * arch.mac_int8_per_core_per_cycle * 2.0 *
           arch.aie_freq;
}

ValidationReport validate(const DpuConfig& cfg, const ArchConfig& arch) {
    ValidationReport r;
    r.violations = check_arch(arch);

    if (!is_supported_pe_count(cfg.n_pe))
        r.violations.push_back("n_pe must be one of 2/4/6/8, got " + std::to_string(cfg.n_pe));
    if (static_cast<int>(cfg.pe_kinds.size()) != cfg.n_pe)
        r.violations.push_back("pe_kinds lists " + std::to_string(cfg.pe_kinds.size()) +
                               " PEs but n_pe is " + std::to_string(cfg.n_pe));
    if (cfg.has_dwc() && cfg.n_pe > kMaxPeWithDwc)
        r.violations.push_back("dwc limits design to 6PE (n_pe = " + std::to_string(cfg.n_pe) +
                               ")");

    const auto& lc = cfg.low_channel;
    if (lc.enabled) {
        if (lc.h <= 0 || lc.ic <= 0 || lc.oc <= 0)
            r.violations.push_back("low-channel parallelism must be positive");
        if (lc.pack <= 0) r.violations.push_back("low-channel packing factor must be positive");
        if (!(lc.clock_hz > 0)) r.violations.push_back("low-channel clock must be positive");
    }

    {
        auto budget = dwc::interface_budget(cfg, arch);
        for (auto& v : budget.violations)
            if (std::find(r.violations.begin(), r.violations.end(), v) == r.violations.end())
                r.violations.push_back(v);
        r.notes.push_back("interface tiles: " + std::to_string(budget.tiles_required) + " of " +
                          std::to_string(budget.tiles_available));
        for (const auto& d : budget.per_pe)
            if (d.borrows_neighbor_tiles) {
                r.notes.push_back("dwc PE outputs use neighbouring interface tiles");
                break;
            }
    }
    return r;
}

}  // namespace dpu
