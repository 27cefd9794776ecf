// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#pragma once

// Device constants for the VC1902 AI Engine array and the DPU configuration
// space built on top of it. Every other module reads hardware parameters from
// here; nothing else hard-codes tile counts, stream widths or clocks.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dpu {

struct ArchConfig {
    // AIE array geometry
    int aie_rows = 8;
    int aie_cols = 50;
    int interface_tiles_total = 50;
    int interface_tiles_pl = 39;  ///< interface tiles with a PL connection

    // PL <-> AIE streams
    int streams_pl_to_aie_per_tile = 8;
    int streams_aie_to_pl_per_tile = 6;
    int stream_width_bits = 64;
    double agg_bw_pl_to_aie = 1.3e12;  ///< bytes/s, stored as given (not derived)
    double agg_bw_aie_to_pl = 1.0e12;  ///< bytes/s

    // Per-core data memory
    int local_mem_banks = 8;
    int bank_words = 256;
    int bank_word_bytes = 16;

    int mac_int8_per_core_per_cycle = 128;
    int cascade_width_bits = 384;

    double aie_freq = 1.333e9;  ///< Hz
    double ddr_bw = 102.4e9;    ///< bytes/s

    std::int64_t bank_bytes() const { return std::int64_t{bank_words} * bank_word_bytes; }
    std::int64_t local_mem_bytes() const { return bank_bytes() * local_mem_banks; }
    /// An ACC/NL pair sees its own memory module plus its neighbour's.
    std::int64_t pair_mem_bytes() const { return 2 * local_mem_bytes(); }
    int pair_banks() const { return 2 * local_mem_banks; }

    bool operator==(const ArchConfig&) const = default;
};

ArchConfig default_arch();

/// Consistency violations of an ArchConfig (empty when consistent).
std::vector<std::string> check_arch(const ArchConfig& arch);

enum class PeKind { conv, dwc };
enum class MiscLocation { aie, pl };

std::string_view to_string(PeKind kind);
std::string_view to_string(MiscLocation loc);
PeKind parse_pe_kind(std::string_view s);
MiscLocation parse_misc_location(std::string_view s);

/// PL-side engine for low input-channel first layers. Parallelism is
/// h (output rows) x ic (kernel-width-folded input channels) x oc.
struct LowChannelUnit {
    bool enabled = false;
    int h = 4;
    int ic = 21;
    int oc = 32;
    int pack = 4;             ///< INT8 MACs packed per DSP58
    double clock_hz = 300e6;  ///< PL clock of the unit

    bool operator==(const LowChannelUnit&) const = default;
};

/// Number of AIE cores in one processing engine (8 rows x 6 columns).
inline constexpr int kCoresPerPe = 48;
/// Layout limit for designs containing a DWC PE.
inline constexpr int kMaxPeWithDwc = 6;

struct DpuConfig {
    int n_pe = 8;
    std::vector<PeKind> pe_kinds = std::vector<PeKind>(8, PeKind::conv);
    LowChannelUnit low_channel;
    MiscLocation misc_location = MiscLocation::aie;

    static DpuConfig uniform(int n_pe, PeKind kind);

    int count(PeKind kind) const;
    bool has_dwc() const { return count(PeKind::dwc) > 0; }

    bool operator==(const DpuConfig&) const = default;
};

bool is_supported_pe_count(int n_pe);

/// Peak INT8 throughput in ops/s, counting all 48 cores of every PE and two
/// ops per MAC. Throws Error for an unsupported PE count.
double peak_tops(const DpuConfig& cfg, const ArchConfig& arch);

struct ValidationReport {
    std::vector<std::string> violations;
    std::vector<std::string> notes;
    bool ok() const { return violations.empty(); }
};

/// Aggregates ArchConfig/DpuConfig invariants and the interface-tile budget.
ValidationReport validate(const DpuConfig& cfg, const ArchConfig& arch);

}  // namespace dpu
