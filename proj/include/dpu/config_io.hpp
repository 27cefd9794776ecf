// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#pragma once

// Config files override any ArchConfig/DpuConfig field. Two syntaxes are
// accepted and map onto the same document:
//
//   JSON:       {"arch": {"aie_freq": 1.25e9}, "dpu": {"n_pe": 6}}
//   key/value:  arch.aie_freq = 1.25e9
//               dpu.n_pe = 6
//               dpu.pe_kinds = conv, conv, dwc, dwc, dwc, dwc
//               dpu.low_channel.enabled = true
//
// Missing fields keep their defaults. Unknown keys are rejected.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "dpu/arch.hpp"

namespace dpu {

struct Configs {
    ArchConfig arch = default_arch();
    DpuConfig dpu;
};

nlohmann::json to_json(const ArchConfig& arch);
nlohmann::json to_json(const DpuConfig& dpu);
nlohmann::json to_json(const Configs& cfg);

/// Applies the fields present in `j` on top of `base`.
ArchConfig arch_from_json(const nlohmann::json& j, ArchConfig base = default_arch());
DpuConfig dpu_from_json(const nlohmann::json& j, DpuConfig base = {});
Configs configs_from_json(const nlohmann::json& j, Configs base = {});

/// Parses either syntax. Throws ParseError.
Configs parse_config(const std::string& text, Configs base = {});
Configs load_config(const std::filesystem::path& path, Configs base = {});

}  // namespace dpu
