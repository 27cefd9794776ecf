// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#include "dpu/config_io.hpp"

#include <fstream>
#include <sstream>

#include "dpu/error.hpp"

namespace dpu {

using nlohmann::json;

namespace {

// Field table shared by serialization and parsing.
template <class F>
void for_each_arch_field(ArchConfig& a, F&& f) {
    f("aie_rows", a.aie_rows);
    f("aie_cols", a.aie_cols);
    f("interface_tiles_total", a.interface_tiles_total);
    f("interface_tiles_pl", a.interface_tiles_pl);
    f("streams_pl_to_aie_per_tile", a.streams_pl_to_aie_per_tile);
    f("streams_aie_to_pl_per_tile", a.streams_aie_to_pl_per_tile);
    f("stream_width_bits", a.stream_width_bits);
    f("agg_bw_pl_to_aie", a.agg_bw_pl_to_aie);
    f("agg_bw_aie_to_pl", a.agg_bw_aie_to_pl);
    f("local_mem_banks", a.local_mem_banks);
    f("bank_words", a.bank_words);
    f("bank_word_bytes", a.bank_word_bytes);
    f("mac_int8_per_core_per_cycle", a.mac_int8_per_core_per_cycle);
    f("cascade_width_bits", a.cascade_width_bits);
    f("aie_freq", a.aie_freq);
    f("ddr_bw", a.ddr_bw);
}

template <class F>
void for_each_lc_field(LowChannelUnit& u, F&& f) {
    f("enabled", u.enabled);
    f("h", u.h);
    f("ic", u.ic);
    f("oc", u.oc);
    f("pack", u.pack);
    f("clock_hz", u.clock_hz);
}

template <class T>
void read_field(const json& j, const char* key, T& out, const std::string& where) {
    try {
        out = j.get<T>();
    } catch (const json::exception&) {
        throw ParseError("bad value for " + where + key + ": " + j.dump(), 0);
    }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known,
                    const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) throw ParseError("unknown config key " + where + it.key(), 0);
    }
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

json scalar_from_text(const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    try {
        std::size_t pos = 0;
        const long long i = std::stoll(v, &pos);
        if (pos == v.size()) return i;
    } catch (...) {
    }
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos == v.size()) return d;
    } catch (...) {
    }
    return v;
}

json kv_to_json(const std::string& text) {
    json doc = json::object();
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", line_no);

        json* node = &doc;
        std::size_t start = 0;
        while (true) {
            const auto dot = key.find('.', start);
            const std::string part = key.substr(start, dot - start);
            if (dot == std::string::npos) {
                if (part == "pe_kinds") {
                    json arr = json::array();
                    std::istringstream parts(val);
                    std::string item;
                    while (std::getline(parts, item, ','))
                        if (auto t = trim(item); !t.empty()) arr.push_back(t);
                    (*node)[part] = arr;
                } else {
                    (*node)[part] = scalar_from_text(val);
                }
                break;
            }
            node = &(*node)[part];
            if (!node->is_object() && !node->is_null())
                throw ParseError("key " + key + " conflicts with a scalar", line_no);
            start = dot + 1;
        }
    }
    return doc;
}

}  // namespace

json to_json(const ArchConfig& arch) {
    json j;
    ArchConfig a = arch;
    for_each_arch_field(a, [&](const char* k, auto& v) { j[k] = v; });
    return j;
}

json to_json(const DpuConfig& dpu) {
    json j;
    j["n_pe"] = dpu.n_pe;
    j["pe_kinds"] = json::array();
    for (auto k : dpu.pe_kinds) j["pe_kinds"].push_back(std::string(to_string(k)));
    LowChannelUnit u = dpu.low_channel;
    for_each_lc_field(u, [&](const char* k, auto& v) { j["low_channel"][k] = v; });
    j["misc_location"] = std::string(to_string(dpu.misc_location));
    return j;
}

json to_json(const Configs& cfg) { return json{{"arch", to_json(cfg.arch)}, {"dpu", to_json(cfg.dpu)}}; }

ArchConfig arch_from_json(const json& j, ArchConfig base) {
    if (!j.is_object()) throw ParseError("arch section must be an object", 0);
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool found = false;
        for_each_arch_field(base, [&](const char* k, auto& v) {
            if (it.key() == k) {
                read_field(it.value(), k, v, "arch.");
                found = true;
            }
        });
        if (!found) throw ParseError("unknown config key arch." + it.key(), 0);
    }
    return base;
}

DpuConfig dpu_from_json(const json& j, DpuConfig base) {
    if (!j.is_object()) throw ParseError("dpu section must be an object", 0);
    reject_unknown(j, {"n_pe", "pe_kinds", "low_channel", "misc_location"}, "dpu.");
    bool kinds_given = false;
    if (j.contains("n_pe")) read_field(j["n_pe"], "n_pe", base.n_pe, "dpu.");
    if (j.contains("pe_kinds")) {
        if (!j["pe_kinds"].is_array()) throw ParseError("dpu.pe_kinds must be a list", 0);
        base.pe_kinds.clear();
        for (const auto& k : j["pe_kinds"]) {
            if (!k.is_string()) throw ParseError("dpu.pe_kinds entries must be strings", 0);
            try {
                base.pe_kinds.push_back(parse_pe_kind(k.get<std::string>()));
            } catch (const Error& e) {
                throw ParseError(e.what(), 0);
            }
        }
        kinds_given = true;
    }
    // n_pe alone resizes the kind list, keeping the first kind as filler.
    if (!kinds_given && static_cast<int>(base.pe_kinds.size()) != base.n_pe && base.n_pe > 0) {
        const PeKind fill = base.pe_kinds.empty() ? PeKind::conv : base.pe_kinds.front();
        base.pe_kinds.assign(static_cast<std::size_t>(base.n_pe), fill);
    }
    if (j.contains("low_channel")) {
        const json& lc = j["low_channel"];
        if (!lc.is_object()) throw ParseError("dpu.low_channel must be an object", 0);
        for (auto it = lc.begin(); it != lc.end(); ++it) {
            bool found = false;
            for_each_lc_field(base.low_channel, [&](const char* k, auto& v) {
                if (it.key() == k) {
                    read_field(it.value(), k, v, "dpu.low_channel.");
                    found = true;
                }
            });
            if (!found) throw ParseError("unknown config key dpu.low_channel." + it.key(), 0);
        }
    }
    if (j.contains("misc_location")) {
        try {
            base.misc_location = parse_misc_location(j["misc_location"].get<std::string>());
        } catch (const std::exception& e) {
            throw ParseError(std::string("dpu.misc_location: ") + e.what(), 0);
        }
    }
    return base;
}

Configs configs_from_json(const json& j, Configs base) {
    if (!j.is_object()) throw ParseError("config must be an object", 0);
    reject_unknown(j, {"arch", "dpu"}, "");
    if (j.contains("arch")) base.arch = arch_from_json(j["arch"], base.arch);
    if (j.contains("dpu")) base.dpu = dpu_from_json(j["dpu"], base.dpu);
    return base;
}

Configs parse_config(const std::string& text, Configs base) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
        }
        return configs_from_json(j, std::move(base));
    }
    return configs_from_json(kv_to_json(text), std::move(base));
}

Configs load_config(const std::filesystem::path& path, Configs base) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

}  // namespace dpu
