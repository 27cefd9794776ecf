// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#include "dpu/workload.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "dpu/error.hpp"

namespace dpu {

namespace fixtures {
extern const std::string_view kResnet50;
extern const std::string_view kMobilenetV1;
}  // namespace fixtures

namespace {

LayerKind parse_kind(const std::string& s, int line) {
    if (s == "conv") return LayerKind::conv;
    if (s == "dwc") return LayerKind::dwc;
    if (s == "pool" || s == "maxpool" || s == "avgpool") return LayerKind::pool;
    if (s == "eltwise" || s == "add") return LayerKind::eltwise;
    throw ParseError("unknown layer kind '" + s + "'", line);
}

int parse_int(const std::string& s, const char* field, int line) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ParseError(std::string("field ") + field + ": not an integer '" + s + "'", line);
    return v;
}

}  // namespace

std::vector<LayerShape> parse_workload(const std::string& text) {
    static constexpr const char* kFields[] = {"ih", "iw", "ic", "oc", "k", "s", "pad"};
    std::vector<LayerShape> layers;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        raw = raw.substr(0, raw.find('#'));
        std::istringstream fields(raw);
        std::vector<std::string> tok;
        for (std::string t; fields >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        if (tok.size() != 9)
            throw ParseError("expected 9 fields (name kind ih iw ic oc k s pad), got " +
                                 std::to_string(tok.size()),
                             line_no);
        const LayerKind kind = parse_kind(tok[1], line_no);
        int v[7];
        for (int i = 0; i < 7; ++i) v[i] = parse_int(tok[2 + i], kFields[i], line_no);
        LayerShape l = make_layer(tok[0], kind, v[0], v[1], v[2], v[3], v[4], v[5], v[6]);
        if (auto bad = check_layer(l); !bad.empty())
            throw ParseError("layer " + l.name + ": " + bad.front(), line_no);
        layers.push_back(std::move(l));
    }
    if (layers.empty()) throw ParseError("no layers", 0);
    return layers;
}

std::vector<LayerShape> ingest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open workload file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_workload(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.detail(), e.line());
    }
}

std::string format_workload(const std::vector<LayerShape>& layers) {
    std::ostringstream out;
    out << "# name kind ih iw ic oc k s pad\n";
    for (const auto& l : layers)
        out << l.name << ' ' << to_string(l.kind) << ' ' << l.ih << ' ' << l.iw << ' ' << l.ic
            << ' ' << l.oc << ' ' << l.k << ' ' << l.s << ' ' << l.pad << '\n';
    return out.str();
}

std::vector<std::string> builtin_workload_names() { return {"resnet50", "mobilenet_v1"}; }

std::string_view builtin_workload_text(std::string_view name) {
    if (name == "resnet50") return fixtures::kResnet50;
    if (name == "mobilenet_v1" || name == "mobilenet") return fixtures::kMobilenetV1;
    throw Error("unknown builtin workload '" + std::string(name) + "'");
}

std::vector<LayerShape> builtin_workload(std::string_view name) {
    return parse_workload(std::string(builtin_workload_text(name)));
}

}  // namespace dpu
