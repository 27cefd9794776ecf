// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#include <cstdio>
#include <sstream>

#include "dpu/scheduler.hpp"

namespace dpu::sched {

namespace {

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string pad(std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
}

std::string rpad(std::string s, std::size_t w) {
    if (s.size() < w) s.insert(0, w - s.size(), ' ');
    return s;
}

}  // namespace

Report report(const Schedule& s) {
    Report r;
    r.n_pe = s.dpu.n_pe;
    r.batch = s.batch;
    r.total_cycles = s.total_cycles;
    r.steady_cycles = s.steady_cycles;
    r.latency_s = s.estimated_latency_s;
    r.fps = s.estimated_fps;
    r.useful_macs = s.useful_macs;
    r.warnings = s.warnings;
    r.peak_fraction = 2.0 * static_cast<double>(s.useful_macs) * s.estimated_fps / peak_tops(s.dpu, s.arch);

    for (std::size_t i = 0; i < s.layers.size(); ++i) {
        const auto& l = s.layers[i];
        const auto& a = s.assignments[i];
        LayerRow row;
        row.name = l.name;
        row.kind = l.kind;
        row.engine = a.engine;
        row.cycles = a.cycles;
        row.compute_cycles = a.per_image.compute_cycles * a.rounds;
        row.fm_load_cycles = a.per_image.fm_load_cycles * a.rounds;
        row.wt_load_cycles = a.per_image.wt_load_cycles * a.rounds;
        row.ddr_cycles = a.ddr.total();
        row.utilization = a.utilization;
        row.bound = a.bound;
        row.overlapped = a.overlapped;
        if (l.kind == LayerKind::conv &&
            (!r.lowest_utilization_conv || row.utilization < r.rows[*r.lowest_utilization_conv].utilization))
            r.lowest_utilization_conv = r.rows.size();
        r.rows.push_back(std::move(row));
    }
    return r;
}

std::string to_text(const Report& r) {
    std::ostringstream os;
    os << pad("layer", 22) << pad("kind", 9) << pad("engine", 13) << rpad("cycles", 10) << rpad("compute", 10)
       << rpad("fm", 10) << rpad("wt", 10) << rpad("ddr", 10) << rpad("util", 8) << "  bound\n";
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const auto& row = r.rows[i];
        os << pad(row.name, 22) << pad(std::string(to_string(row.kind)), 9)
           << pad(std::string(to_string(row.engine)), 13) << rpad(std::to_string(row.cycles), 10)
           << rpad(std::to_string(row.compute_cycles), 10) << rpad(std::to_string(row.fm_load_cycles), 10)
           << rpad(std::to_string(row.wt_load_cycles), 10) << rpad(std::to_string(row.ddr_cycles), 10)
           << rpad(fmt("%.1f%%", row.utilization * 100.0), 8) << "  " << to_string(row.bound);
        if (row.overlapped) os << " (overlapped)";
        if (r.lowest_utilization_conv == i) os << "  <- lowest conv utilization";
        os << '\n';
    }
    os << "\nPEs " << r.n_pe << ", batch " << r.batch << '\n'
       << "critical path   " << r.total_cycles << " cycles (" << fmt("%.3f", r.latency_s * 1e3) << " ms)\n"
       << "steady state    " << r.steady_cycles << " cycles per batch\n"
       << "throughput      " << fmt("%.1f", r.fps) << " fps\n"
       << "peak fraction   " << fmt("%.1f%%", r.peak_fraction * 100.0) << '\n';
    for (const auto& w : r.warnings) os << "warning: " << w << '\n';
    return os.str();
}

std::string to_csv(const Report& r) {
    std::ostringstream os;
    os << "name,kind,engine,cycles,compute_cycles,fm_load_cycles,wt_load_cycles,ddr_cycles,utilization,bound,"
          "overlapped,lowest_conv\n";
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const auto& row = r.rows[i];
        os << row.name << ',' << to_string(row.kind) << ',' << to_string(row.engine) << ',' << row.cycles << ','
           << row.compute_cycles << ',' << row.fm_load_cycles << ',' << row.wt_load_cycles << ','
           << row.ddr_cycles << ',' << fmt("%.6f", row.utilization) << ',' << to_string(row.bound) << ','
           << (row.overlapped ? 1 : 0) << ',' << (r.lowest_utilization_conv == i ? 1 : 0) << '\n';
    }
    return os.str();
}

nlohmann::json to_json(const Report& r) {
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& row : r.rows)
        layers.push_back({{"name", row.name},
                          {"kind", to_string(row.kind)},
                          {"engine", to_string(row.engine)},
                          {"cycles", row.cycles},
                          {"compute_cycles", row.compute_cycles},
                          {"fm_load_cycles", row.fm_load_cycles},
                          {"wt_load_cycles", row.wt_load_cycles},
                          {"ddr_cycles", row.ddr_cycles},
                          {"utilization", row.utilization},
                          {"bound", to_string(row.bound)},
                          {"overlapped", row.overlapped}});
    nlohmann::json j = {{"n_pe", r.n_pe},
                        {"batch", r.batch},
                        {"total_cycles", r.total_cycles},
                        {"steady_cycles", r.steady_cycles},
                        {"latency_s", r.latency_s},
                        {"fps", r.fps},
                        {"peak_fraction", r.peak_fraction},
                        {"useful_macs", r.useful_macs},
                        {"layers", layers},
                        {"warnings", r.warnings}};
    j["lowest_utilization_conv"] =
        r.lowest_utilization_conv ? nlohmann::json(r.rows[*r.lowest_utilization_conv].name) : nlohmann::json();
    return j;
}

std::string schedule_text(const Schedule& s) {
    std::ostringstream os;
    os << pad("layer", 22) << pad("engine", 13) << pad("PEs", 18) << rpad("rounds", 7) << rpad("cycles", 11)
       << "  bound\n";
    for (std::size_t i = 0; i < s.layers.size(); ++i) {
        const auto& a = s.assignments[i];
        std::string pes;
        for (int p : a.pe_indices) pes += (pes.empty() ? "" : ",") + std::to_string(p);
        if (pes.empty()) pes = "-";
        os << pad(s.layers[i].name, 22) << pad(std::string(to_string(a.engine)), 13) << pad(pes, 18)
           << rpad(std::to_string(a.rounds), 7) << rpad(std::to_string(a.cycles), 11) << "  "
           << to_string(a.bound) << (a.overlapped ? " (overlapped)" : "") << '\n';
    }
    os << "\ncritical path " << s.total_cycles << " cycles, steady " << s.steady_cycles << " cycles, "
       << fmt("%.1f", s.estimated_fps) << " fps\n";
    for (const auto& w : s.warnings) os << "warning: " << w << '\n';
    return os.str();
}

}  // namespace dpu::sched
