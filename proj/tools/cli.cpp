// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "dpu/anchors.hpp"
#include "dpu/cascade.hpp"
#include "dpu/config_io.hpp"
#include "dpu/conv_pe.hpp"
#include "dpu/dse.hpp"
#include "dpu/dwc_pe.hpp"
#include "dpu/emulator.hpp"
#include "dpu/error.hpp"
#include "dpu/scheduler.hpp"
#include "dpu/tensor_io.hpp"
#include "dpu/workload.hpp"

namespace dpu::cli {

namespace {

using nlohmann::json;

// Row-oriented result rendered as aligned text, CSV or a JSON array.
struct Table {
    std::vector<std::string> cols;
    std::vector<std::vector<json>> rows;

    static std::string cell(const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_float()) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.4g", v.get<double>());
            return buf;
        }
        return v.dump();
    }

    std::string text() const {
        std::vector<std::size_t> w(cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) w[c] = cols[c].size();
        for (const auto& r : rows)
            for (std::size_t c = 0; c < r.size(); ++c) w[c] = std::max(w[c], cell(r[c]).size());
        std::ostringstream os;
        auto line = [&](auto get) {
            for (std::size_t c = 0; c < cols.size(); ++c) {
                std::string s = get(c);
                os << s;
                if (c + 1 < cols.size()) os << std::string(w[c] - s.size() + 2, ' ');
            }
            os << '\n';
        };
        line([&](std::size_t c) { return cols[c]; });
        for (const auto& r : rows) line([&](std::size_t c) { return cell(r[c]); });
        return os.str();
    }

    std::string csv() const {
        std::ostringstream os;
        for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
        os << '\n';
        for (const auto& r : rows) {
            for (std::size_t c = 0; c < r.size(); ++c) {
                std::string s = r[c].is_string() ? r[c].get<std::string>() : r[c].dump();
                if (s.find_first_of(",\"") != std::string::npos) {
                    std::string q = "\"";
                    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
                    s = q + "\"";
                }
                os << (c ? "," : "") << s;
            }
            os << '\n';
        }
        return os.str();
    }

    json to_json() const {
        json a = json::array();
        for (const auto& r : rows) {
            json o = json::object();
            for (std::size_t c = 0; c < cols.size(); ++c) o[cols[c]] = r[c];
            a.push_back(std::move(o));
        }
        return a;
    }

    std::string render(const std::string& fmt) const {
        if (fmt == "csv") return csv();
        if (fmt == "json") return to_json().dump(2) + "\n";
        return text();
    }
};

std::string join(const std::vector<std::string>& v, const char* sep = "; ") {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : sep) + x;
    return s;
}

struct Globals {
    std::string config_path;
    std::string format = "text";
    std::uint64_t seed = 1;
    std::string out_path;
};

Configs load_globals(const Globals& g) {
    return g.config_path.empty() ? Configs{} : load_config(g.config_path);
}

// ---------------------------------------------------------------- dse

struct DseArgs {
    std::vector<int> bwf{8, 16, 32, 64};
    std::vector<int> bww{8, 16, 32, 64};
    int budget = dse::kCoreInputBudgetBits;
};

std::string cmd_dse(const DseArgs& a, const Globals& g) {
    Table t{{"bw_f", "bw_w", "fm_reuse", "wt_reuse", "oc_required", "pixels_required", "t_mac", "fm_load",
             "wt_load", "ctc", "warnings"},
            {}};
    for (const auto& s : dse::sweep(dse::grid(a.bwf, a.bww), a.budget))
        t.rows.push_back({s.split.bw_f, s.split.bw_w, s.fm_reuse, s.wt_reuse, s.oc_required, s.pixels_required,
                          s.t_mac, s.fm_load, s.wt_load, s.ctc, join(s.warnings)});
    return t.render(g.format);
}

// ---------------------------------------------------------------- buffers

struct BufferArgs {
    std::vector<int> ih{1, 2, 4, 8};
    std::vector<int> iw{8, 16, 32, 64};
};

std::string cmd_buffers(const BufferArgs& a, const Globals& g) {
    const auto arch = load_globals(g).arch;
    Table t{{"ih", "iw", "psum_stack", "acc_out", "bias", "nl_out", "banks", "total_bytes", "feasible", "notes"},
            {}};
    for (int ih : a.ih)
        for (int iw : a.iw) {
            const auto p = conv::buffer_plan(ih, iw, arch);
            auto notes = p.violations;
            notes.insert(notes.end(), p.warnings.begin(), p.warnings.end());
            t.rows.push_back({p.ih, p.iw, p.psum_stack, p.acc_out, p.bias, p.nl_out, p.total_banks,
                              p.total_bytes, p.feasible, join(notes)});
        }
    return t.render(g.format);
}

// ---------------------------------------------------------------- layer

struct LayerArgs {
    std::string kind = "conv";
    int ih = 56, iw = 56, ic = 64, oc = 64, k = 3, s = 1;
    std::optional<int> pad;
    int bwf = 32, bww = 16;
};

std::string cmd_layer(const LayerArgs& a, const Globals& g) {
    const auto arch = load_globals(g).arch;
    const LayerKind kind = a.kind == "dwc" ? LayerKind::dwc : LayerKind::conv;
    const auto l = make_layer("layer", kind, a.ih, a.iw, a.ic, a.oc, a.k, a.s, a.pad.value_or(a.k / 2));
    if (auto v = check_layer(l); !v.empty()) throw Error("invalid layer: " + join(v));
    const CycleEstimate e = kind == LayerKind::dwc ? dwc::dwc_layer_cycles(l, a.bwf, arch)
                                                   : conv::layer_cycles(l, {}, arch, {a.bwf, a.bww});
    Table t{{"kind", "oh", "ow", "cycles", "compute_cycles", "fm_load_cycles", "wt_load_cycles", "bound",
             "utilization", "useful_macs", "low_channel_candidate"},
            {{a.kind, l.oh, l.ow, e.cycles(), e.compute_cycles, e.fm_load_cycles, e.wt_load_cycles,
              std::string(to_string(e.bound)), e.utilization, e.useful_macs, e.low_channel_candidate}}};
    return t.render(g.format);
}

// ---------------------------------------------------------------- cascade

struct CascadeArgs {
    int len = 4;
    std::int64_t iters = 16;
    int delay = 1;
    int iter_cycles = 16;
    std::vector<std::string> bubbles;
    std::optional<std::int64_t> warmup;
    std::string trace_csv;
    bool trace = false;
};

cascade::Bubble parse_bubble(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--bubble", "expected core:cycle, got " + s);
    try {
        std::size_t used = 0;
        cascade::Bubble b{std::stoi(s.substr(0, colon), &used), 0};
        if (used != colon) throw std::invalid_argument(s);
        const std::string rest = s.substr(colon + 1);
        b.cycle = std::stoll(rest, &used);
        if (used != rest.size()) throw std::invalid_argument(s);
        return b;
    } catch (const std::logic_error&) {
        throw CLI::ValidationError("--bubble", "expected core:cycle, got " + s);
    }
}

std::string cmd_cascade(const CascadeArgs& a, const Globals& g) {
    cascade::ChainConfig c;
    c.chain_len = a.len;
    c.total_iterations = a.iters;
    c.initial_delay = a.delay;
    c.iteration_cycles = a.iter_cycles;
    for (const auto& b : a.bubbles) c.bubbles.push_back(parse_bubble(b));
    const auto trace = cascade::simulate(c);
    const std::int64_t warmup = a.warmup.value_or(cascade::warmup_horizon(c));
    const double util = cascade::utilization(trace, warmup);

    if (!a.trace_csv.empty()) {
        std::ofstream f(a.trace_csv);
        if (!f) throw Error("cannot write " + a.trace_csv);
        f << "cycle";
        for (int k = 0; k < trace.chain_len; ++k) f << ",core" << k;
        f << '\n';
        for (std::int64_t t = 0; t < trace.total_cycles; ++t) {
            f << t;
            for (int k = 0; k < trace.chain_len; ++k)
                f << ',' << to_string(trace.states[static_cast<std::size_t>(k)][static_cast<std::size_t>(t)]);
            f << '\n';
        }
    }

    bool in_order = true;
    for (const auto& r : trace.tail_results) in_order = in_order && r.in_order;
    Table t{{"core", "first_compute", "last_compute", "iterations", "compute", "read_blocked", "write_blocked",
             "stall_injected"},
            {}};
    for (int k = 0; k < trace.chain_len; ++k) {
        const auto i = static_cast<std::size_t>(k);
        t.rows.push_back({k, trace.first_compute[i], trace.last_compute[i], trace.completed_iterations[i],
                          trace.count(k, cascade::CoreState::compute),
                          trace.count(k, cascade::CoreState::read_blocked),
                          trace.count(k, cascade::CoreState::write_blocked),
                          trace.count(k, cascade::CoreState::stall_injected)});
    }
    if (g.format == "json") {
        json j = {{"total_cycles", trace.total_cycles},
                  {"warmup", warmup},
                  {"steady_end", trace.steady_end()},
                  {"utilization", util},
                  {"tail_results", trace.tail_results.size()},
                  {"in_order", in_order},
                  {"cores", t.to_json()}};
        return j.dump(2) + "\n";
    }
    if (g.format == "csv") return t.csv();

    std::ostringstream os;
    if (a.trace || trace.total_cycles <= 120) {
        for (int k = 0; k < trace.chain_len; ++k) {
            os << "core " << k << "  ";
            for (auto st : trace.states[static_cast<std::size_t>(k)]) os << cascade::glyph(st);
            os << '\n';
        }
        os << "(C compute, r read-blocked, w write-blocked, B bubble, . idle)\n\n";
    }
    os << t.text() << '\n';
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "total %lld cycles, steady window [%lld, %lld), utilization %.4f, %zu results %s\n",
                  static_cast<long long>(trace.total_cycles), static_cast<long long>(warmup),
                  static_cast<long long>(trace.steady_end()), util, trace.tail_results.size(),
                  in_order ? "in order" : "OUT OF ORDER");
    os << buf;
    return os.str();
}

// ---------------------------------------------------------------- dwc

std::string cmd_dwc(int bwf, const Globals& g) {
    Table t{{"k", "s", "atomic_cycles", "atomic_ops", "compute_cycles", "fm_load_cycles", "ctc", "bound"}, {}};
    for (int s : {1, 2})
        for (int k : {1, 3, 5, 7}) {
            const auto it = dwc::iteration_ctc(k, s, bwf);
            t.rows.push_back({k, s, dwc::atomic_cycles(k, s), it.atomic_ops, it.compute_cycles,
                              it.fm_load_cycles, it.ctc, std::string(to_string(it.bound))});
        }
    return t.render(g.format);
}

// ---------------------------------------------------------------- emulate

struct EmulateArgs {
    std::string kind = "conv";
    std::string input, weights, bias, out_tensor;
    bool random = false;
    int ih = 8, iw = 8, ic = 16, oc = 16, k = 3, s = 1;
    std::optional<int> pad;
    std::string act = "relu";
    int shift = 8;
    int alpha_shift = 3;
    bool dwc_path = false;
};

std::string cmd_emulate(const EmulateArgs& a, const Globals& g, bool& mismatch) {
    const bool is_dwc = a.kind == "dwc";
    QTensor in, wt;
    std::vector<std::int32_t> bias;
    if (a.random) {
        std::mt19937_64 rng(g.seed);
        std::uniform_int_distribution<int> q(-128, 127);
        std::uniform_int_distribution<int> b(-2048, 2048);
        const int c_in = a.ic;
        const int c_out = is_dwc ? a.ic : a.oc;
        std::vector<std::int8_t> d(static_cast<std::size_t>(a.ih) * a.iw * c_in);
        for (auto& x : d) x = static_cast<std::int8_t>(q(rng));
        in = QTensor({1, a.ih, a.iw, c_in}, std::move(d), -7);
        const TensorDims wd = is_dwc ? TensorDims{1, a.k, a.k, c_in} : TensorDims{c_out, a.k, a.k, c_in};
        std::vector<std::int8_t> w(wd.count());
        for (auto& x : w) x = static_cast<std::int8_t>(q(rng));
        wt = QTensor(wd, std::move(w), -7);
        bias.resize(static_cast<std::size_t>(c_out));
        for (auto& x : bias) x = b(rng);
    } else {
        if (a.input.empty() || a.weights.empty())
            throw CLI::ValidationError("emulate", "--input and --weights are required without --random");
        in = read_tensor(a.input);
        wt = read_tensor(a.weights);
        const int c_out = is_dwc ? wt.dims().c : wt.dims().n;
        if (a.bias.empty())
            bias.assign(static_cast<std::size_t>(c_out), 0);
        else
            bias = read_int32_list(a.bias);
    }
    const auto& id = in.dims();
    const int oc = is_dwc ? id.c : wt.dims().n;
    const auto layer = make_layer("emulate", is_dwc ? LayerKind::dwc : LayerKind::conv, id.h, id.w, id.c, oc,
                                  wt.dims().h, a.s, a.pad.value_or(wt.dims().h / 2));
    emu::NlSpec nl;
    nl.kind = a.act == "identity" ? emu::Activation::identity
              : a.act == "leaky"  ? emu::Activation::leaky_relu
                                  : emu::Activation::relu;
    nl.requant_shift = a.shift;
    nl.alpha_shift = a.alpha_shift;

    emu::EmuStats stats;
    QTensor got;
    if (is_dwc)
        got = emu::dwc_forward(in, wt, bias, layer, nl, &stats);
    else if (a.dwc_path)
        got = emu::conv_forward_dwc_path(in, wt, bias, layer, nl, &stats);
    else
        got = emu::conv_forward(in, wt, bias, layer, nl, &stats);
    const QTensor ref = emu::reference_conv(in, wt, bias, layer, nl);
    const auto d = emu::diff(got, ref);
    mismatch = !d.equal();

    if (!a.out_tensor.empty())
        write_tensor(a.out_tensor, got, a.out_tensor.ends_with(".txt") ? TensorFormat::text : TensorFormat::binary);

    const auto& od = got.dims();
    Table t{{"kind", "out_dims", "scale_exp", "elements", "mismatches", "max_abs_diff", "mac_ops",
             "cascade_chains", "atomic_ops", "dwc_cycles"},
            {{a.kind + (a.dwc_path && !is_dwc ? "(dwc-path)" : ""),
              std::to_string(od.n) + "x" + std::to_string(od.h) + "x" + std::to_string(od.w) + "x" +
                  std::to_string(od.c),
              got.scale_exp(), d.elements, d.mismatches, d.max_abs_diff, stats.mac_ops, stats.cascade_chains,
              stats.atomic_ops, stats.dwc_cycles}}};
    return t.render(g.format);
}

// ---------------------------------------------------------------- schedule / report

struct ScheduleArgs {
    std::string workload;
    std::string builtin;
    std::optional<int> pe;
    std::optional<int> dwc;
    bool low_channel = false;
    int batch = 1;
    std::optional<double> freq;
    std::int64_t fm_buffer = 0;
    bool force_dwc = false;
};

sched::Schedule build_schedule(const ScheduleArgs& a, const Globals& g) {
    if (a.workload.empty() == a.builtin.empty())
        throw CLI::ValidationError("workload", "give exactly one of a workload file or --builtin");
    const auto layers = a.builtin.empty() ? ingest(a.workload) : builtin_workload(a.builtin);
    Configs cfg = load_globals(g);
    if (a.pe || a.dwc) {
        const int n = a.pe.value_or(cfg.dpu.n_pe);
        const int n_dwc = a.dwc.value_or(0);
        if (n_dwc < 0 || n_dwc > n) throw Error("--dwc must be between 0 and the PE count");
        auto lc = cfg.dpu.low_channel;
        cfg.dpu = DpuConfig::uniform(n, PeKind::conv);
        cfg.dpu.low_channel = lc;
        for (int i = 0; i < n_dwc; ++i) cfg.dpu.pe_kinds[static_cast<std::size_t>(n - 1 - i)] = PeKind::dwc;
    }
    if (a.low_channel) cfg.dpu.low_channel.enabled = true;
    if (a.freq) cfg.arch.aie_freq = *a.freq;
    sched::ScheduleOptions o;
    o.batch = a.batch;
    o.fm_buffer_bytes = a.fm_buffer;
    o.force_dwc_on_conv = a.force_dwc;
    return sched::assign(layers, cfg.dpu, cfg.arch, o);
}

std::string cmd_schedule(const ScheduleArgs& a, const Globals& g) {
    const auto s = build_schedule(a, g);
    if (g.format == "text") return sched::schedule_text(s);
    Table t{{"layer", "engine", "pes", "rounds", "cycles", "bound", "overlapped"}, {}};
    for (std::size_t i = 0; i < s.layers.size(); ++i) {
        const auto& x = s.assignments[i];
        std::string pes;
        for (int p : x.pe_indices) pes += (pes.empty() ? "" : " ") + std::to_string(p);
        t.rows.push_back({s.layers[i].name, std::string(sched::to_string(x.engine)), pes, x.rounds, x.cycles,
                          std::string(to_string(x.bound)), x.overlapped});
    }
    if (g.format == "csv") return t.csv();
    json j = {{"total_cycles", s.total_cycles},
              {"steady_cycles", s.steady_cycles},
              {"fps", s.estimated_fps},
              {"layers", t.to_json()},
              {"warnings", s.warnings}};
    return j.dump(2) + "\n";
}

std::string cmd_report(const ScheduleArgs& a, const Globals& g) {
    const auto r = sched::report(build_schedule(a, g));
    if (g.format == "csv") return sched::to_csv(r);
    if (g.format == "json") return sched::to_json(r).dump(2) + "\n";
    return sched::to_text(r);
}

// ---------------------------------------------------------------- misc

std::string cmd_paper_check(const Globals& g, bool& all_pass) {
    Table t{{"module", "check", "expected", "actual", "result"}, {}};
    all_pass = true;
    for (const auto& r : run_anchor_checks()) {
        all_pass = all_pass && r.pass;
        t.rows.push_back({r.module, r.name, r.expected, r.actual, r.pass ? "PASS" : "FAIL"});
    }
    std::string s = t.render(g.format);
    if (g.format == "text") s += all_pass ? "all checks passed\n" : "some checks FAILED\n";
    return s;
}

std::string cmd_config(const Globals& g, bool& ok) {
    const Configs c = load_globals(g);
    const auto v = validate(c.dpu, c.arch);
    ok = v.ok();
    if (g.format == "json") {
        json j = to_json(c);
        j["violations"] = v.violations;
        j["notes"] = v.notes;
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    os << to_json(c).dump(2) << '\n';
    for (const auto& x : v.violations) os << "violation: " << x << '\n';
    for (const auto& x : v.notes) os << "note: " << x << '\n';
    os << (ok ? "valid\n" : "invalid\n");
    return os.str();
}

void emit(const std::string& text, const Globals& g, std::ostream& out) {
    if (g.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(g.out_path, std::ios::binary);
    if (!f) throw Error("cannot write " + g.out_path);
    f << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Performance model and functional emulator for an AIE-based CNN accelerator", "dpuv4e"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config_path, "Architecture/DPU config (JSON or key = value)")
        ;
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
    app.add_option("--seed", g.seed, "Seed for randomized inputs");
    app.add_option("--out", g.out_path, "Write output to this file instead of stdout");

    DseArgs dse_a;
    auto* dse = app.add_subcommand("dse", "Reuse factors per bandwidth split");
    dse->add_option("--bwf", dse_a.bwf, "FM bandwidths in bits/cycle")->check(CLI::PositiveNumber);
    dse->add_option("--bww", dse_a.bww, "Weight bandwidths in bits/cycle")->check(CLI::PositiveNumber);
    dse->add_option("--budget", dse_a.budget, "Input bits/cycle per core")->check(CLI::PositiveNumber);

    BufferArgs buf_a;
    auto* buffers = app.add_subcommand("buffers", "ACC/NL buffer plans over an (ih, iw) grid");
    buffers->add_option("--ih", buf_a.ih)->check(CLI::PositiveNumber);
    buffers->add_option("--iw", buf_a.iw)->check(CLI::PositiveNumber);

    LayerArgs lay_a;
    auto* layer = app.add_subcommand("layer", "Cycle estimate of one layer on one PE");
    layer->add_option("--kind", lay_a.kind, "Layer kind")->check(CLI::IsMember({"conv", "dwc"}));
    layer->add_option("--ih", lay_a.ih)->check(CLI::PositiveNumber);
    layer->add_option("--iw", lay_a.iw)->check(CLI::PositiveNumber);
    layer->add_option("--ic", lay_a.ic)->check(CLI::PositiveNumber);
    layer->add_option("--oc", lay_a.oc)->check(CLI::PositiveNumber);
    layer->add_option("--k", lay_a.k)->check(CLI::PositiveNumber);
    layer->add_option("--s", lay_a.s)->check(CLI::PositiveNumber);
    layer->add_option("--pad", lay_a.pad, "Default k/2")->check(CLI::NonNegativeNumber);
    layer->add_option("--bwf", lay_a.bwf)->check(CLI::PositiveNumber);
    layer->add_option("--bww", lay_a.bww)->check(CLI::PositiveNumber);

    CascadeArgs cas_a;
    auto* cas = app.add_subcommand("cascade", "Beat-level cascade chain simulation");
    cas->add_option("--len", cas_a.len, "Chain length")->check(CLI::PositiveNumber);
    cas->add_option("--iters", cas_a.iters, "Iterations")->check(CLI::PositiveNumber);
    cas->add_option("--delay", cas_a.delay, "Start offset between cores")->check(CLI::NonNegativeNumber);
    cas->add_option("--iter-cycles", cas_a.iter_cycles, "Beats per iteration")->check(CLI::PositiveNumber);
    cas->add_option("--bubble", cas_a.bubbles, "Stall core:cycle (repeatable)");
    cas->add_option("--warmup", cas_a.warmup, "Start of the measured window")->check(CLI::NonNegativeNumber);
    cas->add_option("--trace-csv", cas_a.trace_csv, "Write the per-cycle trace as CSV");
    cas->add_flag("--trace", cas_a.trace, "Print the per-cycle trace");

    int dwc_bwf = dwc::kDefaultBwF;
    auto* dwcc = app.add_subcommand("dwc", "DWC PE load/compute table");
    dwcc->add_option("--bwf", dwc_bwf)->check(CLI::PositiveNumber);

    EmulateArgs emu_a;
    auto* emu = app.add_subcommand("emulate", "Run the tiled dataflow and diff against the naive oracle");
    emu->add_option("--kind", emu_a.kind, "Layer kind")->check(CLI::IsMember({"conv", "dwc"}));
    emu->add_option("--input", emu_a.input, "Input tensor (NHWC, n = 1)");
    emu->add_option("--weights", emu_a.weights, "Weights: OCxKxKxIC for conv, 1xKxKxC for dwc");
    emu->add_option("--bias", emu_a.bias, "int32 bias list, zeros if omitted");
    emu->add_option("--out-tensor", emu_a.out_tensor, "Write the output (.txt for text, else binary)");
    emu->add_flag("--random", emu_a.random, "Generate inputs from --seed");
    emu->add_option("--ih", emu_a.ih)->check(CLI::PositiveNumber);
    emu->add_option("--iw", emu_a.iw)->check(CLI::PositiveNumber);
    emu->add_option("--ic", emu_a.ic)->check(CLI::PositiveNumber);
    emu->add_option("--oc", emu_a.oc)->check(CLI::PositiveNumber);
    emu->add_option("--k", emu_a.k, "Kernel size (--random only)")->check(CLI::PositiveNumber);
    emu->add_option("--s", emu_a.s, "Stride")->check(CLI::PositiveNumber);
    emu->add_option("--pad", emu_a.pad, "Padding, default k/2")->check(CLI::NonNegativeNumber);
    emu->add_option("--act", emu_a.act, "Activation")->check(CLI::IsMember({"identity", "relu", "leaky"}));
    emu->add_option("--shift", emu_a.shift, "Requantization right shift");
    emu->add_option("--alpha-shift", emu_a.alpha_shift, "Leaky slope 2^-n")->check(CLI::NonNegativeNumber);
    emu->add_flag("--dwc-path", emu_a.dwc_path, "Run conv through the DWC PE atomic path");

    ScheduleArgs sch_a;
    auto add_sched = [&](CLI::App* c) {
        c->add_option("workload", sch_a.workload, "Workload file");
        c->add_option("--builtin", sch_a.builtin, "Bundled workload")
            ->check(CLI::IsMember(builtin_workload_names()));
        c->add_option("--pe", sch_a.pe, "PE count")->check(CLI::PositiveNumber);
        c->add_option("--dwc", sch_a.dwc, "How many of the PEs are DWC PEs")->check(CLI::NonNegativeNumber);
        c->add_flag("--low-channel", sch_a.low_channel, "Enable the low-channel unit");
        c->add_option("--batch", sch_a.batch, "Images per batch")->check(CLI::PositiveNumber);
        c->add_option("--freq", sch_a.freq, "AIE clock in Hz")->check(CLI::PositiveNumber);
        c->add_option("--fm-buffer", sch_a.fm_buffer, "On-chip FM buffer bytes per engine")
            ->check(CLI::NonNegativeNumber);
        c->add_flag("--force-dwc-on-conv", sch_a.force_dwc, "Run dwc layers as dense conv without DWC PEs");
    };
    auto* schedule = app.add_subcommand("schedule", "Map a workload onto the PEs");
    add_sched(schedule);
    auto* rep = app.add_subcommand("report", "Per-layer cycles, utilization and totals");
    add_sched(rep);

    auto* check = app.add_subcommand("paper-check", "Run every reference-value check");
    auto* config = app.add_subcommand("config", "Print and validate the effective configuration");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        int rc = 0;
        std::string text;
        if (*dse) {
            text = cmd_dse(dse_a, g);
        } else if (*buffers) {
            text = cmd_buffers(buf_a, g);
        } else if (*layer) {
            text = cmd_layer(lay_a, g);
        } else if (*cas) {
            text = cmd_cascade(cas_a, g);
        } else if (*dwcc) {
            text = cmd_dwc(dwc_bwf, g);
        } else if (*emu) {
            bool mismatch = false;
            text = cmd_emulate(emu_a, g, mismatch);
            if (mismatch) {
                err << "error: emulator output differs from the reference\n";
                rc = 1;
            }
        } else if (*schedule) {
            text = cmd_schedule(sch_a, g);
        } else if (*rep) {
            text = cmd_report(sch_a, g);
        } else if (*check) {
            bool pass = false;
            text = cmd_paper_check(g, pass);
            rc = pass ? 0 : 1;
        } else if (*config) {
            bool ok = false;
            text = cmd_config(g, ok);
            rc = ok ? 0 : 1;
        }
        emit(text, g, out);
        return rc;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace dpu::cli
