// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#include "dpu/cascade.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "dpu/error.hpp"

namespace dpu::cascade {

std::string_view to_string(CoreState s) {
    switch (s) {
        case CoreState::idle: return "idle";
        case CoreState::compute: return "compute";
        case CoreState::read_blocked: return "read_blocked";
        case CoreState::write_blocked: return "write_blocked";
        case CoreState::stall_injected: return "stall_injected";
    }
    return "?";
}

char glyph(CoreState s) {
    switch (s) {
        case CoreState::idle: return '.';
        case CoreState::compute: return 'C';
        case CoreState::read_blocked: return 'r';
        case CoreState::write_blocked: return 'w';
        case CoreState::stall_injected: return 'B';
    }
    return '?';
}

std::int64_t PipelineTrace::steady_end() const {
    std::int64_t end = total_cycles;
    for (auto last : last_compute) end = std::min(end, last + 1);
    return end;
}

std::int64_t PipelineTrace::count(int core, CoreState s) const {
    const auto& row = states.at(static_cast<std::size_t>(core));
    return std::count(row.begin(), row.end(), s);
}

namespace {

struct Token {
    std::int64_t beat = 0;
    std::uint64_t contributors = 0;
    std::int64_t written_at = 0;
};

}  // namespace

PipelineTrace simulate(const ChainConfig& cfg) {
    if (cfg.chain_len < 2 || cfg.chain_len > 64) throw Error("chain_len must be in [2, 64]");
    if (cfg.initial_delay < 1) throw Error("initial_delay must be >= 1");
    if (cfg.iteration_cycles < 1) throw Error("iteration_cycles must be >= 1");
    if (cfg.total_iterations < 1) throw Error("total_iterations must be >= 1");
    for (const auto& b : cfg.bubbles)
        if (b.core < 0 || b.core >= cfg.chain_len || b.cycle < 0)
            throw Error("bubble (" + std::to_string(b.core) + ", " + std::to_string(b.cycle) +
                        ") outside the chain");

    const int L = cfg.chain_len;
    const std::int64_t total_beats = cfg.total_iterations * cfg.iteration_cycles;

    std::map<std::pair<int, std::int64_t>, int> bubbles;
    std::int64_t last_bubble = 0;
    for (const auto& b : cfg.bubbles) {
        ++bubbles[{b.core, b.cycle}];
        last_bubble = std::max(last_bubble, b.cycle);
    }
    // Every cycle at least one core makes progress unless it is stalled or
    // waiting on its start, so this bounds any correct run.
    const std::int64_t cycle_cap = total_beats + std::int64_t{L} * cfg.initial_delay +
                                   static_cast<std::int64_t>(cfg.bubbles.size()) + last_bubble +
                                   std::int64_t{L} * 4 + 16;

    PipelineTrace tr;
    tr.chain_len = L;
    tr.initial_delay = cfg.initial_delay;
    tr.iteration_cycles = cfg.iteration_cycles;
    tr.states.assign(static_cast<std::size_t>(L), {});
    tr.completed_iterations.assign(static_cast<std::size_t>(L), 0);
    tr.first_compute.assign(static_cast<std::size_t>(L), -1);
    tr.last_compute.assign(static_cast<std::size_t>(L), -1);

    std::vector<std::optional<Token>> slot(static_cast<std::size_t>(L - 1));
    std::vector<std::int64_t> next_beat(static_cast<std::size_t>(L), 0);
    std::vector<int> pending_stall(static_cast<std::size_t>(L), 0);
    std::uint64_t iter_mask = ~std::uint64_t{0};
    bool iter_in_order = true;
    const std::uint64_t full_mask = L == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << L) - 1;

    std::int64_t t = 0;
    for (;; ++t) {
        if (t > cycle_cap) throw Error("cascade simulation failed to drain");
        bool all_done = true;
        for (int c = 0; c < L; ++c) all_done = all_done && next_beat[c] == total_beats;
        if (all_done) break;

        // Tail first, so a slot drained this cycle can be refilled by its producer.
        for (int c = L - 1; c >= 0; --c) {
            auto& row = tr.states[static_cast<std::size_t>(c)];
            if (auto it = bubbles.find({c, t}); it != bubbles.end()) pending_stall[c] += it->second;

            if (next_beat[c] == total_beats) {
                row.push_back(CoreState::idle);
                continue;
            }
            if (pending_stall[c] > 0) {
                --pending_stall[c];
                row.push_back(CoreState::stall_injected);
                continue;
            }
            if (t < std::int64_t{c} * cfg.initial_delay) {
                row.push_back(CoreState::idle);
                continue;
            }
            const bool has_input =
                c == 0 || (slot[c - 1].has_value() && slot[c - 1]->written_at < t);
            if (!has_input) {
                row.push_back(CoreState::read_blocked);
                continue;
            }
            if (c < L - 1 && slot[c].has_value()) {
                row.push_back(CoreState::write_blocked);
                continue;
            }

            Token tok;
            if (c == 0) {
                tok.beat = next_beat[0];
            } else {
                tok = *slot[c - 1];
                slot[c - 1].reset();
            }
            const bool in_order = tok.beat == next_beat[c];
            tok.contributors |= std::uint64_t{1} << c;
            tok.written_at = t;
            row.push_back(CoreState::compute);
            if (tr.first_compute[c] < 0) tr.first_compute[c] = t;
            tr.last_compute[c] = t;
            ++next_beat[c];
            const bool iteration_end = next_beat[c] % cfg.iteration_cycles == 0;
            if (iteration_end) ++tr.completed_iterations[c];

            if (c < L - 1) {
                slot[c] = tok;
            } else {
                iter_mask &= tok.contributors;
                iter_in_order = iter_in_order && in_order;
                if (iteration_end) {
                    tr.tail_results.push_back({next_beat[c] / cfg.iteration_cycles - 1,
                                               iter_mask & full_mask, iter_in_order});
                    iter_mask = ~std::uint64_t{0};
                    iter_in_order = true;
                }
            }
        }
    }
    tr.total_cycles = t;
    for (auto& row : tr.states) row.resize(static_cast<std::size_t>(t), CoreState::idle);
    return tr;
}

double utilization(const PipelineTrace& trace, std::int64_t warmup) {
    const std::int64_t end = trace.steady_end();
    if (warmup < 0 || warmup >= end)
        throw Error("warmup " + std::to_string(warmup) + " leaves no steady-state window (ends at " +
                    std::to_string(end) + ")");
    std::int64_t busy = 0;
    for (const auto& row : trace.states)
        for (std::int64_t t = warmup; t < end; ++t)
            busy += row[static_cast<std::size_t>(t)] == CoreState::compute;
    return static_cast<double>(busy) / static_cast<double>(trace.chain_len * (end - warmup));
}

std::int64_t warmup_horizon(const ChainConfig& cfg) {
    std::int64_t last_bubble = 0;
    for (const auto& b : cfg.bubbles) last_bubble = std::max(last_bubble, b.cycle);
    return std::int64_t{cfg.initial_delay} * cfg.chain_len + last_bubble + cfg.iteration_cycles;
}

}  // namespace dpu::cascade
