// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#pragma once

// Cycle simulator of a MAC cascade chain.
//
// Every compute cycle a core handles one beat: it takes the partial sum for
// that beat from its upstream channel (the head reads PL input instead),
// accumulates, and pushes the result downstream (the tail hands it to the
// ACC core). Channels hold one beat. A beat written in cycle t is visible
// downstream from cycle t+1; a slot drained in cycle t may be refilled in the
// same cycle. Core c is held off the channel until cycle c * initial_delay.

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace dpu::cascade {

enum class CoreState : std::uint8_t { idle, compute, read_blocked, write_blocked, stall_injected };

std::string_view to_string(CoreState s);
char glyph(CoreState s);

struct Bubble {
    int core = 0;
    std::int64_t cycle = 0;
};

struct ChainConfig {
    int chain_len = 4;
    int initial_delay = 1;
    int iteration_cycles = 16;
    std::int64_t total_iterations = 1;
    std::vector<Bubble> bubbles;
};

/// One result leaving the tail core.
struct TailResult {
    std::int64_t iteration = 0;
    std::uint64_t contributors = 0;  ///< bit c set when core c accumulated every beat
    bool in_order = true;
};

struct PipelineTrace {
    int chain_len = 0;
    int initial_delay = 0;
    int iteration_cycles = 0;
    std::int64_t total_cycles = 0;
    std::vector<std::vector<CoreState>> states;  ///< [core][cycle]
    std::vector<std::int64_t> completed_iterations;
    std::vector<std::int64_t> first_compute;  ///< per core, -1 if never
    std::vector<std::int64_t> last_compute;   ///< per core, -1 if never
    std::vector<TailResult> tail_results;

    /// First cycle at which some core has no work left (end of steady state).
    std::int64_t steady_end() const;
    std::int64_t count(int core, CoreState s) const;
};

/// Throws Error on an invalid config.
PipelineTrace simulate(const ChainConfig& cfg);

/// Fraction of compute slots over [warmup, steady_end()). Throws Error when
/// the window is empty.
double utilization(const PipelineTrace& trace, std::int64_t warmup);

/// initial_delay * chain_len + latest bubble cycle + iteration_cycles.
std::int64_t warmup_horizon(const ChainConfig& cfg);

}  // namespace dpu::cascade
