// Copyright 2026 The qcoop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QCOOP_HARNESS_HPP_
#define QCOOP_HARNESS_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qcoop/ants.hpp"
#include "qcoop/butterflies.hpp"
#include "qcoop/config.hpp"
#include "qcoop/correlation.hpp"
#include "qcoop/rng.hpp"
#include "qcoop/stats.hpp"
#include "qcoop/table.hpp"
#include "qcoop/theory.hpp"

namespace qcoop {

/// Outcome of one simulation run.
struct RunSummary {
    std::string scenario;
    EntanglementMode mode = EntanglementMode::Independent;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, Cell>> parameters;
    /// Goal-axis displacement (ants) or total short flights (butterflies).
    double metric = 0.0;
    bool converged = true;
    /// Scenario-specific tallies.
    std::vector<std::pair<std::string, Cell>> details;
};

/// Evaluates fn(0..n-1) on a pool of worker threads. Result i always lands
/// in slot i, so the output does not depend on scheduling.
template <typename Fn>
auto parallel_map(std::size_t n, unsigned threads, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
    using T = decltype(fn(std::size_t{}));
    std::vector<T> out(n);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    out[i] = fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
    return out;
}

inline std::vector<std::pair<std::string, Cell>> flatten(const ants::AntScenarioConfig& c) {
    return {{"strength_1", c.strength_1}, {"strength_2", c.strength_2}, {"f_min", c.f_min},
            {"z", c.z}, {"g", c.g}, {"n_attempts", c.n_attempts}};
}

inline std::vector<std::pair<std::string, Cell>> flatten(const butterflies::ButterflyScenarioConfig& c) {
    return {{"initial_distance", c.initial_distance},
            {"step_length", c.step_length},
            {"lambda", c.lambda},
            {"threshold_fraction", c.threshold_fraction},
            {"n_directions", std::int64_t{c.n_directions}},
            {"max_rounds", c.max_rounds},
            {"meet_distance", c.effective_meet_distance()},
            {"back_flight", std::string(to_string(c.back_flight))}};
}

inline RunSummary summarize_run(const ants::AntScenarioConfig& c, const ants::AntRunSummary& s) {
    RunSummary r{"ants", c.mode, c.seed, flatten(c), s.goal_distance, true, {}};
    r.details = {{"final_x", s.final.x},
                 {"final_y", s.final.y},
                 {"solo_pushes", s.solo_pushes},
                 {"joint_pushes", s.joint_pushes},
                 {"futile_pushes", s.futile_pushes},
                 {"rests", s.rests}};
    return r;
}

inline RunSummary summarize_run(const butterflies::ButterflyScenarioConfig& c,
                                const butterflies::ButterflyRunSummary& s) {
    RunSummary r{"butterflies", c.mode, c.seed, flatten(c), double(s.total_flights), s.converged, {}};
    r.details = {{"accepted_flights", s.accepted_flights},
                 {"rejected_flights", s.rejected_flights},
                 {"back_flights", s.back_flights},
                 {"rounds", s.rounds},
                 {"final_distance", s.final_distance}};
    return r;
}

struct BatchResult {
    BatchStatistics stats;
    std::vector<RunSummary> runs;
    std::size_t non_converged = 0;
};

inline BatchResult aggregate(std::vector<RunSummary> runs) {
    BatchResult out;
    std::vector<double> metrics;
    metrics.reserve(runs.size());
    for (const auto& r : runs) {
        metrics.push_back(r.metric);
        out.non_converged += r.converged ? 0 : 1;
    }
    out.stats = summarize(metrics);
    out.runs = std::move(runs);
    return out;
}

/// Runs `n_runs` simulations of `config.scenario` in `mode`; run i uses
/// derive_seed(base_seed, i).
inline BatchResult run_batch(const ExperimentConfig& config, EntanglementMode mode, std::int64_t n_runs,
                             std::uint64_t base_seed) {
    if (n_runs < 1) throw std::invalid_argument("run_batch needs at least one run");
    const auto n = static_cast<std::size_t>(n_runs);
    if (config.scenario == "ants") {
        return aggregate(parallel_map(n, config.threads, [&](std::size_t i) {
            auto c = config.ants;
            c.mode = mode;
            c.seed = derive_seed(base_seed, i);
            return summarize_run(c, ants::run_ants(c).summary);
        }));
    }
    if (config.scenario == "butterflies") {
        return aggregate(parallel_map(n, config.threads, [&](std::size_t i) {
            auto c = config.butterflies;
            c.mode = mode;
            c.seed = derive_seed(base_seed, i);
            return summarize_run(c, butterflies::run_butterflies(c).summary);
        }));
    }
    throw std::invalid_argument("unknown scenario '" + config.scenario + "'");
}

struct LambdaRow {
    double lambda = 0.0;
    EntanglementMode mode = EntanglementMode::Singlet;
    BatchStatistics stats;
    std::size_t non_converged = 0;
};

/// Butterfly batches per learning factor and mode. Every (lambda, mode)
/// cell uses the same base seed.
inline std::vector<LambdaRow> lambda_sweep(const ExperimentConfig& config, const std::vector<double>& lambdas,
                                           std::int64_t n_runs, std::uint64_t base_seed) {
    std::vector<LambdaRow> rows;
    for (double lambda : lambdas) {
        ExperimentConfig c = config;
        c.scenario = "butterflies";
        c.butterflies.lambda = lambda;
        butterflies::validate(c.butterflies);
        for (EntanglementMode mode : config.butterfly_modes) {
            const BatchResult b = run_batch(c, mode, n_runs, base_seed);
            rows.push_back({lambda, mode, b.stats, b.non_converged});
        }
    }
    return rows;
}

// Table builders for emission.

inline Table summaries_table(const std::vector<RunSummary>& runs) {
    Table t;
    if (runs.empty()) {
        t.columns = {"scenario", "mode", "seed", "metric", "converged"};
        return t;
    }
    t.columns = {"scenario", "mode", "seed"};
    for (const auto& [k, v] : runs.front().parameters) t.columns.push_back(k);
    t.columns.push_back("metric");
    t.columns.push_back("converged");
    for (const auto& [k, v] : runs.front().details) t.columns.push_back(k);
    for (const auto& r : runs) {
        // Seeds are written as text: JSON readers commonly lose 64-bit integers.
        std::vector<Cell> row{r.scenario, std::string(to_string(r.mode)), std::to_string(r.seed)};
        for (const auto& [k, v] : r.parameters) row.push_back(v);
        row.push_back(r.metric);
        row.push_back(r.converged);
        for (const auto& [k, v] : r.details) row.push_back(v);
        t.add_row(std::move(row));
    }
    return t;
}

inline Table statistics_table(const std::vector<std::pair<EntanglementMode, BatchResult>>& batches) {
    Table t;
    t.columns = {"mode", "n_runs", "mean", "std_dev", "min", "max", "non_converged"};
    for (const auto& [mode, b] : batches)
        t.add_row({std::string(to_string(mode)), std::int64_t(b.stats.n_runs), b.stats.mean, b.stats.std_dev,
                   b.stats.min, b.stats.max, std::int64_t(b.non_converged)});
    return t;
}

inline Table lambda_table(const std::vector<LambdaRow>& rows) {
    Table t;
    t.columns = {"lambda", "mode", "mean", "std_dev", "n_runs", "min", "max", "non_converged"};
    for (const auto& r : rows)
        t.add_row({r.lambda, std::string(to_string(r.mode)), r.stats.mean, r.stats.std_dev,
                   std::int64_t(r.stats.n_runs), r.stats.min, r.stats.max, std::int64_t(r.non_converged)});
    return t;
}

inline Table gain_table(const std::vector<theory::GainPoint>& points) {
    Table t;
    t.columns = {"f_min", "ratio", "ratio_error_estimate", "degenerate_flag"};
    for (const auto& p : points) t.add_row({p.f_min, p.gain.ratio, p.gain.error_estimate, p.gain.degenerate});
    return t;
}

inline Table ant_trace_table(const std::vector<ants::PushRecord>& records) {
    Table t;
    t.columns = {"attempt", "beta1", "beta2", "pushed1", "pushed2", "dx", "dy"};
    for (const auto& r : records)
        t.add_row({r.attempt_index, r.beta_1, r.beta_2, r.pushed_1, r.pushed_2, r.displacement.x,
                   r.displacement.y});
    return t;
}

inline Table butterfly_trace_table(const std::vector<butterflies::FlightRecord>& records) {
    Table t;
    t.columns = {"round", "dir1", "dir2", "flew1", "flew2", "acc1", "acc2", "distance"};
    for (const auto& r : records)
        t.add_row({r.round, std::int64_t{r.side[0].direction_index}, std::int64_t{r.side[1].direction_index},
                   r.side[0].flew, r.side[1].flew, r.side[0].accepted, r.side[1].accepted, r.distance});
    return t;
}

}  // namespace qcoop

#endif  // QCOOP_HARNESS_HPP_
