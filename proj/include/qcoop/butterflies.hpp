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

#ifndef QCOOP_BUTTERFLIES_HPP_
#define QCOOP_BUTTERFLIES_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qcoop/correlation.hpp"
#include "qcoop/rng.hpp"
#include "qcoop/vec2.hpp"

namespace qcoop::butterflies {

/// When a rejected flight is undone.
enum class BackFlight {
    /// Within the same round, after both flyers have evaluated.
    SameRound,
    /// In the butterfly's next round, which it spends flying back instead of
    /// choosing a new flight. The partner's evaluation in that round sees
    /// the return movement.
    NextRound,
};

inline std::string_view to_string(BackFlight b) {
    return b == BackFlight::SameRound ? "same_round" : "next_round";
}

inline BackFlight parse_back_flight(std::string_view text) {
    if (text == "same_round") return BackFlight::SameRound;
    if (text == "next_round") return BackFlight::NextRound;
    throw std::invalid_argument("unknown back_flight timing '" + std::string(text) + "'");
}

struct ButterflyScenarioConfig {
    double initial_distance = 1600.0;
    double step_length = 5.0;
    double lambda = 0.5;
    double threshold_fraction = 0.6;
    int n_directions = 16;
    EntanglementMode mode = EntanglementMode::Singlet;
    std::uint64_t seed = 1;
    std::int64_t max_rounds = 1'000'000;
    /// Unset means step_length.
    std::optional<double> meet_distance;
    BackFlight back_flight = BackFlight::NextRound;

    double effective_meet_distance() const { return meet_distance.value_or(step_length); }

    friend bool operator==(const ButterflyScenarioConfig&, const ButterflyScenarioConfig&) = default;
};

inline void validate(const ButterflyScenarioConfig& c) {
    if (!(c.initial_distance > 0.0)) throw std::invalid_argument("initial_distance must be positive");
    if (!(c.step_length > 0.0)) throw std::invalid_argument("step_length must be positive");
    if (!(c.lambda >= 0.0 && c.lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
    if (!(c.threshold_fraction > 0.0 && c.threshold_fraction <= 1.0))
        throw std::invalid_argument("threshold_fraction must lie in (0, 1]");
    if (c.n_directions < 2 || c.n_directions % 2 != 0)
        throw std::invalid_argument("n_directions must be even and at least 2");
    if (!(c.effective_meet_distance() > 0.0)) throw std::invalid_argument("meet_distance must be positive");
    if (c.max_rounds < 0) throw std::invalid_argument("max_rounds must be non-negative");
}

/// Scent of the partner at distance r, clamped below at r = epsilon.
inline double scent_intensity(double r, double epsilon) {
    const double d = std::max(r, epsilon);
    return 1.0 / (d * d);
}

/// Compass angle of direction `index` out of `n` evenly spaced ones.
inline double direction_angle(int index, int n) {
    return 2.0 * std::numbers::pi * double(index) / double(n);
}

struct ButterflyState {
    Vec2 position;
    /// Net accepted-minus-rejected flights per direction.
    std::vector<int> exponents;
    /// weights[i] == pow(1 + lambda, exponents[i]); unnormalized.
    std::vector<double> weights;
    /// Largest intensity increase among accepted flights so far.
    double max_increase = 0.0;

    ButterflyState() = default;
    ButterflyState(Vec2 start, int n_directions)
        : position(start),
          exponents(static_cast<std::size_t>(n_directions), 0),
          weights(static_cast<std::size_t>(n_directions), 1.0) {}
};

/// Index drawn with probability weight_i / sum(weights). One uniform draw.
inline int choose_direction(const ButterflyState& state, Rng& rng) {
    double total = 0.0;
    for (double w : state.weights) total += w;
    const double target = rng.uniform() * total;
    double edge = 0.0;
    const int n = static_cast<int>(state.weights.size());
    for (int i = 0; i < n; ++i) {
        edge += state.weights[static_cast<std::size_t>(i)];
        if (target < edge) return i;
    }
    return n - 1;
}

struct FlyDecisions {
    bool fly_1 = false;
    bool fly_2 = false;
};

/// Each butterfly measures its spin along its own flight direction and flies
/// on '+'. One pair, one uniform draw.
inline FlyDecisions fly_decisions(EntanglementMode mode, double dir1_angle, double dir2_angle,
                                  Rng& rng) {
    const PairOutcome o =
        sample_pair(mode, MeasurementAxis{dir1_angle}, MeasurementAxis{dir2_angle}, rng);
    return {o.first == Spin::Plus, o.second == Spin::Plus};
}

/// Judges a completed flight and applies the learning rule. Returns whether
/// the flight is kept; on false the caller must undo the flight.
///
/// Weights are recomputed from the integer exponent rather than multiplied
/// in place, so repeated up/down updates never drift.
inline bool evaluate_and_update(ButterflyState& state, int direction_index, double intensity_before,
                                double intensity_after, double lambda, double threshold_fraction) {
    const double increase = intensity_after - intensity_before;
    const auto i = static_cast<std::size_t>(direction_index);
    const bool accepted = increase > 0.0 && increase >= threshold_fraction * state.max_increase;
    if (accepted) {
        ++state.exponents[i];
        state.max_increase = std::max(state.max_increase, increase);
    } else {
        --state.exponents[i];
    }
    state.weights[i] = std::pow(1.0 + lambda, state.exponents[i]);
    return accepted;
}

struct FlightRecord {
    struct Side {
        int direction_index = 0;
        bool flew = false;
        bool accepted = false;
        /// Executed a back-flight this round.
        bool flew_back = false;
        double intensity_before = 0.0;
        double intensity_after = 0.0;
        /// End-of-round position and memory.
        Vec2 position;
        double max_increase = 0.0;
    };
    std::int64_t round = 0;
    std::array<Side, 2> side;
    int flights_this_round = 0;
    /// Separation at the end of the round.
    double distance = 0.0;
};

struct ButterflyRunSummary {
    std::int64_t total_flights = 0;
    std::int64_t accepted_flights = 0;
    std::int64_t rejected_flights = 0;
    std::int64_t back_flights = 0;
    std::int64_t rounds = 0;
    bool converged = false;  ///< false: max_rounds hit before meeting
    double final_distance = 0.0;
};

struct ButterflyRun {
    std::vector<FlightRecord> records;
    ButterflyRunSummary summary;
    std::array<ButterflyState, 2> final_state;
};

/// Runs rounds until the pair is within meet distance or max_rounds pass.
///
/// Butterfly 1 starts at the origin, butterfly 2 at (initial_distance, 0).
/// A round: each free butterfly picks a direction; one entangled pair is
/// measured along the two picked directions; flyers move simultaneously;
/// every flyer compares the partner's scent before and after the round
/// (including any back-flight made in it) and applies the learning rule.
/// Each round consumes exactly three uniforms.
inline ButterflyRun run_butterflies(const ButterflyScenarioConfig& config, bool keep_records = false) {
    validate(config);
    Rng rng(config.seed);
    const double meet = config.effective_meet_distance();
    const double epsilon = meet / 10.0;
    const int n_dir = config.n_directions;

    ButterflyRun run;
    auto& bf = run.final_state;
    bf[0] = ButterflyState({0.0, 0.0}, n_dir);
    bf[1] = ButterflyState({config.initial_distance, 0.0}, n_dir);
    auto& s = run.summary;

    auto separation = [&] { return (bf[0].position - bf[1].position).norm(); };

    std::array<std::optional<Vec2>, 2> pending_return;
    double distance = separation();
    while (distance > meet && s.rounds < config.max_rounds) {
        FlightRecord rec;
        rec.round = s.rounds++;

        std::array<int, 2> dir{choose_direction(bf[0], rng), choose_direction(bf[1], rng)};
        std::array<double, 2> angle{direction_angle(dir[0], n_dir), direction_angle(dir[1], n_dir)};
        const FlyDecisions d = fly_decisions(config.mode, angle[0], angle[1], rng);
        std::array<bool, 2> fly{d.fly_1, d.fly_2};

        const double before = scent_intensity(distance, epsilon);
        const std::array<Vec2, 2> start{bf[0].position, bf[1].position};

        for (std::size_t j = 0; j < 2; ++j) {
            auto& side = rec.side[j];
            side.direction_index = dir[j];
            auto& pending = pending_return[j];
            if (pending) {
                bf[j].position = *pending;
                pending.reset();
                side.flew_back = true;
                fly[j] = false;
                continue;
            }
            if (fly[j]) {
                const double a = angle[j];
                bf[j].position +=
                    config.step_length * Vec2{std::cos(a), std::sin(a)};
                side.flew = true;
            }
        }

        const double after = scent_intensity(separation(), epsilon);
        for (std::size_t j = 0; j < 2; ++j) {
            auto& side = rec.side[j];
            if (!side.flew) continue;
            side.intensity_before = before;
            side.intensity_after = after;
            side.accepted = evaluate_and_update(bf[j], side.direction_index,
                                                before, after, config.lambda,
                                                config.threshold_fraction);
        }

        distance = separation();
        const bool met = distance <= meet;
        for (std::size_t j = 0; j < 2; ++j) {
            auto& side = rec.side[j];
            if (!side.flew) continue;
            if (side.accepted) {
                ++s.accepted_flights;
                continue;
            }
            ++s.rejected_flights;
            if (config.back_flight == BackFlight::SameRound) {
                bf[j].position = start[j];
                side.flew_back = true;
            } else if (!met) {
                pending_return[j] = start[j];
            }
        }
        if (config.back_flight == BackFlight::SameRound) distance = separation();

        for (const auto& side : rec.side) {
            rec.flights_this_round += int(side.flew) + int(side.flew_back);
            s.back_flights += int(side.flew_back);
        }
        s.total_flights += rec.flights_this_round;
        for (std::size_t j = 0; j < 2; ++j) {
            rec.side[j].position = bf[j].position;
            rec.side[j].max_increase = bf[j].max_increase;
        }
        rec.distance = distance;
        if (keep_records) run.records.push_back(rec);
    }
    s.final_distance = distance;
    s.converged = distance <= meet;
    return run;
}

}  // namespace qcoop::butterflies

#endif  // QCOOP_BUTTERFLIES_HPP_
