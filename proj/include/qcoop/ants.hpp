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

#ifndef QCOOP_ANTS_HPP_
#define QCOOP_ANTS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qcoop/correlation.hpp"
#include "qcoop/rng.hpp"
#include "qcoop/vec2.hpp"

namespace qcoop::ants {

/// Two ants pushing one pebble towards the goal, which lies along +y.
struct AntScenarioConfig {
    double strength_1 = 0.9;
    double strength_2 = 1.1;
    double f_min = 1.5;
    double z = 2.0 / 3.0;   ///< forward bias of the direction density
    double g = 1.0;         ///< distance moved per unit force
    std::int64_t n_attempts = 600;
    EntanglementMode mode = EntanglementMode::Triplet;
    std::uint64_t seed = 1;

    friend bool operator==(const AntScenarioConfig&, const AntScenarioConfig&) = default;
};

inline void validate(const AntScenarioConfig& c) {
    if (!(c.strength_1 > 0.0) || !(c.strength_2 > 0.0))
        throw std::invalid_argument("ant strengths must be positive");
    if (!(c.f_min >= 0.0)) throw std::invalid_argument("f_min must be non-negative");
    if (!(c.z >= 0.0 && c.z <= 1.0)) throw std::invalid_argument("z must lie in [0, 1]");
    if (!(c.g > 0.0)) throw std::invalid_argument("g must be positive");
    if (c.n_attempts < 0) throw std::invalid_argument("n_attempts must be non-negative");
}

/// Normalization of the direction density n(pi - z|beta|) over [-pi, pi].
inline double direction_norm(double z) {
    return 1.0 / (std::numbers::pi * std::numbers::pi * (2.0 - z));
}

/// Probability density of push direction beta, piecewise linear in |beta|.
inline double direction_density(double beta, double z) {
    return direction_norm(z) * (std::numbers::pi - z * std::abs(beta));
}

/// Inverse CDF of direction_density.
///
/// On the positive half the CDF is 1/2 + n(pi*b - z*b^2/2). Solving for b
/// uses the cancellation-free root 2t / (pi + sqrt(pi^2 - 2zt)), which is
/// also valid at z = 0.
inline double direction_from_uniform(double u, double z) {
    constexpr double pi = std::numbers::pi;
    const double tail = u - 0.5;
    const double t = std::abs(tail) / direction_norm(z);
    const double disc = std::max(0.0, pi * pi - 2.0 * z * t);
    const double beta = std::min(pi, 2.0 * t / (pi + std::sqrt(disc)));
    return tail < 0.0 ? -beta : beta;
}

/// One uniform draw.
inline double sample_direction(double z, Rng& rng) { return direction_from_uniform(rng.uniform(), z); }

inline Vec2 push_force(double strength, double beta) {
    return {strength * std::sin(beta), strength * std::cos(beta)};
}

struct PushRecord {
    std::int64_t attempt_index = 0;
    double beta_1 = 0.0;
    double beta_2 = 0.0;
    bool pushed_1 = false;
    bool pushed_2 = false;
    Vec2 displacement;

    bool moved() const { return displacement.x != 0.0 || displacement.y != 0.0; }
};

/// Push decision and pebble response for already-chosen directions.
/// Consumes one uniform (the entangled pair reserved for this attempt).
inline PushRecord resolve_push(const AntScenarioConfig& config, double beta_1, double beta_2,
                               Rng& rng) {
    PushRecord rec;
    rec.beta_1 = beta_1;
    rec.beta_2 = beta_2;

    const PairOutcome spins =
        sample_pair(config.mode, MeasurementAxis{beta_1}, MeasurementAxis{beta_2}, rng);
    rec.pushed_1 = spins.first == Spin::Plus;
    rec.pushed_2 = spins.second == Spin::Plus;

    Vec2 force;
    if (rec.pushed_1) force += push_force(config.strength_1, beta_1);
    if (rec.pushed_2) force += push_force(config.strength_2, beta_2);

    // Threshold is inclusive: a force of exactly f_min moves the pebble.
    if ((rec.pushed_1 || rec.pushed_2) && force.norm() >= config.f_min)
        rec.displacement = config.g * force;
    return rec;
}

/// Three uniform draws: beta_1, beta_2, then the decision pair.
inline PushRecord push_attempt(const AntScenarioConfig& config, Rng& rng) {
    const double beta_1 = sample_direction(config.z, rng);
    const double beta_2 = sample_direction(config.z, rng);
    return resolve_push(config, beta_1, beta_2, rng);
}

struct PebblePath {
    std::vector<Vec2> points{Vec2{}};
    Vec2 final;
};

struct AntRunSummary {
    Vec2 final;
    double goal_distance = 0.0;    ///< final.y
    std::int64_t solo_pushes = 0;  ///< one ant pushed and the pebble moved
    std::int64_t joint_pushes = 0; ///< both pushed and the pebble moved
    std::int64_t futile_pushes = 0;///< someone pushed, nothing moved
    std::int64_t rests = 0;        ///< both ants rested
};

struct AntRun {
    PebblePath path;
    AntRunSummary summary;
    std::vector<PushRecord> records;
};

/// Executes config.n_attempts sequential push attempts on one stream seeded
/// with config.seed. Per-attempt records are kept only when `keep_records`.
inline AntRun run_ants(const AntScenarioConfig& config, bool keep_records = false) {
    validate(config);
    Rng rng(config.seed);
    AntRun run;
    run.path.points.reserve(static_cast<std::size_t>(config.n_attempts) + 1);
    if (keep_records) run.records.reserve(static_cast<std::size_t>(config.n_attempts));

    Vec2 position;
    auto& s = run.summary;
    for (std::int64_t k = 0; k < config.n_attempts; ++k) {
        PushRecord rec = push_attempt(config, rng);
        rec.attempt_index = k;
        position += rec.displacement;
        run.path.points.push_back(position);

        const int pushers = int(rec.pushed_1) + int(rec.pushed_2);
        if (pushers == 0) ++s.rests;
        else if (!rec.moved()) ++s.futile_pushes;
        else if (pushers == 1) ++s.solo_pushes;
        else ++s.joint_pushes;

        if (keep_records) run.records.push_back(rec);
    }
    run.path.final = position;
    s.final = position;
    s.goal_distance = position.y;
    return run;
}

}  // namespace qcoop::ants

#endif  // QCOOP_ANTS_HPP_
