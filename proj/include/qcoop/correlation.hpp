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

#ifndef QCOOP_CORRELATION_HPP_
#define QCOOP_CORRELATION_HPP_

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qcoop/rng.hpp"

namespace qcoop {

/// Joint statistics of the two decision spins.
enum class EntanglementMode { Singlet, Triplet, Independent };

inline std::string_view to_string(EntanglementMode mode) {
    switch (mode) {
        case EntanglementMode::Singlet: return "singlet";
        case EntanglementMode::Triplet: return "triplet";
        case EntanglementMode::Independent: return "independent";
    }
    return "?";
}

inline EntanglementMode parse_mode(std::string_view text) {
    if (text == "singlet") return EntanglementMode::Singlet;
    if (text == "triplet") return EntanglementMode::Triplet;
    if (text == "independent") return EntanglementMode::Independent;
    throw std::invalid_argument("unknown entanglement mode '" + std::string(text) + "'");
}

/// Planar measurement direction in radians. Stored as given; only the
/// difference of two axes enters any probability.
struct MeasurementAxis {
    double angle = 0.0;
};

/// Probabilities of the outcomes ++, --, +-, -+.
struct JointProbabilities {
    double p_pp = 0.25;
    double p_mm = 0.25;
    double p_pm = 0.25;
    double p_mp = 0.25;
};

enum class Spin : unsigned char { Plus, Minus };

struct PairOutcome {
    Spin first = Spin::Plus;
    Spin second = Spin::Plus;
    friend constexpr bool operator==(PairOutcome, PairOutcome) = default;
};

inline JointProbabilities joint_probabilities(EntanglementMode mode, MeasurementAxis axis1,
                                              MeasurementAxis axis2) {
    if (mode == EntanglementMode::Independent) return {};

    const double alpha = std::remainder(axis1.angle - axis2.angle, 2.0 * std::numbers::pi);
    const double s = std::sin(0.5 * alpha);
    const double c = std::cos(0.5 * alpha);
    const double half_sin2 = 0.5 * s * s;
    const double half_cos2 = 0.5 * c * c;

    if (mode == EntanglementMode::Singlet) return {half_sin2, half_sin2, half_cos2, half_cos2};
    return {half_cos2, half_cos2, half_sin2, half_sin2};
}

/// Maps one uniform u in [0,1) onto the outcome order ++, --, +-, -+ using
/// cumulative thresholds.
inline PairOutcome outcome_from_uniform(const JointProbabilities& p, double u) {
    double edge = p.p_pp;
    if (u < edge) return {Spin::Plus, Spin::Plus};
    edge += p.p_mm;
    if (u < edge) return {Spin::Minus, Spin::Minus};
    edge += p.p_pm;
    if (u < edge) return {Spin::Plus, Spin::Minus};
    return {Spin::Minus, Spin::Plus};
}

/// Draws one measurement round. Consumes exactly one uniform from `rng`.
inline PairOutcome sample_pair(EntanglementMode mode, MeasurementAxis axis1, MeasurementAxis axis2,
                               Rng& rng) {
    return outcome_from_uniform(joint_probabilities(mode, axis1, axis2), rng.uniform());
}

}  // namespace qcoop

#endif  // QCOOP_CORRELATION_HPP_
