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

#include "qcoop/ants.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

namespace qcoop::ants {
namespace {

constexpr double kPi = std::numbers::pi;

// Trapezoid rule on a piecewise-linear density is exact when 0 is a node.
double trapezoid_mass(double lo, double hi, double z, int n = 64) {
    const double h = (hi - lo) / n;
    double sum = 0.5 * (direction_density(lo, z) + direction_density(hi, z));
    for (int i = 1; i < n; ++i) sum += direction_density(lo + i * h, z);
    return sum * h;
}

TEST(DirectionDensity, UniformWithoutBias) {
    for (double b : {-kPi, -1.0, 0.0, 2.0, kPi}) EXPECT_DOUBLE_EQ(direction_density(b, 0.0), 1.0 / (2 * kPi));
}

TEST(DirectionDensity, ForwardThreeTimesBackwardAtTwoThirds) {
    EXPECT_NEAR(direction_density(0.0, 2.0 / 3.0) / direction_density(kPi, 2.0 / 3.0), 3.0, 1e-12);
}

TEST(DirectionDensity, IntegratesToOne) {
    for (double z : {0.0, 0.25, 0.5, 0.75, 1.0})
        EXPECT_NEAR(trapezoid_mass(-kPi, 0.0, z) + trapezoid_mass(0.0, kPi, z), 1.0, 1e-13) << "z=" << z;
}

TEST(SampleDirection, InverseCdfEndpoints) {
    EXPECT_EQ(direction_from_uniform(0.5, 0.0), 0.0);
    EXPECT_NEAR(direction_from_uniform(std::nextafter(1.0, 0.0), 0.0), kPi, 1e-12);
    EXPECT_NEAR(direction_from_uniform(0.0, 0.0), -kPi, 1e-12);
    for (double z : {0.0, 0.3, 2.0 / 3.0, 1.0}) EXPECT_EQ(direction_from_uniform(0.5, z), 0.0);
    EXPECT_NEAR(direction_from_uniform(std::nextafter(1.0, 0.0), 1.0), kPi, 1e-6);
}

TEST(SampleDirection, UniformCaseIsLinear) {
    for (double u : {0.1, 0.25, 0.6, 0.9}) EXPECT_NEAR(direction_from_uniform(u, 0.0), (2 * u - 1) * kPi, 1e-14);
}

// Property: the numerically integrated CDF at the returned angle recovers u.
TEST(SampleDirection, InvertsTheIntegratedCdf) {
    Rng rng(7);
    for (int k = 0; k < 500; ++k) {
        const double u = rng.uniform();
        const double z = rng.uniform();
        const double b = direction_from_uniform(u, z);
        ASSERT_GE(b, -kPi);
        ASSERT_LE(b, kPi);
        const double cdf = b >= 0.0 ? 0.5 + trapezoid_mass(0.0, b, z) : 0.5 - trapezoid_mass(b, 0.0, z);
        ASSERT_NEAR(cdf, u, 1e-12) << "u=" << u << " z=" << z;
    }
}

TEST(SampleDirection, TriangularHistogram) {
    constexpr int bins = 20;
    constexpr int n = 100000;
    std::array<int, bins> count{};
    Rng rng(8);
    for (int i = 0; i < n; ++i) {
        const double b = sample_direction(1.0, rng);
        const int k = std::min(bins - 1, int((b + kPi) / (2 * kPi) * bins));
        ++count[static_cast<std::size_t>(k)];
    }
    double chi2 = 0.0;
    for (int k = 0; k < bins; ++k) {
        const double lo = -kPi + 2 * kPi * k / bins, hi = lo + 2 * kPi / bins;
        const double p = trapezoid_mass(lo, hi, 1.0);
        const double mean = n * p, sd = std::sqrt(n * p * (1 - p));
        EXPECT_LT(std::abs(count[static_cast<std::size_t>(k)] - mean), 4 * sd) << "bin " << k;
        chi2 += std::pow(count[static_cast<std::size_t>(k)] - mean, 2) / mean;
    }
    EXPECT_LT(chi2, 43.82);  // chi-square 19 dof, p = 0.001
}

TEST(PushAttempt, AlignedTripletAntsDecideTogether) {
    AntScenarioConfig c;
    c.strength_1 = c.strength_2 = 1.0;
    c.f_min = 2.0;
    c.g = 1.0;
    c.mode = EntanglementMode::Triplet;
    Rng rng(9);
    int both = 0, none = 0;
    for (int i = 0; i < 2000; ++i) {
        const auto r = resolve_push(c, 0.0, 0.0, rng);
        ASSERT_EQ(r.pushed_1, r.pushed_2);
        if (r.pushed_1) {
            ASSERT_EQ(r.displacement, (Vec2{0.0, 2.0}));
            ++both;
        } else {
            ASSERT_EQ(r.displacement, Vec2{});
            ++none;
        }
    }
    EXPECT_GT(both, 0);
    EXPECT_GT(none, 0);
}

TEST(PushAttempt, TooHeavyPebbleNeverMoves) {
    for (auto mode : {EntanglementMode::Triplet, EntanglementMode::Independent}) {
        AntScenarioConfig c;
        c.mode = mode;
        c.f_min = c.strength_1 + c.strength_2 + 1e-9;
        c.n_attempts = 5000;
        const auto run = run_ants(c);
        EXPECT_EQ(run.summary.final, Vec2{});
        EXPECT_EQ(run.summary.solo_pushes + run.summary.joint_pushes, 0);
    }
}

TEST(PushAttempt, ConsumesThreeDraws) {
    AntScenarioConfig c;
    Rng a(10), b(10);
    push_attempt(c, a);
    for (int i = 0; i < 3; ++i) b.uniform();
    EXPECT_EQ(a, b);
}

// Oracle: tests/oracles/ant_displacement_oracle.py (scipy, band-exact
// coordinates) for z = 2/3, s = (0.9, 1.1), f_min = 1.5, g = 1.
TEST(PushAttempt, MeanDisplacementMatchesQuadratureOracle) {
    struct Case {
        EntanglementMode mode;
        double r_y;
    };
    for (const Case& k : {Case{EntanglementMode::Triplet, 0.136285505439329},
                          Case{EntanglementMode::Independent, 0.0789389267185159}}) {
        AntScenarioConfig c;
        c.mode = k.mode;
        c.z = 2.0 / 3.0;
        c.strength_1 = 0.9;
        c.strength_2 = 1.1;
        c.f_min = 1.5;
        constexpr int n = 1000000;
        Rng rng(11);
        double sx = 0, sy = 0, sxx = 0, syy = 0;
        for (int i = 0; i < n; ++i) {
            const auto d = push_attempt(c, rng).displacement;
            sx += d.x;
            sy += d.y;
            sxx += d.x * d.x;
            syy += d.y * d.y;
        }
        const double mx = sx / n, my = sy / n;
        const double se_x = std::sqrt((sxx / n - mx * mx) / n), se_y = std::sqrt((syy / n - my * my) / n);
        EXPECT_LT(std::abs(my - k.r_y), 3 * se_y) << to_string(k.mode);
        EXPECT_LT(std::abs(mx), 3 * se_x) << to_string(k.mode);
    }
}

TEST(RunAnts, NoAttemptsStaysAtOrigin) {
    AntScenarioConfig c;
    c.n_attempts = 0;
    const auto run = run_ants(c);
    ASSERT_EQ(run.path.points.size(), 1u);
    EXPECT_EQ(run.path.points[0], Vec2{});
    EXPECT_EQ(run.path.final, Vec2{});
}

TEST(RunAnts, PathStepsAreRecordedDisplacements) {
    AntScenarioConfig c;
    c.n_attempts = 600;
    c.seed = 12;
    const auto run = run_ants(c, true);
    ASSERT_EQ(run.path.points.size(), 601u);
    ASSERT_EQ(run.records.size(), 600u);
    EXPECT_EQ(run.path.points.front(), Vec2{});
    for (std::size_t k = 0; k < run.records.size(); ++k) {
        EXPECT_EQ(run.path.points[k] + run.records[k].displacement, run.path.points[k + 1]);
        EXPECT_EQ(run.records[k].attempt_index, std::int64_t(k));
    }
    const auto& s = run.summary;
    EXPECT_EQ(s.solo_pushes + s.joint_pushes + s.futile_pushes + s.rests, c.n_attempts);
    EXPECT_EQ(s.goal_distance, s.final.y);
}

TEST(RunAnts, EntangledAntsGetFurtherOnAverage) {
    double entangled = 0.0, independent = 0.0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        AntScenarioConfig c;
        c.seed = derive_seed(2024, seed);
        c.mode = EntanglementMode::Triplet;
        entangled += run_ants(c).summary.goal_distance;
        c.mode = EntanglementMode::Independent;
        independent += run_ants(c).summary.goal_distance;
    }
    EXPECT_GT(entangled, independent);
}

// Ant 1's decisions carry no information about ant 2's chosen direction.
TEST(RunAnts, NoSignalingThroughDirections) {
    AntScenarioConfig c;
    c.mode = EntanglementMode::Triplet;
    c.n_attempts = 200000;
    c.seed = 13;
    const auto run = run_ants(c, true);
    std::array<std::int64_t, 4> pushes{}, total{};
    double s1 = 0, s2 = 0, s12 = 0, q1 = 0, q2 = 0;
    for (const auto& r : run.records) {
        const auto bin = static_cast<std::size_t>(std::min(3, int((r.beta_2 + kPi) / (kPi / 2))));
        ++total[bin];
        pushes[bin] += r.pushed_1;
        s1 += r.beta_1;
        s2 += r.beta_2;
        s12 += r.beta_1 * r.beta_2;
        q1 += r.beta_1 * r.beta_1;
        q2 += r.beta_2 * r.beta_2;
    }
    for (std::size_t b = 0; b < 4; ++b) {
        const double sd = std::sqrt(total[b] * 0.25);
        EXPECT_LT(std::abs(pushes[b] - 0.5 * total[b]), 4 * sd) << "beta_2 quadrant " << b;
    }
    const double n = double(c.n_attempts);
    const double corr = (s12 / n - s1 / n * s2 / n) /
                        std::sqrt((q1 / n - s1 * s1 / n / n) * (q2 / n - s2 * s2 / n / n));
    EXPECT_LT(std::abs(corr), 4 / std::sqrt(n));
}

TEST(Validate, RejectsBadParameters) {
    auto bad = [](auto mutate) {
        AntScenarioConfig c;
        mutate(c);
        return c;
    };
    EXPECT_THROW(validate(bad([](auto& c) { c.strength_1 = 0; })), std::invalid_argument);
    EXPECT_THROW(validate(bad([](auto& c) { c.f_min = -1; })), std::invalid_argument);
    EXPECT_THROW(validate(bad([](auto& c) { c.z = 1.01; })), std::invalid_argument);
    EXPECT_THROW(validate(bad([](auto& c) { c.g = 0; })), std::invalid_argument);
    EXPECT_THROW(validate(bad([](auto& c) { c.n_attempts = -1; })), std::invalid_argument);
    EXPECT_NO_THROW(validate(AntScenarioConfig{}));
}

}  // namespace
}  // namespace qcoop::ants
