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

#include "qcoop/butterflies.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

namespace qcoop::butterflies {
namespace {

constexpr double kPi = std::numbers::pi;

double sigma(double n, double p) { return std::sqrt(n * p * (1 - p)); }

TEST(ScentIntensity, InverseSquare) {
    EXPECT_EQ(scent_intensity(1.0, 0.5), 1.0);
    EXPECT_EQ(scent_intensity(2.0, 0.5), 0.25);
    EXPECT_EQ(scent_intensity(0.0, 0.5), 4.0);
    EXPECT_TRUE(std::isfinite(scent_intensity(0.0, 0.5)));
}

TEST(ChooseDirection, IsotropicStart) {
    ButterflyState s({}, 16);
    constexpr int n = 100000;
    std::vector<int> count(16, 0);
    Rng rng(1);
    for (int i = 0; i < n; ++i) ++count[static_cast<std::size_t>(choose_direction(s, rng))];
    for (int c : count) EXPECT_LT(std::abs(c - n / 16.0), 4 * sigma(n, 1.0 / 16));
}

TEST(ChooseDirection, DoubledWeight) {
    ButterflyState s({}, 16);
    s.weights[0] = 2.0;
    constexpr int n = 100000;
    int hits = 0;
    Rng rng(2);
    for (int i = 0; i < n; ++i) hits += choose_direction(s, rng) == 0;
    EXPECT_LT(std::abs(hits - n * 2.0 / 17.0), 4 * sigma(n, 2.0 / 17.0));
}

TEST(ChooseDirection, DominantWeight) {
    ButterflyState s({}, 16);
    std::fill(s.weights.begin(), s.weights.end(), 1e-12);
    s.weights[5] = 1.0;
    Rng rng(3);
    int hits = 0;
    for (int i = 0; i < 10000; ++i) hits += choose_direction(s, rng) == 5;
    EXPECT_GE(hits, 9999);
}

TEST(FlyDecisions, SingletFacingEachOther) {
    constexpr int n = 100000;
    int both = 0;
    Rng rng(4);
    for (int i = 0; i < n; ++i) {
        const auto d = fly_decisions(EntanglementMode::Singlet, 0.0, kPi, rng);
        ASSERT_EQ(d.fly_1, d.fly_2);
        both += d.fly_1;
    }
    EXPECT_LT(std::abs(both - 0.5 * n), 4 * sigma(n, 0.5));
}

TEST(FlyDecisions, SingletSameHeadingExactlyOneFlies) {
    Rng rng(5);
    for (int k = 0; k < 16; ++k)
        for (int i = 0; i < 500; ++i) {
            const double a = direction_angle(k, 16);
            const auto d = fly_decisions(EntanglementMode::Singlet, a, a, rng);
            ASSERT_NE(d.fly_1, d.fly_2);
        }
}

TEST(FlyDecisions, IndependentCoins) {
    constexpr int n = 100000;
    int both = 0, one = 0;
    Rng rng(6);
    for (int i = 0; i < n; ++i) {
        const auto d = fly_decisions(EntanglementMode::Independent, 0.3, 2.0, rng);
        both += d.fly_1 && d.fly_2;
        one += d.fly_1 != d.fly_2;
    }
    EXPECT_LT(std::abs(both - 0.25 * n), 4 * sigma(n, 0.25));
    EXPECT_LT(std::abs(one - 0.5 * n), 4 * sigma(n, 0.5));
}

TEST(EvaluateAndUpdate, NoLearningAtLambdaZero) {
    ButterflyState s({}, 16);
    EXPECT_TRUE(evaluate_and_update(s, 3, 1.0, 2.0, 0.0, 0.6));
    EXPECT_FALSE(evaluate_and_update(s, 4, 2.0, 1.0, 0.0, 0.6));
    for (double w : s.weights) EXPECT_EQ(w, 1.0);
    EXPECT_EQ(s.max_increase, 1.0);
}

TEST(EvaluateAndUpdate, ColdStartAcceptsAnyImprovement) {
    ButterflyState s({}, 16);
    EXPECT_TRUE(evaluate_and_update(s, 0, 1.0, 1.0 + 1e-9, 0.5, 0.6));
    EXPECT_EQ(s.weights[0], 1.5);
    ButterflyState t({}, 16);
    EXPECT_FALSE(evaluate_and_update(t, 0, 1.0, 1.0, 0.5, 0.6));
    EXPECT_EQ(t.max_increase, 0.0);
}

TEST(EvaluateAndUpdate, FlyingApartIsRejected) {
    ButterflyState s({}, 16);
    EXPECT_FALSE(evaluate_and_update(s, 2, 1.0, 0.5, 0.5, 0.6));
    EXPECT_EQ(s.weights[2], 1.0 / 1.5);
    EXPECT_EQ(s.exponents[2], -1);
}

TEST(EvaluateAndUpdate, ThresholdIsInclusive) {
    ButterflyState s({}, 16);
    s.max_increase = 1.0;
    EXPECT_TRUE(evaluate_and_update(s, 1, 0.0, 0.5, 1.0, 0.5));
    EXPECT_FALSE(evaluate_and_update(s, 1, 0.0, 0.4999, 1.0, 0.5));
    EXPECT_EQ(s.max_increase, 1.0);
    EXPECT_EQ(s.weights[1], 1.0);
}

TEST(EvaluateAndUpdate, MaxIncreaseOnlyGrows) {
    ButterflyState s({}, 16);
    EXPECT_TRUE(evaluate_and_update(s, 0, 0.0, 1.0, 0.5, 0.6));
    EXPECT_TRUE(evaluate_and_update(s, 0, 0.0, 0.7, 0.5, 0.6));
    EXPECT_EQ(s.max_increase, 1.0);
    EXPECT_TRUE(evaluate_and_update(s, 0, 0.0, 3.0, 0.5, 0.6));
    EXPECT_EQ(s.max_increase, 3.0);
}

TEST(RunButterflies, AlreadyTogether) {
    ButterflyScenarioConfig c;
    c.initial_distance = 5.0;
    c.step_length = 5.0;
    const auto run = run_butterflies(c, true);
    EXPECT_EQ(run.summary.total_flights, 0);
    EXPECT_EQ(run.summary.rounds, 0);
    EXPECT_TRUE(run.summary.converged);
    EXPECT_TRUE(run.records.empty());
}

TEST(RunButterflies, RoundCapReportsNonConvergence) {
    ButterflyScenarioConfig c;
    c.max_rounds = 10;
    const auto run = run_butterflies(c);
    EXPECT_EQ(run.summary.rounds, 10);
    EXPECT_FALSE(run.summary.converged);
    EXPECT_GT(run.summary.final_distance, c.effective_meet_distance());
}

TEST(RunButterflies, SameRoundBackFlightsPairWithRejections) {
    ButterflyScenarioConfig c;
    c.initial_distance = 300.0;
    c.back_flight = BackFlight::SameRound;
    c.seed = 7;
    const auto run = run_butterflies(c, true);
    ASSERT_TRUE(run.summary.converged);
    EXPECT_EQ(run.summary.back_flights, run.summary.rejected_flights);
    for (const auto& r : run.records)
        for (const auto& s : r.side) EXPECT_EQ(s.flew_back, s.flew && !s.accepted);
}

TEST(RunButterflies, NextRoundBackFlightOccupiesTheFollowingRound) {
    ButterflyScenarioConfig c;
    c.initial_distance = 300.0;
    c.seed = 8;
    const auto run = run_butterflies(c, true);
    ASSERT_TRUE(run.summary.converged);
    const auto& recs = run.records;
    for (std::size_t k = 0; k + 1 < recs.size(); ++k)
        for (std::size_t j = 0; j < 2; ++j) {
            const bool rejected = recs[k].side[j].flew && !recs[k].side[j].accepted;
            EXPECT_EQ(recs[k + 1].side[j].flew_back, rejected) << "round " << k;
            if (recs[k + 1].side[j].flew_back) {
                EXPECT_FALSE(recs[k + 1].side[j].flew);
            }
        }
}

// Round 0 reproduced by hand: two direction draws, then one pair.
TEST(RunButterflies, FirstRoundReplaysFromSeed) {
    ButterflyScenarioConfig c;
    c.seed = 9;
    const auto run = run_butterflies(c, true);
    ASSERT_FALSE(run.records.empty());
    Rng rng(c.seed);
    const ButterflyState fresh({}, c.n_directions);
    const int d1 = choose_direction(fresh, rng);
    const int d2 = choose_direction(fresh, rng);
    const auto fly = fly_decisions(c.mode, direction_angle(d1, 16), direction_angle(d2, 16), rng);
    const auto& r = run.records.front();
    EXPECT_EQ(r.side[0].direction_index, d1);
    EXPECT_EQ(r.side[1].direction_index, d2);
    EXPECT_EQ(r.side[0].flew, fly.fly_1);
    EXPECT_EQ(r.side[1].flew, fly.fly_2);
}

TEST(RunButterflies, SingletNeedsFewerFlights) {
    double singlet = 0.0, independent = 0.0;
    for (std::uint64_t i = 0; i < 40; ++i) {
        ButterflyScenarioConfig c;
        c.seed = derive_seed(3, i);
        c.mode = EntanglementMode::Singlet;
        singlet += double(run_butterflies(c).summary.total_flights);
        c.mode = EntanglementMode::Independent;
        independent += double(run_butterflies(c).summary.total_flights);
    }
    EXPECT_LT(singlet, independent);
}

TEST(Validate, RejectsBadParameters) {
    auto bad = [](auto mutate) {
        ButterflyScenarioConfig c;
        mutate(c);
        return c;
    };
    EXPECT_THROW(validate(bad([](auto& c) { c.initial_distance = 0; })), std::invalid_argument);
    EXPECT_THROW(validate(bad([](auto& c) { c.step_length = -1; })), std::invalid_argument);
    EXPECT_THROW(validate(bad([](auto& c) { c.lambda = 1.5; })), std::invalid_argument);
    EXPECT_THROW(validate(bad([](auto& c) { c.threshold_fraction = 0; })), std::invalid_argument);
    EXPECT_THROW(validate(bad([](auto& c) { c.n_directions = 15; })), std::invalid_argument);
    EXPECT_THROW(validate(bad([](auto& c) { c.meet_distance = 0.0; })), std::invalid_argument);
    EXPECT_THROW(parse_back_flight("later"), std::invalid_argument);
    EXPECT_NO_THROW(validate(ButterflyScenarioConfig{}));
}

}  // namespace
}  // namespace qcoop::butterflies
