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

#ifndef QCOOP_SELFTEST_HPP_
#define QCOOP_SELFTEST_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qcoop/ants.hpp"
#include "qcoop/butterflies.hpp"
#include "qcoop/config.hpp"
#include "qcoop/correlation.hpp"
#include "qcoop/harness.hpp"
#include "qcoop/rng.hpp"
#include "qcoop/stats.hpp"
#include "qcoop/table.hpp"
#include "qcoop/theory.hpp"

// Statistical and structural invariants of every module, runnable from the
// command line (`qcoop selftest`). Each check is self-contained and seeded.

namespace qcoop::selftest {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

namespace detail {

constexpr EntanglementMode kModes[] = {EntanglementMode::Singlet, EntanglementMode::Triplet,
                                       EntanglementMode::Independent};

inline double random_angle(Rng& rng) { return (rng.uniform() * 2.0 - 1.0) * 4.0 * std::numbers::pi; }

/// |observed - p n| in units of the binomial standard deviation.
inline double binomial_z(std::int64_t observed, std::int64_t n, double p) {
    const double sd = std::sqrt(double(n) * p * (1.0 - p));
    const double diff = double(observed) - p * double(n);
    if (sd == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::abs(diff) / sd;
}

template <typename F>
CheckResult check(std::string name, F&& body) {
    std::ostringstream detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail << "exception: " << e.what();
    }
    return {std::move(name), ok, detail.str()};
}

}  // namespace detail

inline std::vector<CheckResult> run_all() {
    using namespace detail;
    std::vector<CheckResult> out;

    // correlation_core
    out.push_back(check("correlation: normalization and fair marginals", [](std::ostream& d) {
        Rng rng(11);
        double worst = 0.0;
        for (int k = 0; k < 2000; ++k) {
            const double a = random_angle(rng), b = random_angle(rng);
            for (auto m : kModes) {
                const auto p = joint_probabilities(m, {a}, {b});
                worst = std::max({worst, std::abs(p.p_pp + p.p_mm + p.p_pm + p.p_mp - 1.0),
                                  std::abs(p.p_pp + p.p_pm - 0.5), std::abs(p.p_pp + p.p_mp - 0.5)});
                for (double x : {p.p_pp, p.p_mm, p.p_pm, p.p_mp})
                    if (x < 0.0 || x > 1.0) return false;
            }
        }
        d << "max deviation " << worst;
        return worst <= 1e-12;
    }));
    out.push_back(check("correlation: shift invariance", [](std::ostream& d) {
        Rng rng(12);
        double worst = 0.0;
        for (int k = 0; k < 2000; ++k) {
            const double a = random_angle(rng), b = random_angle(rng), delta = random_angle(rng);
            for (auto m : kModes) {
                const auto p = joint_probabilities(m, {a}, {b});
                const auto q = joint_probabilities(m, {a + delta}, {b + delta});
                worst = std::max({worst, std::abs(p.p_pp - q.p_pp), std::abs(p.p_mm - q.p_mm),
                                  std::abs(p.p_pm - q.p_pm), std::abs(p.p_mp - q.p_mp)});
            }
        }
        d << "max deviation " << worst;
        return worst <= 1e-12;
    }));
    out.push_back(check("correlation: singlet/triplet duality", [](std::ostream& d) {
        // Flipping one axis turns singlet statistics into triplet ones.
        Rng rng(13);
        double worst = 0.0;
        for (int k = 0; k < 2000; ++k) {
            const double a = random_angle(rng), b = random_angle(rng);
            const auto s = joint_probabilities(EntanglementMode::Singlet, {a}, {b});
            const auto t = joint_probabilities(EntanglementMode::Triplet, {a + std::numbers::pi}, {b});
            worst = std::max({worst, std::abs(s.p_pp - t.p_pp), std::abs(s.p_mm - t.p_mm),
                              std::abs(s.p_pm - t.p_pm), std::abs(s.p_mp - t.p_mp)});
        }
        d << "max deviation " << worst;
        return worst <= 1e-12;
    }));
    out.push_back(check("correlation: empirical marginals within 4 sigma", [](std::ostream& d) {
        Rng angles(14), rng(15);
        double worst = 0.0;
        for (auto m : kModes) {
            const double a = random_angle(angles), b = random_angle(angles);
            constexpr std::int64_t n = 20000;
            std::int64_t first = 0, second = 0;
            for (std::int64_t i = 0; i < n; ++i) {
                const auto o = sample_pair(m, {a}, {b}, rng);
                first += o.first == Spin::Plus;
                second += o.second == Spin::Plus;
            }
            worst = std::max({worst, binomial_z(first, n, 0.5), binomial_z(second, n, 0.5)});
        }
        d << "max |z| " << worst;
        return worst < 4.0;
    }));
    out.push_back(check("correlation: identical seed gives identical outcomes", [](std::ostream&) {
        Rng r1(99), r2(99), angles(16);
        for (int i = 0; i < 5000; ++i) {
            const double a = random_angle(angles), b = random_angle(angles);
            for (auto m : kModes)
                if (!(sample_pair(m, {a}, {b}, r1) == sample_pair(m, {a}, {b}, r2))) return false;
        }
        return true;
    }));

    // ant_sim
    out.push_back(check("ants: direction density integrates to 1", [](std::ostream& d) {
        double worst = 0.0;
        for (double z : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            constexpr int n = 4096;
            const double h = 2.0 * std::numbers::pi / n;
            double sum = 0.0;
            for (int i = 0; i < n; ++i) sum += ants::direction_density(-std::numbers::pi + (i + 0.5) * h, z) * h;
            worst = std::max(worst, std::abs(sum - 1.0));
        }
        d << "max deviation " << worst;
        return worst < 1e-12;
    }));
    out.push_back(check("ants: force exactly f_min moves the pebble", [](std::ostream& d) {
        ants::AntScenarioConfig c;
        c.strength_1 = c.strength_2 = 1.0;
        c.f_min = 2.0;
        c.g = 1.0;
        c.mode = EntanglementMode::Triplet;
        Rng rng(17);
        int moved = 0;
        for (int i = 0; i < 1000; ++i) {
            const auto r = ants::resolve_push(c, 0.0, 0.0, rng);
            if (r.pushed_1 != r.pushed_2) return false;
            const Vec2 expect = r.pushed_1 ? Vec2{0.0, 2.0} : Vec2{};
            if (!(r.displacement == expect)) return false;
            moved += r.moved();
        }
        d << moved << "/1000 joint pushes moved";
        return moved > 0;
    }));
    out.push_back(check("ants: path additivity and futility", [](std::ostream& d) {
        for (auto m : kModes) {
            ants::AntScenarioConfig c;
            c.mode = m;
            c.n_attempts = 2000;
            c.seed = 18;
            const auto run = ants::run_ants(c, true);
            Vec2 sum;
            for (const auto& r : run.records) {
                if (!r.pushed_1 && !r.pushed_2 && r.moved()) return false;
                Vec2 f;
                if (r.pushed_1) f += ants::push_force(c.strength_1, r.beta_1);
                if (r.pushed_2) f += ants::push_force(c.strength_2, r.beta_2);
                if (f.norm() < c.f_min && r.moved()) return false;
                sum += r.displacement;
            }
            if (!(sum == run.summary.final) || !(run.path.points.back() == run.summary.final)) {
                d << "final mismatch in mode " << to_string(m);
                return false;
            }
        }
        return true;
    }));
    out.push_back(check("ants: single ant pushes half the time in every mode", [](std::ostream& d) {
        double worst = 0.0;
        for (auto m : kModes) {
            ants::AntScenarioConfig c;
            c.mode = m;
            c.n_attempts = 20000;
            c.seed = 19;
            const auto run = ants::run_ants(c, true);
            std::int64_t p1 = 0, p2 = 0;
            for (const auto& r : run.records) {
                p1 += r.pushed_1;
                p2 += r.pushed_2;
            }
            worst = std::max({worst, binomial_z(p1, c.n_attempts, 0.5), binomial_z(p2, c.n_attempts, 0.5)});
        }
        d << "max |z| " << worst;
        return worst < 4.0;
    }));
    out.push_back(check("ants: identical seed gives identical path", [](std::ostream&) {
        ants::AntScenarioConfig c;
        c.seed = 20;
        const auto a = ants::run_ants(c), b = ants::run_ants(c);
        return a.path.points == b.path.points;
    }));

    // butterfly_sim
    auto butterfly_trace = [](butterflies::BackFlight timing, EntanglementMode mode, double lambda,
                              std::uint64_t seed) {
        butterflies::ButterflyScenarioConfig c;
        c.initial_distance = 400.0;
        c.lambda = lambda;
        c.mode = mode;
        c.seed = seed;
        c.back_flight = timing;
        return std::make_pair(c, butterflies::run_butterflies(c, true));
    };
    out.push_back(check("butterflies: weights are exact powers of (1+lambda)", [&](std::ostream& d) {
        for (double lambda : {0.0, 0.3, 0.5, 1.0}) {
            const auto [c, run] = butterfly_trace(butterflies::BackFlight::NextRound,
                                                  EntanglementMode::Singlet, lambda, 21);
            for (std::size_t j = 0; j < 2; ++j) {
                std::vector<int> net(static_cast<std::size_t>(c.n_directions), 0);
                for (const auto& r : run.records) {
                    const auto& s = r.side[j];
                    if (s.flew) net[static_cast<std::size_t>(s.direction_index)] += s.accepted ? 1 : -1;
                }
                for (std::size_t i = 0; i < net.size(); ++i) {
                    const double w = run.final_state[j].weights[i];
                    if (w != std::pow(1.0 + lambda, net[i]) || !(w > 0.0)) {
                        d << "lambda " << lambda << " direction " << i;
                        return false;
                    }
                }
            }
        }
        return true;
    }));
    out.push_back(check("butterflies: max increase is monotone", [&](std::ostream&) {
        for (auto timing : {butterflies::BackFlight::SameRound, butterflies::BackFlight::NextRound}) {
            const auto [c, run] = butterfly_trace(timing, EntanglementMode::Independent, 0.5, 22);
            std::array<double, 2> prev{0.0, 0.0};
            for (const auto& r : run.records)
                for (std::size_t j = 0; j < 2; ++j) {
                    if (r.side[j].max_increase < prev[j]) return false;
                    prev[j] = r.side[j].max_increase;
                }
        }
        return true;
    }));
    out.push_back(check("butterflies: back-flight restores position bit-exactly", [&](std::ostream& d) {
        std::int64_t checked = 0;
        for (auto timing : {butterflies::BackFlight::SameRound, butterflies::BackFlight::NextRound}) {
            const auto [c, run] = butterfly_trace(timing, EntanglementMode::Singlet, 0.5, 23);
            const auto& recs = run.records;
            for (std::size_t k = 0; k < recs.size(); ++k)
                for (std::size_t j = 0; j < 2; ++j) {
                    const auto& s = recs[k].side[j];
                    if (!s.flew || s.accepted) continue;
                    const Vec2 start = k == 0 ? (j == 0 ? Vec2{} : Vec2{c.initial_distance, 0.0})
                                              : recs[k - 1].side[j].position;
                    Vec2 restored;
                    if (timing == butterflies::BackFlight::SameRound) restored = s.position;
                    else if (k + 1 < recs.size()) restored = recs[k + 1].side[j].position;
                    else continue;
                    if (!(restored == start)) return false;
                    ++checked;
                }
        }
        d << checked << " back-flights checked";
        return checked > 0;
    }));
    out.push_back(check("butterflies: flight tally and termination distance", [&](std::ostream&) {
        for (auto timing : {butterflies::BackFlight::SameRound, butterflies::BackFlight::NextRound})
            for (auto mode : {EntanglementMode::Singlet, EntanglementMode::Independent}) {
                const auto [c, run] = butterfly_trace(timing, mode, 0.5, 24);
                std::int64_t total = 0;
                for (const auto& r : run.records) {
                    int expect = 0;
                    for (const auto& s : r.side) expect += int(s.flew) + int(s.flew_back);
                    if (expect != r.flights_this_round) return false;
                    total += r.flights_this_round;
                }
                const auto& s = run.summary;
                if (total != s.total_flights) return false;
                if (s.total_flights != s.accepted_flights + s.rejected_flights + s.back_flights) return false;
                if (!s.converged || s.final_distance > c.effective_meet_distance()) return false;
            }
        return true;
    }));
    out.push_back(check("butterflies: each butterfly flies half its free rounds", [&](std::ostream& d) {
        double worst = 0.0;
        for (auto mode : {EntanglementMode::Singlet, EntanglementMode::Independent}) {
            std::array<std::int64_t, 2> free{0, 0}, flew{0, 0};
            for (std::uint64_t seed = 30; seed < 40; ++seed) {
                const auto [c, run] = butterfly_trace(butterflies::BackFlight::NextRound, mode, 0.0, seed);
                for (const auto& r : run.records)
                    for (std::size_t j = 0; j < 2; ++j) {
                        if (r.side[j].flew_back) continue;
                        ++free[j];
                        flew[j] += r.side[j].flew;
                    }
            }
            for (std::size_t j = 0; j < 2; ++j) worst = std::max(worst, binomial_z(flew[j], free[j], 0.5));
        }
        d << "max |z| " << worst;
        return worst < 4.0;
    }));
    out.push_back(check("butterflies: identical seed gives identical flight records", [&](std::ostream&) {
        const auto a = butterfly_trace(butterflies::BackFlight::NextRound, EntanglementMode::Singlet, 0.5, 25);
        const auto b = butterfly_trace(butterflies::BackFlight::NextRound, EntanglementMode::Singlet, 0.5, 25);
        const auto& ra = a.second.records;
        const auto& rb = b.second.records;
        if (ra.size() != rb.size()) return false;
        for (std::size_t k = 0; k < ra.size(); ++k)
            for (std::size_t j = 0; j < 2; ++j) {
                const auto &x = ra[k].side[j], &y = rb[k].side[j];
                if (x.direction_index != y.direction_index || x.flew != y.flew || x.accepted != y.accepted ||
                    !(x.position == y.position))
                    return false;
            }
        return true;
    }));

    // theory_oracle
    out.push_back(check("theory: grid doubling stays within the error estimate", [](std::ostream& d) {
        const theory::QuadratureSpec coarse{512}, fine{1024};
        double worst = 0.0;
        for (auto m : {EntanglementMode::Triplet, EntanglementMode::Independent})
            for (double f_min : {0.5, 1.2, 1.8}) {
                const theory::AntForces forces{1.0, 1.0, f_min, 1.0};
                const auto a = theory::expected_displacement(m, forces, 2.0 / 3.0, coarse);
                const auto b = theory::expected_displacement(m, forces, 2.0 / 3.0, fine);
                const double change = std::abs(b.vector.y - a.vector.y);
                worst = std::max(worst, change / a.error_estimate.y);
                if (change > a.error_estimate.y) {
                    d << to_string(m) << " f_min " << f_min << ": change " << change << " > estimate "
                      << a.error_estimate.y;
                    return false;
                }
            }
        d << "max change/estimate " << worst;
        return true;
    }));
    out.push_back(check("theory: lateral displacement vanishes", [](std::ostream& d) {
        double worst = 0.0;
        for (auto m : {EntanglementMode::Triplet, EntanglementMode::Independent})
            for (double f_min : {0.0, 0.95, 1.5})
                for (double z : {0.25, 1.0}) {
                    const auto r = theory::expected_displacement(m, {0.9, 1.1, f_min, 1.0}, z, {512});
                    worst = std::max(worst, std::abs(r.vector.x));
                    if (std::abs(r.vector.x) > r.error_estimate.x + 1e-14) return false;
                }
        d << "max |R_x| " << worst;
        return true;
    }));
    out.push_back(check("theory: entangled ants never push less", [](std::ostream&) {
        for (double f_min : {0.0, 0.5, 0.95, 1.2, 1.8, 1.99})
            for (double z : {0.25, 0.75}) {
                const theory::AntForces forces{0.9, 1.1, f_min, 1.0};
                const auto t = theory::expected_displacement(EntanglementMode::Triplet, forces, z, {512});
                const auto i = theory::expected_displacement(EntanglementMode::Independent, forces, z, {512});
                if (t.vector.y + t.error_estimate.y + 1e-15 < i.vector.y - i.error_estimate.y) return false;
            }
        return true;
    }));

    // experiment_harness
    out.push_back(check("harness: batch statistics are bit-reproducible", [](std::ostream&) {
        ExperimentConfig c;
        c.scenario = "ants";
        c.ants.n_attempts = 200;
        c.threads = 1;
        const auto a = run_batch(c, EntanglementMode::Triplet, 16, 77);
        c.threads = 4;
        const auto b = run_batch(c, EntanglementMode::Triplet, 16, 77);
        return a.stats.mean == b.stats.mean && a.stats.std_dev == b.stats.std_dev &&
               a.stats.min == b.stats.min && a.stats.max == b.stats.max;
    }));
    out.push_back(check("harness: derived seeds are distinct", [](std::ostream&) {
        std::set<std::uint64_t> seen;
        for (std::uint64_t base : {0ULL, 1ULL, 0xFFFFFFFFFFFFFFFFULL})
            for (std::uint64_t i = 0; i < 100000; ++i)
                if (!seen.insert(derive_seed(base, i)).second) return false;
        return true;
    }));
    out.push_back(check("harness: statistics match a long-double reference", [](std::ostream& d) {
        ExperimentConfig c;
        c.scenario = "ants";
        c.ants.n_attempts = 300;
        const auto b = run_batch(c, EntanglementMode::Independent, 25, 5);
        long double sum = 0, ss = 0;
        for (const auto& r : b.runs) sum += r.metric;
        const long double mean = sum / b.runs.size();
        for (const auto& r : b.runs) ss += (r.metric - mean) * (r.metric - mean);
        const double sd = double(std::sqrt(ss / (b.runs.size() - 1)));
        d << "mean " << b.stats.mean << " sd " << b.stats.std_dev;
        return std::abs(b.stats.mean - double(mean)) <= 1e-12 * (1 + std::abs(double(mean))) &&
               std::abs(b.stats.std_dev - sd) <= 1e-12 * (1 + sd) && b.stats.min <= b.stats.mean &&
               b.stats.mean <= b.stats.max;
    }));
    out.push_back(check("harness: CSV and JSON emission round-trip", [](std::ostream&) {
        Table t;
        t.columns = {"name", "x", "n", "flag"};
        Rng rng(26);
        for (int i = 0; i < 200; ++i)
            t.add_row({std::string(i % 3 ? "plain" : "has,comma \"quoted\"\nline"),
                       (rng.uniform() - 0.5) * std::pow(10.0, double(i % 40) - 20.0), std::int64_t(i) - 100,
                       i % 2 == 0});
        const auto records = read_csv(to_csv(t));
        if (records.size() != t.rows.size() + 1 || records[0] != t.columns) return false;
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            const auto& row = t.rows[i];
            if (records[i + 1][0] != std::get<std::string>(row[0])) return false;
            if (parse_double(records[i + 1][1]) != std::get<double>(row[1])) return false;
            if (std::stoll(records[i + 1][2]) != std::get<std::int64_t>(row[2])) return false;
            if ((records[i + 1][3] == "true") != std::get<bool>(row[3])) return false;
        }
        const auto j = nlohmann::json::parse(to_json(t).dump());
        for (std::size_t i = 0; i < t.rows.size(); ++i)
            if (j[i]["x"].get<double>() != std::get<double>(t.rows[i][1])) return false;
        return true;
    }));
    out.push_back(check("harness: config round-trips through the file format", [](std::ostream&) {
        ExperimentConfig c;
        c.scenario = "butterflies";
        c.runs = 40;
        c.seed = 0xDEADBEEFCAFEULL;
        c.ants.z = 2.0 / 3.0;
        c.ants.f_min = 0.1 + 0.2;
        c.butterflies.lambda = 1.0 / 3.0;
        c.butterflies.meet_distance = 4.5;
        c.butterflies.back_flight = butterflies::BackFlight::SameRound;
        c.lambda_list = {0.0, 0.25, 0.1 + 0.2};
        c.f_min_list = {0.5, 1.999};
        c.butterfly_modes = {EntanglementMode::Independent, EntanglementMode::Singlet};
        c.butterflies.mode = EntanglementMode::Independent;
        return parse_config(write_config(c)) == c;
    }));
    return out;
}

}  // namespace qcoop::selftest

#endif  // QCOOP_SELFTEST_HPP_
