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

// qcoop: command-line driver for the ant and butterfly experiments.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcoop/config.hpp"
#include "qcoop/harness.hpp"
#include "qcoop/selftest.hpp"
#include "qcoop/table.hpp"
#include "qcoop/theory.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> runs;
    std::optional<unsigned> threads;
    std::string out = "-";
    std::string format = "csv";
    std::vector<std::string> overrides;
    std::string trace;
    std::string stats_out;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config_path, "INI experiment file");
    cmd->add_option("--seed", o.seed, "base seed (overrides experiment.seed)");
    cmd->add_option("--runs", o.runs, "runs per mode (overrides experiment.runs)");
    cmd->add_option("--threads", o.threads, "worker threads, 0 = all cores");
    cmd->add_option("--out", o.out, "output file, '-' for stdout")->capture_default_str();
    cmd->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--set", o.overrides, "override a config value, section.key=value");
}

qcoop::ExperimentConfig load(const CommonOptions& o, const std::string& scenario) {
    auto overrides = o.overrides;
    overrides.insert(overrides.begin(), "experiment.scenario=" + scenario);
    qcoop::ExperimentConfig c =
        o.config_path.empty() ? qcoop::parse_config("", overrides) : qcoop::load_config(o.config_path, overrides);
    if (o.seed) c.seed = *o.seed;
    if (o.runs) {
        if (*o.runs < 1) throw qcoop::ConfigError("--runs must be at least 1");
        c.runs = *o.runs;
    }
    if (o.threads) c.threads = *o.threads;
    return c;
}

void report(const std::string& label, const qcoop::BatchResult& b) {
    std::cerr << label << ": n=" << b.stats.n_runs << " mean=" << b.stats.mean << " std_dev=" << b.stats.std_dev
              << " min=" << b.stats.min << " max=" << b.stats.max;
    if (b.non_converged) std::cerr << " non_converged=" << b.non_converged;
    std::cerr << '\n';
}

int run_scenario(const CommonOptions& o, const std::string& scenario) {
    const auto c = load(o, scenario);
    const auto format = qcoop::parse_format(o.format);
    const auto& modes = scenario == "ants" ? c.ant_modes : c.butterfly_modes;

    std::vector<qcoop::RunSummary> all;
    std::vector<std::pair<qcoop::EntanglementMode, qcoop::BatchResult>> batches;
    for (auto mode : modes) {
        auto b = qcoop::run_batch(c, mode, c.runs, c.seed);
        report(std::string(qcoop::to_string(mode)), b);
        all.insert(all.end(), b.runs.begin(), b.runs.end());
        batches.emplace_back(mode, std::move(b));
    }
    qcoop::emit_results(qcoop::summaries_table(all), format, o.out);
    if (!o.stats_out.empty()) qcoop::emit_results(qcoop::statistics_table(batches), format, o.stats_out);

    if (!o.trace.empty()) {
        // Trace of the first run of the first mode.
        if (scenario == "ants") {
            auto a = c.ants;
            a.mode = modes.front();
            a.seed = qcoop::derive_seed(c.seed, 0);
            qcoop::emit_results(qcoop::ant_trace_table(qcoop::ants::run_ants(a, true).records), format, o.trace);
        } else {
            auto b = c.butterflies;
            b.mode = modes.front();
            b.seed = qcoop::derive_seed(c.seed, 0);
            qcoop::emit_results(qcoop::butterfly_trace_table(qcoop::butterflies::run_butterflies(b, true).records),
                                format, o.trace);
        }
    }
    return 0;
}

int run_ants_theory(const CommonOptions& o) {
    const auto c = load(o, "ants");
    qcoop::Table t;
    t.columns = {"mode", "strength_1", "strength_2", "f_min", "z", "g", "n_attempts", "r_x",
                 "r_y", "err_x", "err_y", "endpoint_x", "endpoint_y"};
    for (auto mode : c.ant_modes) {
        auto a = c.ants;
        a.mode = mode;
        const auto r = qcoop::theory::expected_displacement(a, c.quadrature);
        const double n = double(a.n_attempts);
        t.add_row({std::string(qcoop::to_string(mode)), a.strength_1, a.strength_2, a.f_min, a.z, a.g,
                   a.n_attempts, r.vector.x, r.vector.y, r.error_estimate.x, r.error_estimate.y, n * r.vector.x,
                   n * r.vector.y});
    }
    qcoop::emit_results(t, qcoop::parse_format(o.format), o.out);
    return 0;
}

int run_sweep_fmin(const CommonOptions& o) {
    const auto c = load(o, "ants");
    std::vector<double> f_min = c.f_min_list;
    if (f_min.empty())
        for (int i = 0; i < 40; ++i) f_min.push_back(0.05 * i);
    const auto points =
        qcoop::theory::sweep_gain_curve(c.ants.strength_1, c.ants.strength_2, f_min, c.ants.z, c.quadrature);
    qcoop::emit_results(qcoop::gain_table(points), qcoop::parse_format(o.format), o.out);
    return 0;
}

int run_sweep_lambda(const CommonOptions& o) {
    const auto c = load(o, "butterflies");
    std::vector<double> lambdas = c.lambda_list;
    if (lambdas.empty()) lambdas = {0.0, 0.25, 0.5, 0.75, 1.0};
    const auto rows = qcoop::lambda_sweep(c, lambdas, c.runs, c.seed);
    for (const auto& r : rows)
        std::cerr << "lambda=" << r.lambda << ' ' << qcoop::to_string(r.mode) << ": mean=" << r.stats.mean
                  << " std_dev=" << r.stats.std_dev << '\n';
    qcoop::emit_results(qcoop::lambda_table(rows), qcoop::parse_format(o.format), o.out);
    return 0;
}

int run_selftest() {
    int failed = 0;
    for (const auto& r : qcoop::selftest::run_all()) {
        std::cout << (r.passed ? "PASS  " : "FAIL  ") << r.name;
        if (!r.detail.empty()) std::cout << "  (" << r.detail << ')';
        std::cout << '\n';
        failed += r.passed ? 0 : 1;
    }
    std::cout << (failed ? std::to_string(failed) + " check(s) failed" : std::string("all checks passed")) << '\n';
    return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entangled-decision cooperation experiments: ants pushing a pebble, butterflies finding each other"};
    app.require_subcommand(1);

    CommonOptions opts;
    auto* ants_cmd = app.add_subcommand("ants", "Monte Carlo batches of the pebble-pushing ants");
    auto* theory_cmd = app.add_subcommand("ants-theory", "expected pebble displacement by quadrature");
    auto* bf_cmd = app.add_subcommand("butterflies", "Monte Carlo batches of the butterfly search");
    auto* fmin_cmd = app.add_subcommand("sweep-fmin", "gain ratio against pebble threshold");
    auto* lambda_cmd = app.add_subcommand("sweep-lambda", "butterfly flight counts against learning factor");
    auto* self_cmd = app.add_subcommand("selftest", "run the statistical property suite");
    for (auto* cmd : {ants_cmd, theory_cmd, bf_cmd, fmin_cmd, lambda_cmd}) add_common(cmd, opts);
    for (auto* cmd : {ants_cmd, bf_cmd}) {
        cmd->add_option("--trace", opts.trace, "write the per-step trace of the first run here");
        cmd->add_option("--stats-out", opts.stats_out, "write per-mode batch statistics here");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ants_cmd) return run_scenario(opts, "ants");
        if (*bf_cmd) return run_scenario(opts, "butterflies");
        if (*theory_cmd) return run_ants_theory(opts);
        if (*fmin_cmd) return run_sweep_fmin(opts);
        if (*lambda_cmd) return run_sweep_lambda(opts);
        if (*self_cmd) return run_selftest();
    } catch (const qcoop::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
