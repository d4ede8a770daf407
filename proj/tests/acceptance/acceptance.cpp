// SPDX-License-Identifier: Apache-2.0
//
// risbeam - RIS beam selection from previously sampled channels
// Copyright (C) 2026 The risbeam authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oracles.hpp"
#include "risbeam/harness.hpp"

using namespace risbeam;
namespace fs = std::filesystem;

namespace
{
    struct Outcome
    {
        bool pass = false;
        std::string detail;
    };

    using Clock = std::chrono::steady_clock;

    double seconds_since(Clock::time_point t0)
    {
        return std::chrono::duration<double>(Clock::now() - t0).count();
    }

    std::string fmt(const char *f, double v)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, f, v);
        return buf;
    }

    std::string slurp(const fs::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    Codebook random_codebook(int M, int P, std::mt19937_64 &rng)
    {
        Codebook cb;
        cb.vectors.resize(M, P);
        for (int n = 0; n < P; ++n)
            cb.vectors.col(n) = oracle::random_phases(M, rng);
        return cb;
    }

    // Desk-scale history-benefit setup, 5 master seeds
    ExperimentConfig history_config(int jobs)
    {
        ExperimentConfig c;
        c.t_s = 3;
        c.train_sizes = {400};
        c.test_size = 200;
        c.seeds = {0, 1, 2, 3, 4};
        c.control_arms = true;
        c.jobs = jobs;
        return c;
    }

    Outcome received_signal_identity()
    {
        std::mt19937_64 rng(2024);
        std::uniform_int_distribution<int> Md(1, 16), Kd(1, 8);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i)
        {
            const int M = Md(rng), K = Kd(rng);
            ChannelRealization r{oracle::random_cmat(M, K, rng), oracle::random_cmat(M, K, rng)};
            const cvec psi = oracle::random_phases(M, rng);
            const cvec s = oracle::random_cmat(K, 1, rng);
            const cvec n = oracle::random_cmat(K, 1, rng);
            const cvec ref = oracle::cascade_form(r, psi, s, n);
            worst = std::max(worst, (received_signal(r, psi, s, n) - ref).norm() / ref.norm());
        }
        return {worst < 1e-12, "max rel err " + fmt("%.3g", worst)};
    }

    Outcome channel_oracle()
    {
        std::mt19937_64 rng(7);
        std::uniform_int_distribution<int> dim(1, 4), taps(1, 6), sub(1, 16), paths(1, 5);
        std::uniform_real_distribution<double> ang(0.0, 2.0 * pi), frac(0.0, 0.999);
        std::normal_distribution<double> g(0.0, 1.0);
        double worst_sum = 0.0;
        for (int i = 0; i < 20; ++i)
        {
            ScenarioConfig c;
            c.geometry = {dim(rng), dim(rng), dim(rng), 0.5};
            c.num_taps = taps(rng);
            c.path_loss = 0.25 + i;
            std::vector<RayPath> rays(paths(rng));
            for (auto &ray : rays)
            {
                ray.azimuth = ang(rng);
                ray.elevation = ang(rng);
                const double re = g(rng);
                ray.gain = cplx(re, g(rng));
                ray.delay = frac(rng) * c.num_taps * c.sample_period;
            }
            const int K = sub(rng);
            worst_sum = std::max(worst_sum,
                                 oracle::max_relative_error(generate_channel(c, rays, K), oracle::direct_channel(c, rays, K)));
        }

        double worst_dft = 0.0;
        for (int i = 0; i < 20; ++i)
        {
            ScenarioConfig c;
            c.geometry = {dim(rng), dim(rng), 1, 0.5};
            c.num_taps = taps(rng);
            c.pulse = Pulse::delta;
            const int M = c.geometry.size();
            std::vector<RayPath> rays(paths(rng));
            std::vector<std::vector<cplx>> tap_seq(c.num_taps, std::vector<cplx>(M, cplx(0.0, 0.0)));
            for (auto &ray : rays)
            {
                ray.azimuth = ang(rng);
                ray.elevation = ang(rng);
                const double re = g(rng);
                ray.gain = cplx(re, g(rng));
                const int d = static_cast<int>(rng() % c.num_taps);
                ray.delay = d * c.sample_period;
                const cvec a = array_response(c.geometry, ray.azimuth, ray.elevation);
                for (int m = 0; m < M; ++m)
                    tap_seq[d][m] += std::sqrt(static_cast<double>(M)) * ray.gain * a(m);
            }
            const int K = sub(rng);
            worst_dft = std::max(worst_dft,
                                 oracle::max_relative_error(generate_channel(c, rays, K), oracle::dft_of_taps(tap_seq, K)));
        }
        return {worst_sum < 1e-12 && worst_dft < 1e-10,
                "direct-sum err " + fmt("%.3g", worst_sum) + ", DFT-of-taps err " + fmt("%.3g", worst_dft)};
    }

    Outcome search_oracle()
    {
        std::mt19937_64 rng(11);
        std::uniform_int_distribution<int> Md(1, 16), Pd(1, 64), Kd(1, 8);
        int index_mismatch = 0;
        double worst = 0.0;
        for (int i = 0; i < 50; ++i)
        {
            const int M = Md(rng), P = Pd(rng), K = Kd(rng);
            const cmat c = oracle::random_cmat(M, K, rng);
            const auto cb = random_codebook(M, P, rng);
            const LinkBudget b{0.5 + i, 1.0, K};
            const auto lib = exhaustive_search(c, cb, b);
            const auto ref = oracle::brute_force_search(c, cb.vectors, b.snr());
            index_mismatch += lib.best_index != ref.best_index;
            for (std::size_t n = 0; n < ref.rates.size(); ++n)
                worst = std::max(worst, std::abs(lib.rates[n] - ref.rates[n]) / std::max(1.0, ref.rates[n]));
        }
        return {index_mismatch == 0 && worst < 1e-12,
                std::to_string(index_mismatch) + " index mismatches, max rate err " + fmt("%.3g", worst)};
    }

    Outcome gradient_check()
    {
        std::mt19937_64 rng(5);
        std::normal_distribution<double> g(0.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i)
        {
            auto model = init_model({{6, 5, 4, 3}, 0.0}, 100 + i);
            for (auto &layer : model.layers)
                for (Eigen::Index r = 0; r < layer.bias.size(); ++r)
                    layer.bias(r) = 0.1 * g(rng);
            rvec x(6), t(3);
            for (auto &v : x)
                v = g(rng);
            for (auto &v : t)
                v = g(rng);
            Gradients grads = Gradients::zeros_like(model);
            loss_gradient(model, x, t, 1e-3, {}, grads);
            worst = std::max(worst, oracle::gradient_check(model, x, t, 1e-3, grads));
        }
        return {worst < 1e-4, "max rel err " + fmt("%.3g", worst)};
    }

    struct HistoryRun
    {
        PipelineReport report;
        fs::path csv;
    };

    HistoryRun run_history(const ExperimentConfig &config, const fs::path &csv)
    {
        HistoryRun out;
        out.report = run_pipeline(config);
        write_rate_csv(out.report.rows, csv);
        for (std::size_t i = 0; i < out.report.reports.size(); ++i)
            emit_loss_curves(out.report.reports[i],
                             csv.parent_path() / ("loss_seed" + std::to_string(out.report.rows[i].seed) + ".csv"));
        out.csv = csv;
        return out;
    }

    Outcome history_benefit(const HistoryRun &run)
    {
        double with = 0.0, without = 0.0;
        int wins = 0;
        std::ostringstream per_seed;
        for (const auto &row : run.report.rows)
        {
            if (!row.ok || !row.baseline)
                return {false, "run failed: " + row.error};
            with += row.proposed.ratio;
            without += row.baseline->ratio;
            wins += row.proposed.ratio > row.baseline->ratio;
            per_seed << ' ' << fmt("%+.3f", row.proposed.ratio - row.baseline->ratio);
        }
        const double n = static_cast<double>(run.report.rows.size());
        with /= n;
        without /= n;
        const bool pass = with > without && wins >= 4;
        return {pass, "ratio t_s=3 " + fmt("%.4f", with) + " vs t_s=1 " + fmt("%.4f", without) + ", wins " +
                          std::to_string(wins) + "/" + std::to_string(static_cast<int>(n)) + ", paired diffs" +
                          per_seed.str()};
    }

    Outcome training_size_trend(int jobs, const fs::path &dir)
    {
        auto c = history_config(jobs);
        c.control_arms = false;
        c.train_sizes = {50, 100, 200, 400};
        const auto report = run_pipeline(c);
        write_rate_csv(report.rows, dir / "train_size_trend.csv");

        std::vector<double> mean(c.train_sizes.size(), 0.0);
        for (const auto &row : report.rows)
        {
            if (!row.ok)
                return {false, "run failed: " + row.error};
            for (std::size_t i = 0; i < c.train_sizes.size(); ++i)
                if (row.train_size == c.train_sizes[i])
                    mean[i] += row.proposed.ratio / static_cast<double>(c.seeds.size());
        }
        bool monotone = true;
        std::string curve;
        for (std::size_t i = 0; i < mean.size(); ++i)
        {
            curve += (i ? " " : "") + std::to_string(c.train_sizes[i]) + ":" + fmt("%.4f", mean[i]);
            if (i > 0 && mean[i] < mean[i - 1] - 0.02)
                monotone = false;
        }
        return {monotone, "mean ratio " + curve};
    }

    Outcome loss_convergence(const HistoryRun &run)
    {
        bool pass = true;
        std::ostringstream d;
        for (std::size_t i = 0; i < run.report.reports.size(); ++i)
        {
            const auto &r = run.report.reports[i];
            const double tr0 = r.train_loss.front(), tr = r.train_loss.back();
            const double te0 = r.test_loss.front(), te = r.test_loss.back();
            const bool ok = te <= 1.5 * tr && tr <= 0.5 * tr0 && te <= 0.5 * te0;
            pass = pass && ok;
            d << (i ? "; " : "") << "seed " << run.report.rows[i].seed << " test/train " << fmt("%.2f", te / tr)
              << " drops " << fmt("%.0f%%", 100.0 * (1.0 - tr / tr0)) << "/" << fmt("%.0f%%", 100.0 * (1.0 - te / te0));
        }
        return {pass, d.str()};
    }

    Outcome correlation_phenomenon()
    {
        const ExperimentConfig base;
        const auto codebook = build_dft_codebook(base.scenario.geometry, base.codebook_size);
        bool pass = true;
        double small_sum = 0.0, large_sum = 0.0;
        for (std::uint64_t seed = 0; seed < 5; ++seed)
        {
            ScenarioConfig s = base.scenario;
            s.trajectory_step = 0.005;
            const double small = measure_temporal_correlation(sample_trajectory(s, 100, seed), codebook, base.budget, 1).value;
            s.trajectory_step = 0.5;
            const double large = measure_temporal_correlation(sample_trajectory(s, 100, seed), codebook, base.budget, 1).value;
            pass = pass && small > 0.9 && large < small;
            small_sum += small;
            large_sum += large;
        }
        return {pass, "lag-1 correlation step 0.005: " + fmt("%.4f", small_sum / 5.0) +
                                         ", step 0.5: " + fmt("%.4f", large_sum / 5.0) + " (mean of 5 seeds)"};
    }

    Outcome determinism(const HistoryRun &first, int jobs, const fs::path &dir)
    {
        fs::create_directories(dir / "rerun");
        const auto second = run_history(history_config(jobs), dir / "rerun" / "history_benefit.csv");
        const bool rates_same = slurp(first.csv) == slurp(second.csv);
        bool losses_same = true;
        for (const auto &row : first.report.rows)
        {
            const std::string name = "loss_seed" + std::to_string(row.seed) + ".csv";
            losses_same = losses_same && slurp(dir / name) == slurp(dir / "rerun" / name);
        }
        return {rates_same && losses_same, std::string("rate CSV ") + (rates_same ? "identical" : "differs") +
                                               ", loss CSVs " + (losses_same ? "identical" : "differ")};
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"risbeam acceptance checks"};
    fs::path out = "acceptance_out";
    int jobs = 1;
    app.add_option("--out", out, "Directory for CSV outputs");
    app.add_option("--jobs", jobs, "Concurrent runs in the statistical checks")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);
    fs::create_directories(out);

    int failures = 0;
    auto report = [&](int id, const std::string &name, double budget_s, const std::function<Outcome()> &fn) {
        const auto t0 = Clock::now();
        Outcome o;
        try
        {
            o = fn();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = seconds_since(t0);
        if (budget_s > 0.0 && secs >= budget_s)
        {
            o.pass = false;
            o.detail += " [over time budget " + fmt("%.0f", budget_s) + " s]";
        }
        failures += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << id << "] " << name << ": " << o.detail << " ("
                  << fmt("%.2f", secs) << " s)" << std::endl;
    };

    report(1, "received-signal identity", 1.0, received_signal_identity);
    report(2, "channel oracle", 5.0, channel_oracle);
    report(3, "exhaustive-search oracle", 10.0, search_oracle);
    report(4, "gradient check", 10.0, gradient_check);

    // Criteria 5, 7 and 9 share one history-benefit run
    HistoryRun history;
    std::string history_error = "not run";
    auto needs_history = [&](const std::function<Outcome()> &fn) {
        return [&, fn]() -> Outcome {
            if (!history_error.empty())
                return {false, "history run failed: " + history_error};
            return fn();
        };
    };

    std::cerr << "running history-benefit experiment (5 seeds, both arms)..." << std::endl;
    report(5, "history benefit", 600.0, [&] {
        history = run_history(history_config(jobs), out / "history_benefit.csv");
        history_error.clear();
        return history_benefit(history);
    });
    std::cerr << "running training-size trend (4 sizes x 5 seeds)..." << std::endl;
    report(6, "training-size trend", 1200.0, [&] { return training_size_trend(jobs, out); });
    report(7, "loss convergence", 0.0, needs_history([&] { return loss_convergence(history); }));
    report(8, "temporal correlation", 60.0, correlation_phenomenon);
    std::cerr << "re-running the history-benefit configuration..." << std::endl;
    report(9, "determinism", 0.0, needs_history([&] { return determinism(history, jobs, out); }));

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
