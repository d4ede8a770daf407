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

#include "risbeam/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "risbeam/seeds.hpp"

namespace risbeam
{
    std::string to_string(SweepAxis axis)
    {
        switch (axis)
        {
        case SweepAxis::train_size:
            return "train_size";
        case SweepAxis::power:
            return "power";
        case SweepAxis::paths:
            return "paths";
        case SweepAxis::ris_size:
            return "ris_size";
        case SweepAxis::t_s:
            return "t_s";
        }
        return "unknown";
    }

    SweepAxis parse_sweep_axis(const std::string &name)
    {
        for (auto axis : {SweepAxis::train_size, SweepAxis::power, SweepAxis::paths, SweepAxis::ris_size, SweepAxis::t_s})
            if (to_string(axis) == name)
                return axis;
        throw std::invalid_argument("unknown sweep axis '" + name + "'");
    }

    ExperimentConfig::ExperimentConfig()
    {
        scenario.geometry = ArrayGeometry{1, 8, 8, 0.5};
        scenario.num_paths = 1;
        scenario.num_subcarriers = 16;
        scenario.num_taps = 4;
        scenario.trajectory_step = 0.01;
        budget.total_power = 1.0;
        budget.noise_power = 1e4;
        pilot_snr_db = 2.0;
        train.max_epochs = 100;
        train.batch_size = 32;
        train.l2_coefficient = 1e-4;
        train.initial_lr = 0.1;
        train.lr_drop_period_epochs = 25;
        train.lr_drop_factor = 0.5;
        train.momentum = 0.9;
        sync();
    }

    void ExperimentConfig::sync() { budget.num_subcarriers = scenario.num_subcarriers; }

    void ExperimentConfig::validate() const
    {
        scenario.validate();
        budget.validate();
        if (budget.num_subcarriers != scenario.num_subcarriers)
            throw std::invalid_argument("config: budget.num_subcarriers must equal scenario.num_subcarriers");
        if (codebook_size < 1)
            throw std::invalid_argument("config: codebook_size must be >= 1");
        if (m_bar < 1 || m_bar > scenario.geometry.size())
            throw std::invalid_argument("config: m_bar must be in [1, M]");
        if (k_in < 1 || k_in > scenario.num_subcarriers)
            throw std::invalid_argument("config: k_in must be in [1, K]");
        if (t_s < 1)
            throw std::invalid_argument("config: t_s must be >= 1");
        if (trajectory_length < t_s)
            throw std::invalid_argument("config: trajectory_length must be >= t_s");
        if (train_sizes.empty())
            throw std::invalid_argument("config: train_sizes must not be empty");
        for (std::size_t i = 0; i < train_sizes.size(); ++i)
        {
            if (train_sizes[i] < 1)
                throw std::invalid_argument("config: train sizes must be >= 1");
            if (i > 0 && train_sizes[i] <= train_sizes[i - 1])
                throw std::invalid_argument("config: train_sizes must be strictly ascending");
        }
        if (test_size < 1)
            throw std::invalid_argument("config: test_size must be >= 1");
        if (hidden_widths.size() < 2)
            throw std::invalid_argument("config: at least two hidden layers are required");
        if (seeds.empty())
            throw std::invalid_argument("config: seeds must not be empty");
        if (jobs < 1)
            throw std::invalid_argument("config: jobs must be >= 1");
        architecture(t_s).validate();
        train.validate();
        for (const auto &[axis, values] : sweep_values)
        {
            parse_sweep_axis(axis);
            if (values.empty())
                throw std::invalid_argument("config: sweep_values." + axis + " is empty");
        }
    }

    MlpArchitecture ExperimentConfig::architecture(int history_depth) const
    {
        MlpArchitecture arch;
        arch.layer_widths.push_back(history_depth * feature_width());
        arch.layer_widths.insert(arch.layer_widths.end(), hidden_widths.begin(), hidden_widths.end());
        arch.layer_widths.push_back(codebook_size);
        arch.dropout_rate = dropout_rate;
        return arch;
    }

    std::vector<RateVector> label_sequence(const ChannelSequence &sequence, const Codebook &codebook,
                                           const LinkBudget &budget)
    {
        std::vector<RateVector> labels;
        labels.reserve(sequence.size());
        for (const auto &r : sequence.realizations)
            labels.push_back(exhaustive_search(cascade(r), codebook, budget));
        return labels;
    }

    PreparedData prepare_data(const ExperimentConfig &config, int train_size, std::uint64_t seed, int t_s,
                              int history_reserve)
    {
        config.validate();
        if (t_s < 1 || t_s > history_reserve)
            throw std::invalid_argument("prepare_data: need 1 <= t_s <= history_reserve");

        PreparedData data;
        data.codebook = build_dft_codebook(config.scenario.geometry, config.codebook_size);
        data.selection =
            select_active_elements(config.scenario.geometry.size(), config.m_bar, derive_seed(seed, "active"));

        // The largest configured training set fixes the split, so smaller
        // training sets are nested prefixes and the test set never changes.
        const int max_train = std::max(train_size, config.train_sizes.back());
        const int needed = max_train + config.test_size;
        std::vector<ChannelSequence> sequences;
        if (!config.channel_file.empty())
        {
            auto seq = ingest_channels(config.channel_file);
            if (seq.realizations.front().elements() != config.scenario.geometry.size() ||
                seq.realizations.front().subcarriers() != config.scenario.num_subcarriers)
                throw std::invalid_argument("prepare_data: channel file shape does not match the configured M and K");
            sequences.push_back(std::move(seq));
        }
        else
        {
            const int usable = config.trajectory_length - history_reserve + 1;
            if (usable < 1)
                throw std::invalid_argument("prepare_data: trajectory_length shorter than the history window");
            const int count = (needed + usable - 1) / usable;
            for (int i = 0; i < count; ++i)
                sequences.push_back(
                    sample_trajectory(config.scenario, config.trajectory_length, derive_seed(seed, "trajectory", i)));
        }

        std::vector<TrainingSample> pool;
        for (std::size_t tr = 0; tr < sequences.size(); ++tr)
        {
            const auto &seq = sequences[tr];
            std::vector<cmat> cascades;
            std::vector<FeatureVector> features;
            std::vector<RateVector> rates;
            for (const auto &r : seq.realizations)
            {
                cascades.push_back(cascade(r));
                rates.push_back(exhaustive_search(cascades.back(), data.codebook, config.budget));
                const auto observed =
                    config.pilot_snr_db
                        ? estimate_sampled_channel(data.selection, r, *config.pilot_snr_db,
                                                   derive_seed(seed, "pilot-noise", (tr << 32) + features.size()))
                        : sampled_channel(data.selection, r);
                features.push_back(encode_features(observed, config.k_in));
            }
            if (static_cast<int>(seq.size()) < history_reserve)
                throw std::invalid_argument("prepare_data: trajectory shorter than the history window");
            auto samples = build_history_samples(features, rates, t_s);
            for (auto &s : samples)
            {
                if (s.time_index < history_reserve - 1)
                    continue;
                s.trajectory = static_cast<int>(tr);
                pool.push_back(std::move(s));
            }
            data.cascades.push_back(std::move(cascades));
        }

        const int pool_train = std::min<int>(max_train, static_cast<int>(pool.size()) - config.test_size);
        if (pool_train < train_size)
            throw std::invalid_argument("prepare_data: only " + std::to_string(pool.size()) +
                                        " samples available, need " + std::to_string(needed));
        auto [train, test] = split(std::move(pool), SplitSpec{pool_train, config.test_size, derive_seed(seed, "split")});
        train.resize(train_size);
        data.train = std::move(train);
        data.test = std::move(test);
        return data;
    }

    EvaluationMetrics evaluate_model(const MlpModel &model, const PreparedData &data, const LinkBudget &budget,
                                     std::uint64_t seed)
    {
        if (data.test.empty())
            throw std::invalid_argument("evaluate_model: empty test set");
        EvaluationMetrics m;
        Rng rng = make_rng(derive_seed(seed, "random-arm"));
        std::uniform_int_distribution<int> random_beam(0, data.codebook.size() - 1);

        double achieved = 0.0, oracle = 0.0, random = 0.0;
        int hits = 0;
        for (const auto &s : data.test)
        {
            const cmat &c = data.cascades.at(s.trajectory).at(s.time_index);
            const auto choice = predict_beam(model, s.flattened(), data.codebook);
            const double rate = achievable_rate(c, choice.vector, budget);
            if (rate > s.best_rate * (1.0 + 1e-12) + 1e-15)
                throw std::logic_error("evaluate_model: predicted beam exceeds the oracle rate");
            achieved += rate;
            oracle += s.best_rate;
            random += s.rates.at(random_beam(rng));
            hits += choice.index == s.best_index ? 1 : 0;
        }
        const double n = static_cast<double>(data.test.size());
        m.samples = data.test.size();
        m.mean_achieved_rate = achieved / n;
        m.mean_oracle_rate = oracle / n;
        m.ratio = oracle > 0.0 ? achieved / oracle : 1.0;
        m.random_ratio = oracle > 0.0 ? random / oracle : 1.0;
        m.top1_accuracy = hits / n;
        return m;
    }

    namespace
    {
        std::pair<MlpModel, TrainReport> fit(const ExperimentConfig &config, const PreparedData &data, int t_s,
                                             std::uint64_t seed)
        {
            TrainConfig tc = config.train;
            tc.seed = derive_seed(seed, "train");
            auto model = init_model(config.architecture(t_s), derive_seed(seed, "init"));
            return train(std::move(model), to_batch(data.train), to_batch(data.test), tc);
        }
    }

    RunResult run_single(const ExperimentConfig &config, int train_size, std::uint64_t seed)
    {
        config.validate();
        const int reserve = config.t_s;
        const auto data = prepare_data(config, train_size, seed, config.t_s, reserve);

        auto [model, report] = fit(config, data, config.t_s, seed);
        RunResult result{{}, std::move(report), std::move(model)};
        result.row.seed = seed;
        result.row.t_s = config.t_s;
        result.row.train_size = train_size;
        result.row.axis_value = train_size;
        result.row.proposed = evaluate_model(result.model, data, config.budget, seed);

        if (config.control_arms)
        {
            if (config.t_s == 1)
            {
                result.row.baseline = result.row.proposed;
            }
            else
            {
                const auto base_data = prepare_data(config, train_size, seed, 1, reserve);
                const auto [base_model, base_report] = fit(config, base_data, 1, seed);
                result.row.baseline = evaluate_model(base_model, base_data, config.budget, seed);
            }
        }
        return result;
    }

    namespace
    {
        // Runs jobs[i] for every i on `threads` workers; results land by index.
        template <typename Fn>
        void parallel_for(std::size_t count, int threads, Fn fn)
        {
            if (threads <= 1 || count <= 1)
            {
                for (std::size_t i = 0; i < count; ++i)
                    fn(i);
                return;
            }
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> pool;
            for (int t = 0; t < std::min<int>(threads, static_cast<int>(count)); ++t)
                pool.emplace_back([&] {
                    for (std::size_t i = next++; i < count; i = next++)
                        fn(i);
                });
            for (auto &th : pool)
                th.join();
        }
    }

    PipelineReport run_pipeline(const ExperimentConfig &config)
    {
        config.validate();
        struct Task
        {
            int train_size;
            std::uint64_t seed;
        };
        std::vector<Task> tasks;
        for (int size : config.train_sizes)
            for (auto seed : config.seeds)
                tasks.push_back({size, seed});

        PipelineReport out;
        out.rows.resize(tasks.size());
        out.reports.resize(tasks.size());
        parallel_for(tasks.size(), config.jobs, [&](std::size_t i) {
            auto result = run_single(config, tasks[i].train_size, tasks[i].seed);
            out.rows[i] = std::move(result.row);
            out.reports[i] = std::move(result.report);
        });
        return out;
    }

    std::vector<double> sweep_axis_values(const ExperimentConfig &config, SweepAxis axis)
    {
        if (axis == SweepAxis::train_size)
        {
            if (auto it = config.sweep_values.find("train_size"); it != config.sweep_values.end())
                return it->second;
            return std::vector<double>(config.train_sizes.begin(), config.train_sizes.end());
        }
        const auto it = config.sweep_values.find(to_string(axis));
        if (it == config.sweep_values.end() || it->second.empty())
            throw std::invalid_argument("sweep: no values configured for axis " + to_string(axis));
        return it->second;
    }

    ExperimentConfig apply_axis_value(ExperimentConfig config, SweepAxis axis, double value)
    {
        auto as_int = [&](const char *what) {
            const double r = std::round(value);
            if (std::abs(r - value) > 1e-9 || r < 1)
                throw std::invalid_argument(std::string("sweep: ") + what + " values must be positive integers");
            return static_cast<int>(r);
        };
        switch (axis)
        {
        case SweepAxis::train_size:
        {
            const int n = as_int("train_size");
            if (std::find(config.train_sizes.begin(), config.train_sizes.end(), n) == config.train_sizes.end())
            {
                config.train_sizes.push_back(n);
                std::sort(config.train_sizes.begin(), config.train_sizes.end());
            }
            break;
        }
        case SweepAxis::power:
            config.budget.total_power = value;
            break;
        case SweepAxis::paths:
            config.scenario.num_paths = as_int("paths");
            break;
        case SweepAxis::ris_size:
        {
            const int side = as_int("ris_size");
            config.scenario.geometry.my = side;
            config.scenario.geometry.mz = side;
            config.scenario.geometry.mx = 1;
            break;
        }
        case SweepAxis::t_s:
            config.t_s = as_int("t_s");
            config.trajectory_length = std::max(config.trajectory_length, config.t_s);
            break;
        }
        return config;
    }

    std::vector<EvaluationRow> sweep(const ExperimentConfig &config, SweepAxis axis)
    {
        config.validate();
        const auto values = sweep_axis_values(config, axis);
        ExperimentConfig base = config;
        if (axis == SweepAxis::train_size)
            for (double v : values)
                base = apply_axis_value(std::move(base), axis, v);

        struct Task
        {
            double value;
            std::uint64_t seed;
        };
        std::vector<Task> tasks;
        for (double v : values)
            for (auto seed : config.seeds)
                tasks.push_back({v, seed});

        std::vector<EvaluationRow> rows(tasks.size());
        parallel_for(tasks.size(), config.jobs, [&](std::size_t i) {
            EvaluationRow &row = rows[i];
            row.axis = axis;
            row.axis_value = tasks[i].value;
            row.seed = tasks[i].seed;
            try
            {
                const auto cfg = apply_axis_value(base, axis, tasks[i].value);
                const int train_size =
                    axis == SweepAxis::train_size ? static_cast<int>(std::lround(tasks[i].value)) : cfg.train_sizes.back();
                auto result = run_single(cfg, train_size, tasks[i].seed);
                result.row.axis = axis;
                result.row.axis_value = tasks[i].value;
                row = std::move(result.row);
            }
            catch (const std::exception &e)
            {
                row.ok = false;
                row.error = e.what();
            }
        });
        return rows;
    }

    namespace
    {
        std::string fmt_double(double v)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }

        std::string csv_escape(std::string s)
        {
            for (auto &c : s)
                if (c == ',' || c == '\n' || c == '"')
                    c = ';';
            return s;
        }
    }

    std::string rate_rows_csv(const std::vector<EvaluationRow> &rows)
    {
        std::ostringstream out;
        out << "axis,axis_value,seed,t_s,train_size,mean_achieved_rate,mean_oracle_rate,ratio,top1_accuracy,"
               "random_ratio,baseline_achieved_rate,baseline_ratio,baseline_top1_accuracy,status\n";
        for (const auto &r : rows)
        {
            out << to_string(r.axis) << ',' << fmt_double(r.axis_value) << ',' << r.seed << ',' << r.t_s << ','
                << r.train_size << ',';
            if (r.ok)
            {
                out << fmt_double(r.proposed.mean_achieved_rate) << ',' << fmt_double(r.proposed.mean_oracle_rate)
                    << ',' << fmt_double(r.proposed.ratio) << ',' << fmt_double(r.proposed.top1_accuracy) << ','
                    << fmt_double(r.proposed.random_ratio) << ',';
                if (r.baseline)
                    out << fmt_double(r.baseline->mean_achieved_rate) << ',' << fmt_double(r.baseline->ratio) << ','
                        << fmt_double(r.baseline->top1_accuracy) << ',';
                else
                    out << ",,,";
                out << "ok\n";
            }
            else
            {
                out << ",,,,,,,,error: " << csv_escape(r.error) << '\n';
            }
        }
        return out.str();
    }

    namespace
    {
        void write_text(const std::filesystem::path &path, const std::string &text)
        {
            if (path.has_parent_path())
                std::filesystem::create_directories(path.parent_path());
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out)
                throw std::runtime_error("cannot open " + path.string() + " for writing");
            out << text;
            if (!out)
                throw std::runtime_error("write failed: " + path.string());
        }
    }

    void write_rate_csv(const std::vector<EvaluationRow> &rows, const std::filesystem::path &path)
    {
        write_text(path, rate_rows_csv(rows));
    }

    CorrelationResult measure_temporal_correlation(const ChannelSequence &sequence, const Codebook &codebook,
                                                   const LinkBudget &budget, int lag)
    {
        if (lag < 1)
            throw std::invalid_argument("measure_temporal_correlation: lag must be >= 1");
        if (static_cast<int>(sequence.size()) <= lag)
            throw std::invalid_argument("measure_temporal_correlation: sequence length " +
                                        std::to_string(sequence.size()) + " must exceed lag " + std::to_string(lag));

        const auto labels = label_sequence(sequence, codebook, budget);
        CorrelationResult out;
        double total = 0.0;
        int pairs = 0;
        for (std::size_t s = lag; s < labels.size(); ++s)
        {
            const auto &a = labels[s].rates;
            const auto &b = labels[s - lag].rates;
            const Eigen::Map<const rvec> x(a.data(), static_cast<Eigen::Index>(a.size()));
            const Eigen::Map<const rvec> y(b.data(), static_cast<Eigen::Index>(b.size()));
            const rvec dx = x.array() - x.mean();
            const rvec dy = y.array() - y.mean();
            const double vx = dx.squaredNorm();
            const double vy = dy.squaredNorm();
            double r = 1.0;
            if (vx <= 0.0 || vy <= 0.0)
                out.degenerate = true;
            else
                r = std::clamp(dx.dot(dy) / std::sqrt(vx * vy), -1.0, 1.0);
            total += r;
            ++pairs;
        }
        out.value = total / pairs;
        return out;
    }

    std::string loss_curves_csv(const TrainReport &report)
    {
        if (report.epochs() == 0)
            throw std::invalid_argument("emit_loss_curves: report has no epochs");
        std::ostringstream out;
        out << "epoch,lr,train_loss,test_loss\n";
        for (std::size_t e = 0; e < report.epochs(); ++e)
            out << e << ',' << fmt_double(report.learning_rate[e]) << ',' << fmt_double(report.train_loss[e]) << ','
                << fmt_double(report.test_loss[e]) << '\n';
        return out.str();
    }

    void emit_loss_curves(const TrainReport &report, const std::filesystem::path &path)
    {
        write_text(path, loss_curves_csv(report));
    }

    std::vector<LossCurveRow> parse_loss_curves(const std::string &csv)
    {
        std::istringstream in(csv);
        std::string line;
        if (!std::getline(in, line) || line != "epoch,lr,train_loss,test_loss")
            throw std::invalid_argument("parse_loss_curves: unexpected header");
        std::vector<LossCurveRow> rows;
        while (std::getline(in, line))
        {
            if (line.empty())
                continue;
            LossCurveRow row;
            std::istringstream fields(line);
            std::string f;
            std::getline(fields, f, ',');
            row.epoch = std::stoi(f);
            std::getline(fields, f, ',');
            row.lr = std::strtod(f.c_str(), nullptr);
            std::getline(fields, f, ',');
            row.train_loss = std::strtod(f.c_str(), nullptr);
            std::getline(fields, f, ',');
            row.test_loss = std::strtod(f.c_str(), nullptr);
            rows.push_back(row);
        }
        return rows;
    }

    void write_labels_csv(const std::vector<RateVector> &labels, const std::filesystem::path &path)
    {
        std::ostringstream out;
        out << "time_index,best_index,best_rate";
        const std::size_t P = labels.empty() ? 0 : labels.front().rates.size();
        for (std::size_t n = 0; n < P; ++n)
            out << ",r" << n;
        out << '\n';
        for (std::size_t s = 0; s < labels.size(); ++s)
        {
            out << s << ',' << labels[s].best_index << ',' << fmt_double(labels[s].best_rate);
            for (double r : labels[s].rates)
                out << ',' << fmt_double(r);
            out << '\n';
        }
        write_text(path, out.str());
    }

    void write_manifest(const ExperimentConfig &config, const std::string &command, const std::filesystem::path &path)
    {
        std::ostringstream out;
        out << "command: " << command << '\n';
        out << "master_seeds:";
        for (auto s : config.seeds)
            out << ' ' << s;
        out << '\n';
        out << "config:\n" << config_to_json(config) << '\n';
        write_text(path, out.str());
    }
}
