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

// risbeam command line: generate, label, train, evaluate, sweep, correlate.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "risbeam/harness.hpp"
#include "risbeam/seeds.hpp"

using namespace risbeam;
namespace fs = std::filesystem;

namespace
{
    // Every flag is optional; set flags override the config file.
    struct Overrides
    {
        std::string config_path;
        std::optional<std::vector<int>> ris_dims;
        std::optional<int> paths, subcarriers, taps;
        std::optional<double> trajectory_step, power, noise, pilot_snr_db;
        bool exact_pilots = false;
        std::optional<int> codebook_size, m_bar, k_in, t_s, trajectory_length, test_size;
        std::optional<std::vector<int>> train_sizes, hidden;
        std::optional<double> dropout, lr, l2;
        std::optional<int> epochs, batch_size;
        std::optional<std::vector<std::uint64_t>> seeds;
        std::optional<std::string> output_dir, channel_file;
        std::optional<int> jobs;
        bool no_control_arms = false;
    };

    void add_config_flags(CLI::App &cmd, Overrides &o)
    {
        cmd.add_option("-c,--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
        cmd.add_option("--ris-dims", o.ris_dims, "RIS element counts Mx My Mz")->expected(3);
        cmd.add_option("--paths", o.paths, "Rays per link (L)");
        cmd.add_option("--subcarriers", o.subcarriers, "Subcarriers (K)");
        cmd.add_option("--taps", o.taps, "Channel taps (D)");
        cmd.add_option("--trajectory-step", o.trajectory_step, "Per-sample drift scale");
        cmd.add_option("--trajectory-length", o.trajectory_length, "Samples per trajectory");
        cmd.add_option("--power", o.power, "Total transmit power P_T (linear)");
        cmd.add_option("--noise", o.noise, "Noise power (linear)");
        cmd.add_option("--pilot-snr-db", o.pilot_snr_db, "Pilot SNR of the sampled-channel estimate");
        cmd.add_flag("--exact-pilots", o.exact_pilots, "Observe the sampled channel without estimation noise");
        cmd.add_option("--codebook-size", o.codebook_size, "Number of DFT beams");
        cmd.add_option("--m-bar", o.m_bar, "Active RIS elements");
        cmd.add_option("--k-in", o.k_in, "Subcarriers fed to the network");
        cmd.add_option("--t-s", o.t_s, "History depth");
        cmd.add_option("--train-sizes", o.train_sizes, "Training set sizes (ascending)");
        cmd.add_option("--test-size", o.test_size, "Test set size");
        cmd.add_option("--hidden", o.hidden, "Hidden layer widths");
        cmd.add_option("--dropout", o.dropout, "Dropout rate");
        cmd.add_option("--epochs", o.epochs, "Training epochs");
        cmd.add_option("--batch-size", o.batch_size, "Mini-batch size");
        cmd.add_option("--lr", o.lr, "Initial learning rate");
        cmd.add_option("--l2", o.l2, "L2 coefficient");
        cmd.add_option("--seeds", o.seeds, "Master seeds");
        cmd.add_option("-o,--output-dir", o.output_dir, "Output directory");
        cmd.add_option("--channel-file", o.channel_file, "Ingest channels from this file instead of generating");
        cmd.add_option("-j,--jobs", o.jobs, "Concurrent runs");
        cmd.add_flag("--no-control-arms", o.no_control_arms, "Skip the t_s = 1 baseline arm");
    }

    ExperimentConfig resolve(const Overrides &o)
    {
        ExperimentConfig c = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
        if (o.ris_dims)
            c.scenario.geometry = {(*o.ris_dims)[0], (*o.ris_dims)[1], (*o.ris_dims)[2], c.scenario.geometry.spacing};
        if (o.paths)
            c.scenario.num_paths = *o.paths;
        if (o.subcarriers)
            c.scenario.num_subcarriers = *o.subcarriers;
        if (o.taps)
            c.scenario.num_taps = *o.taps;
        if (o.trajectory_step)
            c.scenario.trajectory_step = *o.trajectory_step;
        if (o.trajectory_length)
            c.trajectory_length = *o.trajectory_length;
        if (o.power)
            c.budget.total_power = *o.power;
        if (o.noise)
            c.budget.noise_power = *o.noise;
        if (o.pilot_snr_db)
            c.pilot_snr_db = *o.pilot_snr_db;
        if (o.exact_pilots)
            c.pilot_snr_db.reset();
        if (o.codebook_size)
            c.codebook_size = *o.codebook_size;
        if (o.m_bar)
            c.m_bar = *o.m_bar;
        if (o.k_in)
            c.k_in = *o.k_in;
        if (o.t_s)
            c.t_s = *o.t_s;
        if (o.train_sizes)
            c.train_sizes = *o.train_sizes;
        if (o.test_size)
            c.test_size = *o.test_size;
        if (o.hidden)
            c.hidden_widths = *o.hidden;
        if (o.dropout)
            c.dropout_rate = *o.dropout;
        if (o.epochs)
            c.train.max_epochs = *o.epochs;
        if (o.batch_size)
            c.train.batch_size = *o.batch_size;
        if (o.lr)
            c.train.initial_lr = *o.lr;
        if (o.l2)
            c.train.l2_coefficient = *o.l2;
        if (o.seeds)
            c.seeds = *o.seeds;
        if (o.output_dir)
            c.output_dir = *o.output_dir;
        if (o.channel_file)
            c.channel_file = *o.channel_file;
        if (o.jobs)
            c.jobs = *o.jobs;
        if (o.no_control_arms)
            c.control_arms = false;
        c.sync();
        c.validate();
        return c;
    }

    std::string command_line(int argc, char **argv)
    {
        std::string s;
        for (int i = 0; i < argc; ++i)
            s += (i ? " " : "") + std::string(argv[i]);
        return s;
    }

    fs::path out_path(const ExperimentConfig &c, const std::string &name)
    {
        fs::create_directories(c.output_dir);
        return fs::path(c.output_dir) / name;
    }

    ChannelSequence channels_for(const ExperimentConfig &c, std::uint64_t seed)
    {
        if (!c.channel_file.empty())
            return ingest_channels(c.channel_file);
        return sample_trajectory(c.scenario, c.trajectory_length, derive_seed(seed, "trajectory", 0));
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"RIS beam selection from previously sampled channels"};
    app.require_subcommand(1);
    Overrides o;

    auto *generate = app.add_subcommand("generate", "Write a channel trajectory per seed to the channel file format");
    add_config_flags(*generate, o);

    auto *label = app.add_subcommand("label", "Oracle rate vectors of a channel sequence");
    add_config_flags(*label, o);

    auto *train_cmd = app.add_subcommand("train", "Train on the largest train size of the first seed");
    add_config_flags(*train_cmd, o);

    std::string model_path;
    auto *evaluate = app.add_subcommand("evaluate", "Evaluate a saved model on the held-out set");
    add_config_flags(*evaluate, o);
    evaluate->add_option("-m,--model", model_path, "Model checkpoint")->required()->check(CLI::ExistingFile);

    std::string axis_name = "train_size";
    std::vector<double> axis_values;
    auto *sweep_cmd = app.add_subcommand("sweep", "One run per axis value per seed");
    add_config_flags(*sweep_cmd, o);
    sweep_cmd->add_option("-a,--axis", axis_name, "train_size | power | paths | ris_size | t_s");
    sweep_cmd->add_option("--values", axis_values, "Axis values (default: sweep_values from config)");

    int lag = 1;
    auto *correlate = app.add_subcommand("correlate", "Lagged correlation of oracle rate vectors");
    add_config_flags(*correlate, o);
    correlate->add_option("--lag", lag, "Lag in samples")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);
    const std::string invoked = command_line(argc, argv);

    try
    {
        ExperimentConfig c = resolve(o);

        if (*generate)
        {
            for (auto seed : c.seeds)
            {
                const auto seq = sample_trajectory(c.scenario, c.trajectory_length, derive_seed(seed, "trajectory", 0));
                const auto path = out_path(c, "channels_seed" + std::to_string(seed) + ".risc");
                export_channels(seq, path);
                std::cout << "wrote " << path.string() << " (" << seq.size() << " samples)\n";
            }
        }
        else if (*label)
        {
            const auto codebook = build_dft_codebook(c.scenario.geometry, c.codebook_size);
            for (auto seed : c.seeds)
            {
                const auto path = out_path(c, "labels_seed" + std::to_string(seed) + ".csv");
                write_labels_csv(label_sequence(channels_for(c, seed), codebook, c.budget), path);
                std::cout << "wrote " << path.string() << '\n';
                if (!c.channel_file.empty())
                    break; // one ingested sequence, seeds do not apply
            }
        }
        else if (*train_cmd)
        {
            const auto seed = c.seeds.front();
            const int size = c.train_sizes.back();
            const auto result = run_single(c, size, seed);
            save_model(result.model, out_path(c, "model.rism"));
            emit_loss_curves(result.report, out_path(c, "loss_curves.csv"));
            write_rate_csv({result.row}, out_path(c, "train_eval.csv"));
            std::printf("t_s=%d train=%d ratio=%.4f top1=%.3f final train/test loss %.4g/%.4g\n", c.t_s, size,
                        result.row.proposed.ratio, result.row.proposed.top1_accuracy, result.report.train_loss.back(),
                        result.report.test_loss.back());
        }
        else if (*evaluate)
        {
            const auto model = load_model(model_path);
            const int width = model.architecture.inputs();
            if (width % c.feature_width() != 0 || model.architecture.outputs() != c.codebook_size)
                throw std::invalid_argument("model shape does not match the configured features and codebook");
            c.t_s = width / c.feature_width();
            std::vector<EvaluationRow> rows;
            for (auto seed : c.seeds)
            {
                const auto data = prepare_data(c, c.train_sizes.back(), seed, c.t_s, c.t_s);
                EvaluationRow row;
                row.seed = seed;
                row.t_s = c.t_s;
                row.train_size = c.train_sizes.back();
                row.axis_value = row.train_size;
                row.proposed = evaluate_model(model, data, c.budget, seed);
                rows.push_back(row);
                std::printf("seed %llu ratio=%.4f top1=%.3f\n", static_cast<unsigned long long>(seed), row.proposed.ratio,
                            row.proposed.top1_accuracy);
            }
            write_rate_csv(rows, out_path(c, "evaluation.csv"));
        }
        else if (*sweep_cmd)
        {
            const auto axis = parse_sweep_axis(axis_name);
            if (!axis_values.empty())
                c.sweep_values[to_string(axis)] = axis_values;
            const auto rows = sweep(c, axis);
            const auto path = out_path(c, "sweep_" + to_string(axis) + ".csv");
            write_rate_csv(rows, path);
            int failed = 0;
            for (const auto &r : rows)
                failed += !r.ok;
            std::cout << "wrote " << path.string() << " (" << rows.size() << " rows, " << failed << " failed)\n";
        }
        else if (*correlate)
        {
            const auto codebook = build_dft_codebook(c.scenario.geometry, c.codebook_size);
            std::ostringstream csv;
            csv << "seed,trajectory_step,lag,correlation,degenerate\n";
            for (auto seed : c.seeds)
            {
                const auto r = measure_temporal_correlation(channels_for(c, seed), codebook, c.budget, lag);
                char buf[160];
                std::snprintf(buf, sizeof buf, "%llu,%.17g,%d,%.17g,%d\n", static_cast<unsigned long long>(seed),
                              c.scenario.trajectory_step, lag, r.value, r.degenerate ? 1 : 0);
                csv << buf;
                if (!c.channel_file.empty())
                    break;
            }
            const auto path = out_path(c, "correlation.csv");
            std::ofstream(path) << csv.str();
            std::cout << csv.str();
        }

        write_manifest(c, invoked, out_path(c, "manifest.txt"));
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
