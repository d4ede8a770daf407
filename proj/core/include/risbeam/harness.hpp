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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "risbeam/channel.hpp"
#include "risbeam/dataset.hpp"
#include "risbeam/mlp.hpp"
#include "risbeam/ris.hpp"

namespace risbeam
{
    enum class SweepAxis
    {
        train_size,
        power,
        paths,
        ris_size,
        t_s
    };

    std::string to_string(SweepAxis axis);
    SweepAxis parse_sweep_axis(const std::string &name);

    // Every knob of one experiment. All stochastic stages draw sub-seeds from
    // each master seed in `seeds` (see derive_seed).
    //
    // Defaults are the desk-scale setup: 8x8 UPA, 64 DFT beams, 8 active
    // elements, 16 subcarriers, 2 dB pilot SNR, [t_s*256, 128, 256, 512, 64].
    struct ExperimentConfig
    {
        ExperimentConfig();

        ScenarioConfig scenario;
        LinkBudget budget;
        int codebook_size = 64;
        int m_bar = 8;
        int k_in = 16;
        int t_s = 3;
        // Pilot SNR of the sampled-channel estimate at the active elements;
        // empty means the RIS observes the sampled channel exactly.
        std::optional<double> pilot_snr_db;
        int trajectory_length = 40;
        std::vector<int> train_sizes = {400};
        int test_size = 200;
        std::vector<int> hidden_widths = {128, 256, 512};
        double dropout_rate = 0.2;
        TrainConfig train;
        std::vector<std::uint64_t> seeds = {0};
        std::string output_dir = "out";
        std::string channel_file; // when set, channels are ingested instead of generated
        bool control_arms = true; // t_s = 1 baseline and random-beam floor
        int jobs = 1;
        std::map<std::string, std::vector<double>> sweep_values;

        // Keeps budget.num_subcarriers equal to scenario.num_subcarriers.
        void sync();
        void validate() const;
        int feature_width() const { return 2 * m_bar * k_in; }
        MlpArchitecture architecture(int history_depth) const;
    };

    // Structured config file (JSON). Unknown keys are rejected.
    ExperimentConfig config_from_json(const std::string &text);
    ExperimentConfig load_config(const std::filesystem::path &path);
    std::string config_to_json(const ExperimentConfig &config);

    // Labelled trajectories plus the train/test split for one master seed.
    struct PreparedData
    {
        Codebook codebook;
        SelectionMatrix selection;
        std::vector<std::vector<cmat>> cascades; // [trajectory][time]
        std::vector<TrainingSample> train;
        std::vector<TrainingSample> test;
    };

    // Builds enough trajectories for train_size + test_size samples. Only
    // time steps >= history_reserve - 1 are used, so arms with different
    // t_s (<= history_reserve) see identical time steps and splits.
    PreparedData prepare_data(const ExperimentConfig &config, int train_size, std::uint64_t seed, int t_s,
                              int history_reserve);

    struct EvaluationMetrics
    {
        double mean_achieved_rate = 0.0;
        double mean_oracle_rate = 0.0;
        double ratio = 0.0; // mean achieved / mean oracle
        double top1_accuracy = 0.0;
        double random_ratio = 0.0; // uniform-random-beam control
        std::size_t samples = 0;
    };

    // Runs predict_beam on every test sample and recomputes its true rate.
    // Throws std::logic_error if any prediction beats the oracle.
    EvaluationMetrics evaluate_model(const MlpModel &model, const PreparedData &data, const LinkBudget &budget,
                                     std::uint64_t seed);

    struct EvaluationRow
    {
        SweepAxis axis = SweepAxis::train_size;
        double axis_value = 0.0;
        std::uint64_t seed = 0;
        int t_s = 1;
        int train_size = 0;
        EvaluationMetrics proposed;
        std::optional<EvaluationMetrics> baseline; // t_s = 1 control arm
        bool ok = true;
        std::string error;
    };

    struct RunResult
    {
        EvaluationRow row;
        TrainReport report;
        MlpModel model;
    };

    // One (train_size, seed) run: data, training, evaluation, control arms.
    RunResult run_single(const ExperimentConfig &config, int train_size, std::uint64_t seed);

    struct PipelineReport
    {
        std::vector<EvaluationRow> rows; // per (train_size, seed)
        std::vector<TrainReport> reports;
    };

    PipelineReport run_pipeline(const ExperimentConfig &config);

    // One run per axis value per seed. Failures are flagged per row.
    std::vector<EvaluationRow> sweep(const ExperimentConfig &config, SweepAxis axis);
    std::vector<double> sweep_axis_values(const ExperimentConfig &config, SweepAxis axis);
    ExperimentConfig apply_axis_value(ExperimentConfig config, SweepAxis axis, double value);

    std::string rate_rows_csv(const std::vector<EvaluationRow> &rows);
    void write_rate_csv(const std::vector<EvaluationRow> &rows, const std::filesystem::path &path);

    struct CorrelationResult
    {
        double value = 0.0; // mean Pearson correlation of r(s) and r(s - lag)
        bool degenerate = false;
    };

    CorrelationResult measure_temporal_correlation(const ChannelSequence &sequence, const Codebook &codebook,
                                                   const LinkBudget &budget, int lag);

    std::string loss_curves_csv(const TrainReport &report);
    void emit_loss_curves(const TrainReport &report, const std::filesystem::path &path);

    struct LossCurveRow
    {
        int epoch = 0;
        double lr = 0.0;
        double train_loss = 0.0;
        double test_loss = 0.0;
    };
    std::vector<LossCurveRow> parse_loss_curves(const std::string &csv);

    // Oracle labels for every step of a sequence.
    std::vector<RateVector> label_sequence(const ChannelSequence &sequence, const Codebook &codebook,
                                           const LinkBudget &budget);
    void write_labels_csv(const std::vector<RateVector> &labels, const std::filesystem::path &path);

    // Resolved config and master seeds, for reruns.
    void write_manifest(const ExperimentConfig &config, const std::string &command,
                        const std::filesystem::path &path);
}
