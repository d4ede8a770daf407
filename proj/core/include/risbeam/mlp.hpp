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
#include <stdexcept>
#include <utility>
#include <vector>

#include "risbeam/ris.hpp"
#include "risbeam/types.hpp"

namespace risbeam
{
    // Dense network: ReLU on every hidden layer, identity on the output.
    struct MlpArchitecture
    {
        std::vector<int> layer_widths; // input, hidden..., output
        double dropout_rate = 0.5;     // applied after each hidden ReLU while training

        int inputs() const { return layer_widths.front(); }
        int outputs() const { return layer_widths.back(); }
        int hidden_layers() const { return static_cast<int>(layer_widths.size()) - 2; }
        void validate() const;

        // [input, 128, 256, 512, output]
        static MlpArchitecture desk_scale(int input_width, int output_width);
        // [input, 1024, 4096, 8192, output]
        static MlpArchitecture full_scale(int input_width, int output_width);
    };

    struct TrainConfig
    {
        int max_epochs = 49;
        int batch_size = 500;
        double l2_coefficient = 1e-4;
        double initial_lr = 0.1;
        int lr_drop_period_epochs = 8;
        double lr_drop_factor = 0.5;
        double momentum = 0.9;
        std::uint64_t seed = 0;

        // initial_lr * lr_drop_factor ^ floor(epoch / lr_drop_period_epochs)
        double learning_rate(int epoch) const;
        void validate() const;
    };

    enum class Mode
    {
        train,
        infer
    };

    struct DenseLayer
    {
        rmat weights; // out x in
        rvec bias;    // out
    };

    struct MlpModel
    {
        MlpArchitecture architecture;
        std::vector<DenseLayer> layers;
        Mode mode = Mode::train;

        void validate() const;
        std::size_t parameter_count() const;
    };

    // Same shapes as the model's layers.
    struct Gradients
    {
        std::vector<DenseLayer> layers;

        static Gradients zeros_like(const MlpModel &model);
    };

    struct TrainReport
    {
        std::vector<double> train_loss;    // mean mini-batch MSE (dropout active)
        std::vector<double> test_loss;     // inference MSE on the held-out set
        std::vector<double> learning_rate; // rate used during each epoch

        std::size_t epochs() const { return train_loss.size(); }
    };

    // Non-finite loss during training.
    class TrainingDiverged : public std::runtime_error
    {
    public:
        TrainingDiverged(int epoch, const std::string &what) : std::runtime_error(what), epoch_(epoch) {}
        int epoch() const { return epoch_; }

    private:
        int epoch_;
    };

    // Glorot-uniform weights, zero biases.
    MlpModel init_model(const MlpArchitecture &architecture, std::uint64_t seed);

    // Single-sample forward pass. Inverted dropout is applied only when
    // training_mode is set, with masks drawn from `seed`.
    rvec forward(const MlpModel &model, const rvec &input, bool training_mode, std::uint64_t seed = 0);

    // Deterministic forward pass of a whole batch (one sample per column).
    rmat forward_batch(const MlpModel &model, const rmat &inputs);

    // Mean squared error over output units + l2 * sum(W^2) / 2 (weights only).
    double loss(const rvec &prediction, const rvec &target, const MlpModel &model, double l2);

    double mean_squared_error(const rmat &prediction, const rmat &target);

    // Loss averaged over the batch columns plus the L2 term, and its gradient.
    // `masks` holds one inverted-dropout mask per hidden layer (hidden x N), or
    // is empty for a deterministic pass. Returns the data (MSE) part of the loss.
    double loss_gradient(const MlpModel &model, const rmat &inputs, const rmat &targets, double l2,
                         const std::vector<rmat> &masks, Gradients &grads);

    // Inverted-dropout masks for a batch of `columns` samples.
    std::vector<rmat> draw_dropout_masks(const MlpArchitecture &architecture, Eigen::Index columns,
                                         std::uint64_t seed);

    // Heavy-ball SGD: v <- momentum * v - lr * g; theta <- theta + v.
    class SgdMomentum
    {
    public:
        SgdMomentum(const MlpModel &model, double momentum);
        void step(MlpModel &model, const Gradients &grads, double learning_rate);

    private:
        double momentum_;
        Gradients velocity_;
    };

    // Mini-batch training; batches are reshuffled every epoch from config.seed.
    // The returned model is in inference mode.
    std::pair<MlpModel, TrainReport> train(MlpModel model, const Batch &train_set, const Batch &test_set,
                                           const TrainConfig &config);

    struct BeamChoice
    {
        int index = 0;
        cvec vector;
    };

    // First index of the maximum entry.
    int first_argmax(const rvec &values);

    BeamChoice predict_beam(const MlpModel &model, const rvec &history_input, const Codebook &codebook);

    // Checkpoint: "RISM", uint32 version, uint32 layer count, widths, dropout,
    // then per layer row-major weights and biases as little-endian float64.
    void save_model(const MlpModel &model, const std::filesystem::path &path);
    MlpModel load_model(const std::filesystem::path &path);
}
