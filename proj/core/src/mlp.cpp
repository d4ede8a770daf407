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

#include "risbeam/mlp.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "risbeam/seeds.hpp"

namespace risbeam
{
    void MlpArchitecture::validate() const
    {
        if (layer_widths.size() < 4)
            throw std::invalid_argument("MlpArchitecture: need input, >= 2 hidden and output layers");
        for (int w : layer_widths)
            if (w < 1)
                throw std::invalid_argument("MlpArchitecture: layer widths must be >= 1");
        if (!(dropout_rate >= 0.0 && dropout_rate < 1.0))
            throw std::invalid_argument("MlpArchitecture: dropout_rate must be in [0, 1)");
    }

    MlpArchitecture MlpArchitecture::desk_scale(int input_width, int output_width)
    {
        return MlpArchitecture{{input_width, 128, 256, 512, output_width}, 0.5};
    }

    MlpArchitecture MlpArchitecture::full_scale(int input_width, int output_width)
    {
        return MlpArchitecture{{input_width, 1024, 4096, 8192, output_width}, 0.5};
    }

    double TrainConfig::learning_rate(int epoch) const
    {
        return initial_lr * std::pow(lr_drop_factor, epoch / lr_drop_period_epochs);
    }

    void TrainConfig::validate() const
    {
        if (max_epochs < 0)
            throw std::invalid_argument("TrainConfig: max_epochs must be >= 0");
        if (batch_size < 1)
            throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
        if (l2_coefficient < 0.0)
            throw std::invalid_argument("TrainConfig: l2_coefficient must be >= 0");
        if (initial_lr < 0.0)
            throw std::invalid_argument("TrainConfig: initial_lr must be >= 0");
        if (lr_drop_period_epochs < 1)
            throw std::invalid_argument("TrainConfig: lr_drop_period_epochs must be >= 1");
        if (!(lr_drop_factor > 0.0 && lr_drop_factor <= 1.0))
            throw std::invalid_argument("TrainConfig: lr_drop_factor must be in (0, 1]");
        if (!(momentum >= 0.0 && momentum < 1.0))
            throw std::invalid_argument("TrainConfig: momentum must be in [0, 1)");
    }

    void MlpModel::validate() const
    {
        architecture.validate();
        const auto &w = architecture.layer_widths;
        if (layers.size() != w.size() - 1)
            throw std::invalid_argument("MlpModel: layer count does not match architecture");
        for (std::size_t l = 0; l < layers.size(); ++l)
        {
            if (layers[l].weights.rows() != w[l + 1] || layers[l].weights.cols() != w[l] ||
                layers[l].bias.size() != w[l + 1])
                throw std::invalid_argument("MlpModel: layer " + std::to_string(l) + " has inconsistent shape");
            if (!layers[l].weights.allFinite() || !layers[l].bias.allFinite())
                throw std::invalid_argument("MlpModel: non-finite parameters in layer " + std::to_string(l));
        }
    }

    std::size_t MlpModel::parameter_count() const
    {
        std::size_t n = 0;
        for (const auto &layer : layers)
            n += static_cast<std::size_t>(layer.weights.size() + layer.bias.size());
        return n;
    }

    Gradients Gradients::zeros_like(const MlpModel &model)
    {
        Gradients g;
        g.layers.reserve(model.layers.size());
        for (const auto &layer : model.layers)
            g.layers.push_back({rmat::Zero(layer.weights.rows(), layer.weights.cols()), rvec::Zero(layer.bias.size())});
        return g;
    }

    MlpModel init_model(const MlpArchitecture &architecture, std::uint64_t seed)
    {
        architecture.validate();
        MlpModel model;
        model.architecture = architecture;
        Rng rng = make_rng(seed);
        const auto &w = architecture.layer_widths;
        for (std::size_t l = 0; l + 1 < w.size(); ++l)
        {
            const double limit = std::sqrt(6.0 / (w[l] + w[l + 1]));
            std::uniform_real_distribution<double> u(-limit, limit);
            DenseLayer layer{rmat(w[l + 1], w[l]), rvec::Zero(w[l + 1])};
            // Fill row-major so the draw order matches the checkpoint layout
            for (Eigen::Index r = 0; r < layer.weights.rows(); ++r)
                for (Eigen::Index c = 0; c < layer.weights.cols(); ++c)
                    layer.weights(r, c) = u(rng);
            model.layers.push_back(std::move(layer));
        }
        return model;
    }

    std::vector<rmat> draw_dropout_masks(const MlpArchitecture &architecture, Eigen::Index columns,
                                         std::uint64_t seed)
    {
        std::vector<rmat> masks;
        const double rate = architecture.dropout_rate;
        if (rate <= 0.0)
            return masks;
        const double keep = 1.0 - rate;
        Rng rng = make_rng(seed);
        std::bernoulli_distribution survive(keep);
        for (int h = 1; h <= architecture.hidden_layers(); ++h)
        {
            rmat mask(architecture.layer_widths[h], columns);
            for (Eigen::Index c = 0; c < mask.cols(); ++c)
                for (Eigen::Index r = 0; r < mask.rows(); ++r)
                    mask(r, c) = survive(rng) ? 1.0 / keep : 0.0;
            masks.push_back(std::move(mask));
        }
        return masks;
    }

    namespace
    {
        void check_input(const MlpModel &model, Eigen::Index rows)
        {
            if (model.layers.empty())
                throw std::invalid_argument("forward: model has no layers");
            if (rows != model.layers.front().weights.cols())
                throw std::invalid_argument("forward: input width " + std::to_string(rows) + " != model input width " +
                                            std::to_string(model.layers.front().weights.cols()));
        }

        // Returns pre-activations z_l and post-activations a_l (a_0 = inputs).
        rmat run_forward(const MlpModel &model, const rmat &inputs, const std::vector<rmat> &masks,
                         std::vector<rmat> *pre, std::vector<rmat> *post)
        {
            rmat a = inputs;
            if (post)
                post->push_back(a);
            const std::size_t last = model.layers.size() - 1;
            for (std::size_t l = 0; l < model.layers.size(); ++l)
            {
                const auto &layer = model.layers[l];
                rmat z = layer.weights * a;
                z.colwise() += layer.bias;
                if (pre)
                    pre->push_back(z);
                if (l == last)
                {
                    a = std::move(z);
                }
                else
                {
                    a = z.cwiseMax(0.0);
                    if (!masks.empty())
                        a = a.cwiseProduct(masks[l]);
                }
                if (post)
                    post->push_back(a);
            }
            return a;
        }

        double weight_penalty(const MlpModel &model)
        {
            double s = 0.0;
            for (const auto &layer : model.layers)
                s += layer.weights.squaredNorm();
            return 0.5 * s;
        }
    }

    rvec forward(const MlpModel &model, const rvec &input, bool training_mode, std::uint64_t seed)
    {
        check_input(model, input.size());
        std::vector<rmat> masks;
        if (training_mode)
            masks = draw_dropout_masks(model.architecture, 1, seed);
        return run_forward(model, input, masks, nullptr, nullptr).col(0);
    }

    rmat forward_batch(const MlpModel &model, const rmat &inputs)
    {
        check_input(model, inputs.rows());
        return run_forward(model, inputs, {}, nullptr, nullptr);
    }

    double mean_squared_error(const rmat &prediction, const rmat &target)
    {
        if (prediction.rows() != target.rows() || prediction.cols() != target.cols())
            throw std::invalid_argument("mean_squared_error: shape mismatch");
        if (prediction.size() == 0)
            return 0.0;
        return (prediction - target).squaredNorm() / static_cast<double>(prediction.size());
    }

    double loss(const rvec &prediction, const rvec &target, const MlpModel &model, double l2)
    {
        if (prediction.size() != target.size())
            throw std::invalid_argument("loss: prediction and target lengths differ");
        return mean_squared_error(prediction, target) + l2 * weight_penalty(model);
    }

    double loss_gradient(const MlpModel &model, const rmat &inputs, const rmat &targets, double l2,
                         const std::vector<rmat> &masks, Gradients &grads)
    {
        check_input(model, inputs.rows());
        std::vector<rmat> pre, post;
        const rmat y = run_forward(model, inputs, masks, &pre, &post);
        if (y.rows() != targets.rows() || y.cols() != targets.cols())
            throw std::invalid_argument("loss_gradient: target shape mismatch");

        if (grads.layers.size() != model.layers.size())
            grads = Gradients::zeros_like(model);

        const double count = static_cast<double>(y.size());
        rmat delta = (2.0 / count) * (y - targets);
        for (std::size_t l = model.layers.size(); l-- > 0;)
        {
            const auto &layer = model.layers[l];
            grads.layers[l].weights.noalias() = delta * post[l].transpose();
            grads.layers[l].weights += l2 * layer.weights;
            grads.layers[l].bias = delta.rowwise().sum();
            if (l == 0)
                break;
            rmat back = layer.weights.transpose() * delta;
            // through dropout and ReLU of hidden layer l-1
            const rmat &z = pre[l - 1];
            for (Eigen::Index c = 0; c < back.cols(); ++c)
                for (Eigen::Index r = 0; r < back.rows(); ++r)
                    if (z(r, c) <= 0.0)
                        back(r, c) = 0.0;
            if (!masks.empty())
                back = back.cwiseProduct(masks[l - 1]);
            delta = std::move(back);
        }
        return mean_squared_error(y, targets);
    }

    SgdMomentum::SgdMomentum(const MlpModel &model, double momentum)
        : momentum_(momentum), velocity_(Gradients::zeros_like(model))
    {
    }

    void SgdMomentum::step(MlpModel &model, const Gradients &grads, double learning_rate)
    {
        for (std::size_t l = 0; l < model.layers.size(); ++l)
        {
            auto &v = velocity_.layers[l];
            v.weights = momentum_ * v.weights - learning_rate * grads.layers[l].weights;
            v.bias = momentum_ * v.bias - learning_rate * grads.layers[l].bias;
            model.layers[l].weights += v.weights;
            model.layers[l].bias += v.bias;
        }
    }

    std::pair<MlpModel, TrainReport> train(MlpModel model, const Batch &train_set, const Batch &test_set,
                                           const TrainConfig &config)
    {
        config.validate();
        model.validate();
        if (train_set.size() < 1)
            throw std::invalid_argument("train: empty training set");
        if (train_set.inputs.rows() != model.architecture.inputs() ||
            train_set.targets.rows() != model.architecture.outputs())
            throw std::invalid_argument("train: training set shape does not match architecture");
        if (test_set.size() > 0 && (test_set.inputs.rows() != model.architecture.inputs() ||
                                    test_set.targets.rows() != model.architecture.outputs()))
            throw std::invalid_argument("train: test set shape does not match architecture");

        model.mode = Mode::train;
        TrainReport report;
        SgdMomentum optimizer(model, config.momentum);
        Gradients grads = Gradients::zeros_like(model);

        const Eigen::Index N = train_set.size();
        std::vector<Eigen::Index> order(N);
        std::iota(order.begin(), order.end(), 0);

        for (int epoch = 0; epoch < config.max_epochs; ++epoch)
        {
            const double lr = config.learning_rate(epoch);
            Rng shuffle_rng = make_rng(derive_seed(config.seed, "shuffle", epoch));
            for (Eigen::Index i = N; i > 1; --i)
            {
                std::uniform_int_distribution<Eigen::Index> pick(0, i - 1);
                std::swap(order[i - 1], order[pick(shuffle_rng)]);
            }

            double weighted = 0.0;
            int batch_no = 0;
            for (Eigen::Index start = 0; start < N; start += config.batch_size, ++batch_no)
            {
                const Eigen::Index B = std::min<Eigen::Index>(config.batch_size, N - start);
                rmat x(train_set.inputs.rows(), B), t(train_set.targets.rows(), B);
                for (Eigen::Index b = 0; b < B; ++b)
                {
                    x.col(b) = train_set.inputs.col(order[start + b]);
                    t.col(b) = train_set.targets.col(order[start + b]);
                }
                const auto masks = draw_dropout_masks(
                    model.architecture, B,
                    derive_seed(config.seed, "dropout", static_cast<std::uint64_t>(epoch) * 1000003ULL + batch_no));
                const double batch_loss = loss_gradient(model, x, t, config.l2_coefficient, masks, grads);
                if (!std::isfinite(batch_loss))
                {
                    std::ostringstream msg;
                    msg << "train: non-finite loss at epoch " << epoch << ", batch " << batch_no;
                    throw TrainingDiverged(epoch, msg.str());
                }
                weighted += batch_loss * static_cast<double>(B);
                optimizer.step(model, grads, lr);
            }

            const double train_loss = weighted / static_cast<double>(N);
            double test_loss = std::numeric_limits<double>::quiet_NaN();
            if (test_set.size() > 0)
            {
                test_loss = mean_squared_error(forward_batch(model, test_set.inputs), test_set.targets);
                if (!std::isfinite(test_loss))
                    throw TrainingDiverged(epoch, "train: non-finite test loss at epoch " + std::to_string(epoch));
            }
            report.train_loss.push_back(train_loss);
            report.test_loss.push_back(test_loss);
            report.learning_rate.push_back(lr);
        }

        model.mode = Mode::infer;
        return {std::move(model), std::move(report)};
    }

    int first_argmax(const rvec &values)
    {
        if (values.size() == 0)
            throw std::invalid_argument("first_argmax: empty vector");
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < values.size(); ++i)
            if (values(i) > values(best))
                best = i;
        return static_cast<int>(best);
    }

    BeamChoice predict_beam(const MlpModel &model, const rvec &history_input, const Codebook &codebook)
    {
        if (model.mode != Mode::infer)
            throw std::logic_error("predict_beam: model is not in inference mode");
        if (model.architecture.outputs() != codebook.size())
            throw std::invalid_argument("predict_beam: model output width " +
                                        std::to_string(model.architecture.outputs()) + " != codebook size " +
                                        std::to_string(codebook.size()));
        const rvec scores = forward(model, history_input, false);
        BeamChoice choice;
        choice.index = first_argmax(scores);
        choice.vector = codebook.column(choice.index);
        return choice;
    }
}
