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

#include "risbeam/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "risbeam/seeds.hpp"

namespace risbeam
{
    rvec TrainingSample::flattened() const
    {
        rvec flat(history.size());
        Eigen::Index i = 0;
        for (Eigen::Index r = 0; r < history.rows(); ++r)
            for (Eigen::Index c = 0; c < history.cols(); ++c)
                flat(i++) = history(r, c);
        return flat;
    }

    FeatureVector encode_features(const SampledChannel &sampled, int k_in)
    {
        const auto &h = sampled.h_bar;
        if (k_in < 1 || k_in > h.cols())
            throw std::out_of_range("encode_features: k_in=" + std::to_string(k_in) + " outside [1, " +
                                    std::to_string(h.cols()) + "]");

        FeatureVector fv;
        fv.values.resize(2 * h.rows() * k_in);
        Eigen::Index i = 0;
        for (Eigen::Index m = 0; m < h.rows(); ++m)
            for (int k = 0; k < k_in; ++k)
            {
                fv.values(i++) = h(m, k).real();
                fv.values(i++) = h(m, k).imag();
            }

        const double peak = fv.values.cwiseAbs().maxCoeff();
        if (!std::isfinite(peak))
            throw std::invalid_argument("encode_features: non-finite sampled channel");
        if (peak > 0.0)
            fv.values /= peak;
        return fv;
    }

    rvec normalize_targets(const RateVector &rates)
    {
        if (rates.rates.empty())
            throw std::invalid_argument("normalize_targets: empty rate vector");
        rvec t = Eigen::Map<const rvec>(rates.rates.data(), static_cast<Eigen::Index>(rates.rates.size()));
        const double peak = t.maxCoeff();
        if (peak > 0.0)
            t /= peak;
        return t;
    }

    std::vector<TrainingSample> build_history_samples(std::span<const FeatureVector> features,
                                                      std::span<const RateVector> rate_vectors, int t_s)
    {
        if (t_s < 1)
            throw std::invalid_argument("build_history_samples: t_s must be >= 1");
        if (features.size() != rate_vectors.size())
            throw std::invalid_argument("build_history_samples: feature and rate lists differ in length");
        const int S = static_cast<int>(features.size());
        if (S < t_s)
            throw std::invalid_argument("build_history_samples: sequence of " + std::to_string(S) +
                                        " steps is shorter than t_s=" + std::to_string(t_s));

        const Eigen::Index F = features.front().values.size();
        for (const auto &f : features)
            if (f.values.size() != F)
                throw std::invalid_argument("build_history_samples: feature vectors differ in length");

        std::vector<TrainingSample> out;
        out.reserve(S - t_s + 1);
        for (int s = t_s - 1; s < S; ++s)
        {
            TrainingSample sample;
            sample.history.resize(t_s, F);
            for (int i = 0; i < t_s; ++i)
                sample.history.row(i) = features[s - i].values.transpose();
            sample.target = normalize_targets(rate_vectors[s]);
            sample.time_index = s;
            sample.best_index = rate_vectors[s].best_index;
            sample.best_rate = rate_vectors[s].best_rate;
            sample.rates = rate_vectors[s].rates;
            out.push_back(std::move(sample));
        }
        return out;
    }

    std::pair<std::vector<TrainingSample>, std::vector<TrainingSample>> split(std::vector<TrainingSample> samples,
                                                                              const SplitSpec &spec)
    {
        if (spec.train_count < 1 || spec.test_count < 1)
            throw std::invalid_argument("split: train_count and test_count must both be >= 1");
        const auto needed = static_cast<std::size_t>(spec.train_count) + static_cast<std::size_t>(spec.test_count);
        if (needed > samples.size())
            throw std::invalid_argument("split: need " + std::to_string(needed) + " samples, have " +
                                        std::to_string(samples.size()));

        std::vector<std::size_t> order(samples.size());
        std::iota(order.begin(), order.end(), 0);
        Rng rng = make_rng(spec.seed);
        for (std::size_t i = order.size(); i > 1; --i)
        {
            std::uniform_int_distribution<std::size_t> pick(0, i - 1);
            std::swap(order[i - 1], order[pick(rng)]);
        }

        std::vector<TrainingSample> train, test;
        train.reserve(spec.train_count);
        test.reserve(spec.test_count);
        for (int i = 0; i < spec.train_count; ++i)
            train.push_back(std::move(samples[order[i]]));
        for (int i = 0; i < spec.test_count; ++i)
            test.push_back(std::move(samples[order[spec.train_count + i]]));
        return {std::move(train), std::move(test)};
    }

    void write_dataset_csv(std::span<const TrainingSample> samples, const std::filesystem::path &path)
    {
        if (samples.empty())
            throw std::invalid_argument("write_dataset_csv: no samples");
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("write_dataset_csv: cannot open " + path.string());

        const auto &first = samples.front();
        out << "trajectory,time_index,best_index";
        for (Eigen::Index r = 0; r < first.history.rows(); ++r)
            for (Eigen::Index c = 0; c < first.history.cols(); ++c)
                out << ",h" << r << '_' << c;
        for (Eigen::Index n = 0; n < first.target.size(); ++n)
            out << ",t" << n;
        out << '\n';

        char buf[32];
        auto put = [&](double v) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << ',' << buf;
        };
        for (const auto &s : samples)
        {
            out << s.trajectory << ',' << s.time_index << ',' << s.best_index;
            for (Eigen::Index r = 0; r < s.history.rows(); ++r)
                for (Eigen::Index c = 0; c < s.history.cols(); ++c)
                    put(s.history(r, c));
            for (Eigen::Index n = 0; n < s.target.size(); ++n)
                put(s.target(n));
            out << '\n';
        }
    }

    Batch to_batch(std::span<const TrainingSample> samples)
    {
        Batch b;
        if (samples.empty())
            return b;
        const Eigen::Index F = samples.front().history.size();
        const Eigen::Index P = samples.front().target.size();
        b.inputs.resize(F, static_cast<Eigen::Index>(samples.size()));
        b.targets.resize(P, static_cast<Eigen::Index>(samples.size()));
        for (std::size_t i = 0; i < samples.size(); ++i)
        {
            if (samples[i].history.size() != F || samples[i].target.size() != P)
                throw std::invalid_argument("to_batch: samples differ in shape");
            b.inputs.col(static_cast<Eigen::Index>(i)) = samples[i].flattened();
            b.targets.col(static_cast<Eigen::Index>(i)) = samples[i].target;
        }
        return b;
    }
}
