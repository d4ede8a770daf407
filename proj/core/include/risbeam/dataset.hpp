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
#include <span>
#include <utility>
#include <vector>

#include "risbeam/ris.hpp"
#include "risbeam/types.hpp"

namespace risbeam
{
    // Real encoding of a sampled channel: for each active element, for each of
    // the first k_in subcarriers, (re, im). Scaled so max |value| <= 1.
    struct FeatureVector
    {
        rvec values;
    };

    struct TrainingSample
    {
        rmat history;        // t_s x F; row 0 is time s, row i is time s - i
        rvec target;         // normalized rate vector of time s, in [0, 1]
        int time_index = 0;  // s within its trajectory
        int trajectory = 0;  // which trajectory the sample came from
        int best_index = 0;  // oracle codeword of time s
        double best_rate = 0.0;
        std::vector<double> rates; // raw oracle rates of time s (bits/s/Hz)

        // history flattened row by row, the layout the network consumes
        rvec flattened() const;
    };

    struct SplitSpec
    {
        int train_count = 0;
        int test_count = 0;
        std::uint64_t seed = 0;
    };

    FeatureVector encode_features(const SampledChannel &sampled, int k_in);

    // Divides by the max rate when positive; all-zero input passes through.
    rvec normalize_targets(const RateVector &rates);

    // Emits S - t_s + 1 samples; the first t_s - 1 steps produce none.
    std::vector<TrainingSample> build_history_samples(std::span<const FeatureVector> features,
                                                      std::span<const RateVector> rate_vectors, int t_s);

    // Deterministic shuffle by seed; first train_count to train, next test_count to test.
    std::pair<std::vector<TrainingSample>, std::vector<TrainingSample>> split(std::vector<TrainingSample> samples,
                                                                              const SplitSpec &spec);

    // One row per sample: h{row}_{col} history columns, then t{n} target columns.
    void write_dataset_csv(std::span<const TrainingSample> samples, const std::filesystem::path &path);

    Batch to_batch(std::span<const TrainingSample> samples);
}
