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
#include <vector>

#include "risbeam/channel.hpp"
#include "risbeam/types.hpp"

namespace risbeam
{
    // Candidate interaction vectors, one per column (M x P). Entries are unit modulus.
    struct Codebook
    {
        cmat vectors;

        int size() const { return static_cast<int>(vectors.cols()); }
        int elements() const { return static_cast<int>(vectors.rows()); }
        auto column(int n) const { return vectors.col(n); }
        void validate() const;
    };

    // Row selector for the active (receive-capable) RIS elements.
    struct SelectionMatrix
    {
        std::vector<int> active_indices; // strictly increasing

        int size() const { return static_cast<int>(active_indices.size()); }
        void validate(int total_elements) const;
    };

    // Cascade channel observed at the active elements, M_bar x K.
    struct SampledChannel
    {
        cmat h_bar;
    };

    struct RateVector
    {
        std::vector<double> rates; // bits/s/Hz per codeword
        int best_index = 0;        // first argmax
        double best_rate = 0.0;
    };

    struct LinkBudget
    {
        double total_power = 1.0; // P_T, linear
        double noise_power = 1.0; // sigma_n^2, linear
        int num_subcarriers = 1;  // K

        // Per-subcarrier SNR P_T / (K sigma_n^2)
        double snr() const { return total_power / (num_subcarriers * noise_power); }
        void validate() const;
    };

    // Column k = h_t,k (.) h_r,k
    cmat cascade(const ChannelRealization &realization);

    // y_k = h_r,k^T diag(psi) h_t,k s_k + n_k
    cvec received_signal(const ChannelRealization &realization, const cvec &psi, const cvec &symbols,
                         const cvec &noise);

    // (1/K) sum_k log2(1 + SNR |c_k^T psi|^2)
    double achievable_rate(const cmat &cascade_channel, const cvec &psi, const LinkBudget &budget);

    // Rates of every codeword and the first argmax.
    RateVector exhaustive_search(const cmat &cascade_channel, const Codebook &codebook, const LinkBudget &budget);

    // Kronecker product of per-axis DFT beams. size == M gives the orthogonal
    // DFT basis; other sizes use a uniform angular grid per axis when size is
    // a perfect power of the active axis count, otherwise an oversampled grid
    // subsampled uniformly to `size` columns.
    Codebook build_dft_codebook(const ArrayGeometry &geometry, int size);

    // m_bar distinct indices drawn uniformly without replacement.
    SelectionMatrix select_active_elements(int total_elements, int m_bar, std::uint64_t seed);

    SampledChannel sampled_channel(const SelectionMatrix &selection, const ChannelRealization &realization);

    // Pilot-based estimate of the sampled channel: the active-element rows of
    // h_t and h_r are each observed with additive CN(0, P / snr) noise, P being
    // that link's mean power over the active rows, before the Hadamard product.
    // An infinite pilot SNR returns sampled_channel() exactly.
    SampledChannel estimate_sampled_channel(const SelectionMatrix &selection, const ChannelRealization &realization,
                                            double pilot_snr_db, std::uint64_t seed);

    bool is_unit_modulus(const cvec &psi, double tol = 1e-12);
}
