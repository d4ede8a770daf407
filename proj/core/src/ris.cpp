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

#include "risbeam/ris.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "risbeam/seeds.hpp"

namespace risbeam
{
    void Codebook::validate() const
    {
        if (vectors.cols() < 1 || vectors.rows() < 1)
            throw std::invalid_argument("Codebook: must hold at least one non-empty vector");
        for (Eigen::Index n = 0; n < vectors.cols(); ++n)
            if (!is_unit_modulus(vectors.col(n)))
                throw std::invalid_argument("Codebook: column " + std::to_string(n) + " is not unit modulus");
    }

    void SelectionMatrix::validate(int total_elements) const
    {
        if (active_indices.empty())
            throw std::invalid_argument("SelectionMatrix: no active elements");
        if (static_cast<int>(active_indices.size()) > total_elements)
            throw std::invalid_argument("SelectionMatrix: more active elements than RIS elements");
        for (std::size_t i = 0; i < active_indices.size(); ++i)
        {
            const int idx = active_indices[i];
            if (idx < 0 || idx >= total_elements)
                throw std::out_of_range("SelectionMatrix: index " + std::to_string(idx) + " out of range");
            if (i > 0 && active_indices[i - 1] >= idx)
                throw std::invalid_argument("SelectionMatrix: indices must be strictly increasing");
        }
    }

    void LinkBudget::validate() const
    {
        if (!(total_power > 0.0) || !std::isfinite(total_power))
            throw std::invalid_argument("LinkBudget: total_power must be positive");
        if (!(noise_power > 0.0) || !std::isfinite(noise_power))
            throw std::invalid_argument("LinkBudget: noise_power must be positive");
        if (num_subcarriers < 1)
            throw std::invalid_argument("LinkBudget: num_subcarriers must be >= 1");
    }

    bool is_unit_modulus(const cvec &psi, double tol)
    {
        for (Eigen::Index m = 0; m < psi.size(); ++m)
            if (!(std::abs(std::abs(psi(m)) - 1.0) <= tol))
                return false;
        return true;
    }

    cmat cascade(const ChannelRealization &realization)
    {
        if (realization.h_t.rows() != realization.h_r.rows() || realization.h_t.cols() != realization.h_r.cols())
            throw std::invalid_argument("cascade: h_t and h_r shapes differ");
        return realization.h_t.cwiseProduct(realization.h_r);
    }

    cvec received_signal(const ChannelRealization &realization, const cvec &psi, const cvec &symbols,
                         const cvec &noise)
    {
        const auto M = realization.h_t.rows();
        const auto K = realization.h_t.cols();
        if (realization.h_r.rows() != M || realization.h_r.cols() != K)
            throw std::invalid_argument("received_signal: h_t and h_r shapes differ");
        if (psi.size() != M)
            throw std::invalid_argument("received_signal: interaction vector length != M");
        if (symbols.size() != K || noise.size() != K)
            throw std::invalid_argument("received_signal: symbols/noise length != K");
        if (!is_unit_modulus(psi))
            throw std::invalid_argument("received_signal: interaction vector is not unit modulus");

        const cmat Psi = psi.asDiagonal();
        cvec y(K);
        for (Eigen::Index k = 0; k < K; ++k)
        {
            const cplx gain = (realization.h_r.col(k).transpose() * Psi * realization.h_t.col(k))(0, 0);
            y(k) = gain * symbols(k) + noise(k);
        }
        return y;
    }

    double achievable_rate(const cmat &cascade_channel, const cvec &psi, const LinkBudget &budget)
    {
        budget.validate();
        if (psi.size() != cascade_channel.rows())
            throw std::invalid_argument("achievable_rate: interaction vector length != M");
        if (cascade_channel.cols() != budget.num_subcarriers)
            throw std::invalid_argument("achievable_rate: cascade has " + std::to_string(cascade_channel.cols()) +
                                        " subcarriers, budget declares " + std::to_string(budget.num_subcarriers));

        const double snr = budget.snr();
        const cvec g = cascade_channel.transpose() * psi;
        double sum = 0.0;
        for (Eigen::Index k = 0; k < g.size(); ++k)
            sum += std::log2(1.0 + snr * std::norm(g(k)));
        return sum / static_cast<double>(g.size());
    }

    RateVector exhaustive_search(const cmat &cascade_channel, const Codebook &codebook, const LinkBudget &budget)
    {
        budget.validate();
        if (codebook.size() < 1)
            throw std::invalid_argument("exhaustive_search: empty codebook");
        if (codebook.elements() != cascade_channel.rows())
            throw std::invalid_argument("exhaustive_search: codebook length != M");
        if (cascade_channel.cols() != budget.num_subcarriers)
            throw std::invalid_argument("exhaustive_search: subcarrier count mismatch with budget");

        const double snr = budget.snr();
        const double K = static_cast<double>(cascade_channel.cols());

        // Row k, column n: c_k^T psi_n
        const cmat gains = cascade_channel.transpose() * codebook.vectors;

        RateVector out;
        out.rates.resize(codebook.size());
        for (int n = 0; n < codebook.size(); ++n)
        {
            double sum = 0.0;
            for (Eigen::Index k = 0; k < gains.rows(); ++k)
                sum += std::log2(1.0 + snr * std::norm(gains(k, n)));
            out.rates[n] = sum / K;
        }

        out.best_index = 0;
        for (int n = 1; n < codebook.size(); ++n)
            if (out.rates[n] > out.rates[out.best_index])
                out.best_index = n;
        out.best_rate = out.rates[out.best_index];
        return out;
    }

    namespace
    {
        // b beams on an n-element axis: entry (m, i) = exp(j 2 pi m i / b)
        cmat axis_beams(int n, int b)
        {
            cmat beams(n, b);
            for (int m = 0; m < n; ++m)
                for (int i = 0; i < b; ++i)
                {
                    const long long mi = (static_cast<long long>(m) * i) % b;
                    beams(m, i) = std::polar(1.0, 2.0 * pi * static_cast<double>(mi) / b);
                }
            return beams;
        }

        // Integer a-th root of v if one exists
        int exact_root(int v, int a)
        {
            const int guess = static_cast<int>(std::lround(std::pow(static_cast<double>(v), 1.0 / a)));
            for (int r = std::max(1, guess - 1); r <= guess + 1; ++r)
            {
                long long p = 1;
                for (int i = 0; i < a; ++i)
                    p *= r;
                if (p == v)
                    return r;
            }
            return 0;
        }
    }

    Codebook build_dft_codebook(const ArrayGeometry &geometry, int size)
    {
        geometry.validate();
        if (size < 1)
            throw std::invalid_argument("build_dft_codebook: size must be >= 1");

        const std::array<int, 3> dims = {geometry.mx, geometry.my, geometry.mz};
        const int M = geometry.size();
        const int active_axes = static_cast<int>(std::count_if(dims.begin(), dims.end(), [](int d) { return d > 1; }));

        std::array<int, 3> beams = {1, 1, 1};
        bool exact_grid = true;
        if (active_axes == 0)
        {
            exact_grid = false; // single element: every codeword is [1]
        }
        else if (size == M)
        {
            beams = dims;
        }
        else if (const int root = exact_root(size, active_axes); root > 0)
        {
            for (int a = 0; a < 3; ++a)
                beams[a] = dims[a] > 1 ? root : 1;
        }
        else
        {
            exact_grid = false;
            int factor = 1;
            auto grid_size = [&](int f) {
                long long g = 1;
                for (int d : dims)
                    g *= d > 1 ? static_cast<long long>(d) * f : 1;
                return g;
            };
            while (grid_size(factor) < size)
                ++factor;
            for (int a = 0; a < 3; ++a)
                beams[a] = dims[a] > 1 ? dims[a] * factor : 1;
        }

        const cmat bx = axis_beams(dims[0], beams[0]);
        const cmat by = axis_beams(dims[1], beams[1]);
        const cmat bz = axis_beams(dims[2], beams[2]);
        const long long grid = static_cast<long long>(beams[0]) * beams[1] * beams[2];

        auto grid_column = [&](long long g) {
            const int ix = static_cast<int>(g % beams[0]);
            const int iy = static_cast<int>((g / beams[0]) % beams[1]);
            const int iz = static_cast<int>(g / (static_cast<long long>(beams[0]) * beams[1]));
            cvec col(M);
            Eigen::Index e = 0;
            for (int z = 0; z < dims[2]; ++z)
                for (int y = 0; y < dims[1]; ++y)
                    for (int x = 0; x < dims[0]; ++x)
                        col(e++) = bx(x, ix) * by(y, iy) * bz(z, iz);
            return col;
        };

        Codebook cb;
        cb.vectors.resize(M, size);
        for (int n = 0; n < size; ++n)
        {
            const long long g = exact_grid ? n : (static_cast<long long>(n) * grid) / size;
            cb.vectors.col(n) = grid_column(g);
        }
        return cb;
    }

    SelectionMatrix select_active_elements(int total_elements, int m_bar, std::uint64_t seed)
    {
        if (total_elements < 1)
            throw std::invalid_argument("select_active_elements: M must be >= 1");
        if (m_bar < 1 || m_bar > total_elements)
            throw std::invalid_argument("select_active_elements: need 1 <= m_bar <= M, got m_bar=" +
                                        std::to_string(m_bar) + ", M=" + std::to_string(total_elements));

        std::vector<int> pool(total_elements);
        std::iota(pool.begin(), pool.end(), 0);
        Rng rng = make_rng(seed);
        // Partial Fisher-Yates
        for (int i = 0; i < m_bar; ++i)
        {
            std::uniform_int_distribution<int> pick(i, total_elements - 1);
            std::swap(pool[i], pool[pick(rng)]);
        }
        SelectionMatrix sel;
        sel.active_indices.assign(pool.begin(), pool.begin() + m_bar);
        std::sort(sel.active_indices.begin(), sel.active_indices.end());
        return sel;
    }

    SampledChannel sampled_channel(const SelectionMatrix &selection, const ChannelRealization &realization)
    {
        if (realization.h_t.rows() != realization.h_r.rows() || realization.h_t.cols() != realization.h_r.cols())
            throw std::invalid_argument("sampled_channel: h_t and h_r shapes differ");
        selection.validate(realization.elements());

        const auto K = realization.h_t.cols();
        SampledChannel out;
        out.h_bar.resize(selection.size(), K);
        for (int i = 0; i < selection.size(); ++i)
        {
            const int row = selection.active_indices[i];
            out.h_bar.row(i) = realization.h_t.row(row).cwiseProduct(realization.h_r.row(row));
        }
        return out;
    }

    SampledChannel estimate_sampled_channel(const SelectionMatrix &selection, const ChannelRealization &realization,
                                            double pilot_snr_db, std::uint64_t seed)
    {
        if (std::isinf(pilot_snr_db) && pilot_snr_db > 0.0)
            return sampled_channel(selection, realization);
        if (!std::isfinite(pilot_snr_db))
            throw std::invalid_argument("estimate_sampled_channel: pilot SNR must be finite or +inf");
        if (realization.h_t.rows() != realization.h_r.rows() || realization.h_t.cols() != realization.h_r.cols())
            throw std::invalid_argument("estimate_sampled_channel: h_t and h_r shapes differ");
        selection.validate(realization.elements());

        const double snr = std::pow(10.0, pilot_snr_db / 10.0);
        const auto K = realization.h_t.cols();
        cmat t(selection.size(), K), r(selection.size(), K);
        for (int i = 0; i < selection.size(); ++i)
        {
            t.row(i) = realization.h_t.row(selection.active_indices[i]);
            r.row(i) = realization.h_r.row(selection.active_indices[i]);
        }

        Rng rng = make_rng(seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        auto add_noise = [&](cmat &link) {
            const double power = link.squaredNorm() / static_cast<double>(link.size());
            const double sigma = std::sqrt(power / snr / 2.0);
            for (Eigen::Index c = 0; c < link.cols(); ++c)
                for (Eigen::Index m = 0; m < link.rows(); ++m)
                {
                    const double re = normal(rng);
                    const double im = normal(rng);
                    link(m, c) += cplx(sigma * re, sigma * im);
                }
        };
        add_noise(t);
        add_noise(r);
        return SampledChannel{t.cwiseProduct(r)};
    }
}
