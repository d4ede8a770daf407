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

// Straight-line reference implementations used as test oracles. They share
// no code with the library paths they check: plain loops, no Eigen products.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "risbeam/channel.hpp"
#include "risbeam/mlp.hpp"
#include "risbeam/ris.hpp"

namespace oracle
{
    using cplx = std::complex<double>;
    constexpr double two_pi = 6.283185307179586476925286766559;

    // Direct quadruple sum of the geometric channel, element by element.
    inline risbeam::cmat direct_channel(const risbeam::ScenarioConfig &cfg, const std::vector<risbeam::RayPath> &rays,
                                        int K)
    {
        const auto &g = cfg.geometry;
        const int M = g.mx * g.my * g.mz;
        risbeam::cmat h(M, K);
        for (int k = 0; k < K; ++k)
        {
            for (int z = 0; z < g.mz; ++z)
                for (int y = 0; y < g.my; ++y)
                    for (int x = 0; x < g.mx; ++x)
                    {
                        cplx acc(0.0, 0.0);
                        for (int d = 0; d < cfg.num_taps; ++d)
                            for (const auto &ray : rays)
                            {
                                const double phase = two_pi * g.spacing *
                                                     (x * std::cos(ray.elevation) * std::cos(ray.azimuth) +
                                                      y * std::cos(ray.elevation) * std::sin(ray.azimuth) +
                                                      z * std::sin(ray.elevation));
                                const double t = (d * cfg.sample_period - ray.delay) / cfg.sample_period;
                                double p;
                                if (cfg.pulse == risbeam::Pulse::delta)
                                    p = std::abs(t) < 1e-9 ? 1.0 : 0.0;
                                else
                                    p = t == 0.0 ? 1.0 : std::sin(M_PI * t) / (M_PI * t);
                                acc += ray.gain * std::exp(cplx(0.0, phase)) * p *
                                       std::exp(cplx(0.0, -two_pi * k * d / K));
                            }
                        h(x + g.mx * (y + g.my * z), k) = std::sqrt(static_cast<double>(M) / cfg.path_loss) * acc;
                    }
        }
        return h;
    }

    // K-point DFT of an explicit tap sequence taps[d][m].
    inline risbeam::cmat dft_of_taps(const std::vector<std::vector<cplx>> &taps, int K)
    {
        const int D = static_cast<int>(taps.size());
        const int M = static_cast<int>(taps.front().size());
        risbeam::cmat h(M, K);
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
            {
                cplx acc(0.0, 0.0);
                for (int d = 0; d < D; ++d)
                    acc += taps[d][m] * std::exp(cplx(0.0, -two_pi * k * d / K));
                h(m, k) = acc;
            }
        return h;
    }

    // Rates of every codeword by explicit loops, and the first argmax.
    inline risbeam::RateVector brute_force_search(const risbeam::cmat &c, const risbeam::cmat &codebook, double snr)
    {
        risbeam::RateVector out;
        const auto M = c.rows();
        const auto K = c.cols();
        for (Eigen::Index n = 0; n < codebook.cols(); ++n)
        {
            double sum = 0.0;
            for (Eigen::Index k = 0; k < K; ++k)
            {
                cplx g(0.0, 0.0);
                for (Eigen::Index m = 0; m < M; ++m)
                    g += c(m, k) * codebook(m, n);
                sum += std::log2(1.0 + snr * std::norm(g));
            }
            out.rates.push_back(sum / static_cast<double>(K));
        }
        out.best_index = 0;
        for (std::size_t n = 1; n < out.rates.size(); ++n)
            if (out.rates[n] > out.rates[out.best_index])
                out.best_index = static_cast<int>(n);
        out.best_rate = out.rates[out.best_index];
        return out;
    }

    // Cascade form: y_k = (h_r,k . h_t,k)^T psi s_k + n_k
    inline risbeam::cvec cascade_form(const risbeam::ChannelRealization &r, const risbeam::cvec &psi,
                                      const risbeam::cvec &s, const risbeam::cvec &n)
    {
        risbeam::cvec y(r.h_t.cols());
        for (Eigen::Index k = 0; k < r.h_t.cols(); ++k)
        {
            cplx acc(0.0, 0.0);
            for (Eigen::Index m = 0; m < r.h_t.rows(); ++m)
                acc += r.h_r(m, k) * r.h_t(m, k) * psi(m);
            y(k) = acc * s(k) + n(k);
        }
        return y;
    }

    inline risbeam::cmat random_cmat(Eigen::Index rows, Eigen::Index cols, std::mt19937_64 &rng)
    {
        std::normal_distribution<double> n(0.0, 1.0);
        risbeam::cmat m(rows, cols);
        for (Eigen::Index c = 0; c < cols; ++c)
            for (Eigen::Index r = 0; r < rows; ++r)
            {
                const double re = n(rng);
                const double im = n(rng);
                m(r, c) = cplx(re, im);
            }
        return m;
    }

    inline risbeam::cvec random_phases(Eigen::Index size, std::mt19937_64 &rng)
    {
        std::uniform_real_distribution<double> u(0.0, two_pi);
        risbeam::cvec v(size);
        for (Eigen::Index i = 0; i < size; ++i)
            v(i) = std::polar(1.0, u(rng));
        return v;
    }

    inline double max_relative_error(const risbeam::cmat &a, const risbeam::cmat &b)
    {
        const double scale = std::max(b.cwiseAbs().maxCoeff(), 1e-300);
        return (a - b).cwiseAbs().maxCoeff() / scale;
    }

    // Central finite differences of the full loss w.r.t. every parameter,
    // compared with an analytic gradient. Returns the max relative error
    // |a - f| / max(|a|, |f|, floor).
    inline double gradient_check(const risbeam::MlpModel &model, const risbeam::rvec &x, const risbeam::rvec &t,
                                 double l2, const risbeam::Gradients &analytic, double step = 1e-5)
    {
        risbeam::MlpModel probe = model;
        auto objective = [&](const risbeam::MlpModel &m) {
            return risbeam::loss(risbeam::forward(m, x, false), t, m, l2);
        };
        double worst = 0.0;
        auto compare = [&](double a, double f) {
            const double denom = std::max({std::abs(a), std::abs(f), 1e-7});
            worst = std::max(worst, std::abs(a - f) / denom);
        };
        for (std::size_t l = 0; l < probe.layers.size(); ++l)
        {
            auto &W = probe.layers[l].weights;
            for (Eigen::Index r = 0; r < W.rows(); ++r)
                for (Eigen::Index c = 0; c < W.cols(); ++c)
                {
                    const double keep = W(r, c);
                    W(r, c) = keep + step;
                    const double up = objective(probe);
                    W(r, c) = keep - step;
                    const double down = objective(probe);
                    W(r, c) = keep;
                    compare(analytic.layers[l].weights(r, c), (up - down) / (2.0 * step));
                }
            auto &b = probe.layers[l].bias;
            for (Eigen::Index r = 0; r < b.size(); ++r)
            {
                const double keep = b(r);
                b(r) = keep + step;
                const double up = objective(probe);
                b(r) = keep - step;
                const double down = objective(probe);
                b(r) = keep;
                compare(analytic.layers[l].bias(r), (up - down) / (2.0 * step));
            }
        }
        return worst;
    }
}
