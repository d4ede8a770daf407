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

#include "risbeam/channel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "risbeam/seeds.hpp"

namespace risbeam
{
    void ArrayGeometry::validate() const
    {
        if (mx < 1 || my < 1 || mz < 1)
            throw std::invalid_argument("ArrayGeometry: every dimension must be >= 1");
        if (!(spacing > 0.0) || !std::isfinite(spacing))
            throw std::invalid_argument("ArrayGeometry: spacing must be positive");
    }

    void ScenarioConfig::validate() const
    {
        geometry.validate();
        if (num_paths < 1)
            throw std::invalid_argument("ScenarioConfig: num_paths must be >= 1");
        if (num_subcarriers < 1)
            throw std::invalid_argument("ScenarioConfig: num_subcarriers must be >= 1");
        if (num_taps < 1)
            throw std::invalid_argument("ScenarioConfig: num_taps must be >= 1");
        if (!(sample_period > 0.0))
            throw std::invalid_argument("ScenarioConfig: sample_period must be positive");
        if (!(path_loss > 0.0))
            throw std::invalid_argument("ScenarioConfig: path_loss must be positive");
        if (!(trajectory_step >= 0.0) || !std::isfinite(trajectory_step))
            throw std::invalid_argument("ScenarioConfig: trajectory_step must be finite and >= 0");
    }

    double wrap_angle(double radians)
    {
        double w = std::fmod(radians, 2.0 * pi);
        if (w < 0.0)
            w += 2.0 * pi;
        if (w >= 2.0 * pi) // fmod rounding on tiny negatives
            w = 0.0;
        return w;
    }

    double pulse_shape(Pulse pulse, double t, double sample_period)
    {
        const double x = t / sample_period;
        if (pulse == Pulse::delta)
            return std::abs(x) < 1e-9 ? 1.0 : 0.0;
        if (x == 0.0)
            return 1.0;
        return std::sin(pi * x) / (pi * x);
    }

    cvec array_response(const ArrayGeometry &geometry, double azimuth, double elevation)
    {
        geometry.validate();
        const double az = wrap_angle(azimuth);
        const double el = wrap_angle(elevation);

        // Phase increment per element along each axis
        const double kx = 2.0 * pi * geometry.spacing * std::cos(el) * std::cos(az);
        const double ky = 2.0 * pi * geometry.spacing * std::cos(el) * std::sin(az);
        const double kz = 2.0 * pi * geometry.spacing * std::sin(el);

        cvec a(geometry.size());
        Eigen::Index i = 0;
        for (int z = 0; z < geometry.mz; ++z)
            for (int y = 0; y < geometry.my; ++y)
                for (int x = 0; x < geometry.mx; ++x)
                    a(i++) = std::polar(1.0, kx * x + ky * y + kz * z);
        return a;
    }

    cmat generate_channel(const ScenarioConfig &config, std::span<const RayPath> rays, int subcarrier_count)
    {
        config.validate();
        if (rays.empty())
            throw std::invalid_argument("generate_channel: at least one ray is required");
        if (subcarrier_count < 1)
            throw std::invalid_argument("generate_channel: subcarrier_count must be >= 1");

        const double window = config.num_taps * config.sample_period;
        for (const auto &ray : rays)
        {
            if (!(ray.delay >= 0.0) || !(ray.delay < window))
            {
                std::ostringstream msg;
                msg << "generate_channel: ray delay " << ray.delay << " s outside tap window [0, " << window << ")";
                throw std::invalid_argument(msg.str());
            }
        }

        const Eigen::Index M = config.geometry.size();
        const int D = config.num_taps;
        const int K = subcarrier_count;

        // Time-domain taps: taps.col(d) = sum_l alpha_l a_l p(d T_s - tau_l)
        cmat taps = cmat::Zero(M, D);
        for (const auto &ray : rays)
        {
            const cvec a = array_response(config.geometry, ray.azimuth, ray.elevation);
            for (int d = 0; d < D; ++d)
            {
                const double p = pulse_shape(config.pulse, d * config.sample_period - ray.delay, config.sample_period);
                if (p != 0.0)
                    taps.col(d) += (ray.gain * p) * a;
            }
        }

        // K-point DFT over the tap index
        cmat twiddle(D, K);
        for (int d = 0; d < D; ++d)
            for (int k = 0; k < K; ++k)
            {
                // reduce k*d mod K first so the phase stays exact for large products
                const long long kd = (static_cast<long long>(k) * d) % K;
                twiddle(d, k) = std::polar(1.0, -2.0 * pi * static_cast<double>(kd) / K);
            }

        const double scale = std::sqrt(static_cast<double>(M) / config.path_loss);
        return scale * (taps * twiddle);
    }

    namespace
    {
        double draw_delay(const ScenarioConfig &config, Rng &rng)
        {
            // Keep the first arrival inside the first D-1 taps
            const double span = std::max(config.num_taps - 1, 0) * config.sample_period;
            std::uniform_real_distribution<double> u(0.0, 1.0);
            return span * u(rng);
        }

        double reflect_into(double value, double hi)
        {
            // Reflect into [0, hi); hi > 0
            if (hi <= 0.0)
                return 0.0;
            const double period = 2.0 * hi;
            double v = std::fmod(value, period);
            if (v < 0.0)
                v += period;
            if (v >= hi)
                v = period - v;
            if (v >= hi) // v == hi after reflection
                v = std::nextafter(hi, 0.0);
            return v;
        }
    }

    std::vector<RayPath> draw_rays(const ScenarioConfig &config, std::uint64_t seed)
    {
        config.validate();
        Rng rng = make_rng(seed);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
        std::normal_distribution<double> normal(0.0, 1.0);
        const double gain_sigma = std::sqrt(0.5 / config.num_paths);

        std::vector<RayPath> rays(config.num_paths);
        for (auto &ray : rays)
        {
            ray.azimuth = angle(rng);
            ray.elevation = angle(rng);
            const double re = normal(rng);
            const double im = normal(rng);
            ray.gain = cplx(gain_sigma * re, gain_sigma * im);
            ray.delay = draw_delay(config, rng);
        }
        return rays;
    }

    std::vector<RayPath> drift_rays(const ScenarioConfig &config, std::span<const RayPath> rays, std::uint64_t seed)
    {
        const double step = config.trajectory_step;
        std::vector<RayPath> next(rays.begin(), rays.end());
        if (step == 0.0)
            return next;

        Rng rng = make_rng(seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        const double innovation = std::min(step, 1.0);
        const double keep = std::sqrt(1.0 - innovation * innovation);
        const double gain_sigma = std::sqrt(0.5 / config.num_paths);
        const double window = config.num_taps * config.sample_period;

        for (auto &ray : next)
        {
            ray.azimuth = wrap_angle(ray.azimuth + step * normal(rng));
            ray.elevation = wrap_angle(ray.elevation + step * normal(rng));
            const double re = normal(rng);
            const double im = normal(rng);
            ray.gain = keep * ray.gain + innovation * cplx(gain_sigma * re, gain_sigma * im);
            ray.delay = reflect_into(ray.delay + step * config.sample_period * normal(rng), window);
        }
        return next;
    }

    ChannelSequence sample_trajectory(const ScenarioConfig &config, int length, std::uint64_t seed)
    {
        config.validate();
        if (length < 1)
            throw std::invalid_argument("sample_trajectory: length must be >= 1");

        ChannelSequence seq;
        seq.seed = seed;
        seq.meta = config;
        seq.realizations.reserve(length);

        auto tx_rays = draw_rays(config, derive_seed(seed, "tx-rays"));
        auto rx_rays = draw_rays(config, derive_seed(seed, "rx-rays"));
        for (int s = 0; s < length; ++s)
        {
            if (s > 0)
            {
                tx_rays = drift_rays(config, tx_rays, derive_seed(seed, "tx-drift", s));
                rx_rays = drift_rays(config, rx_rays, derive_seed(seed, "rx-drift", s));
            }
            ChannelRealization r;
            r.h_t = generate_channel(config, tx_rays, config.num_subcarriers);
            r.h_r = generate_channel(config, rx_rays, config.num_subcarriers);
            seq.realizations.push_back(std::move(r));
        }
        return seq;
    }
}
