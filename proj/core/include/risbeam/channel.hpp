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
#include <stdexcept>
#include <string>
#include <vector>

#include "risbeam/types.hpp"

namespace risbeam
{
    // Uniform planar array, element (mx, my, mz) flattened x-fastest:
    // index = mx + Mx * (my + My * mz)
    struct ArrayGeometry
    {
        int mx = 1;
        int my = 1;
        int mz = 1;
        double spacing = 0.5; // in wavelengths

        int size() const { return mx * my * mz; }
        void validate() const;
        bool operator==(const ArrayGeometry &) const = default;
    };

    struct RayPath
    {
        double azimuth = 0.0;   // radians
        double elevation = 0.0; // radians
        cplx gain{1.0, 0.0};
        double delay = 0.0; // seconds
    };

    enum class Pulse
    {
        sinc,
        delta
    };

    struct ScenarioConfig
    {
        ArrayGeometry geometry;
        int num_paths = 1;           // L
        int num_subcarriers = 16;    // K
        int num_taps = 4;            // D
        double sample_period = 1e-8; // T_s
        double path_loss = 1.0;      // rho_T
        Pulse pulse = Pulse::sinc;
        double trajectory_step = 0.01;

        void validate() const;
    };

    // h_t: transmitter -> RIS, h_r: RIS -> receiver. Both M x K, column k per subcarrier.
    struct ChannelRealization
    {
        cmat h_t;
        cmat h_r;

        int elements() const { return static_cast<int>(h_t.rows()); }
        int subcarriers() const { return static_cast<int>(h_t.cols()); }
    };

    struct ChannelSequence
    {
        std::vector<ChannelRealization> realizations;
        std::uint64_t seed = 0;
        ScenarioConfig meta;

        std::size_t size() const { return realizations.size(); }
    };

    // Wraps an angle into [0, 2*pi).
    double wrap_angle(double radians);

    // Sampled pulse shape p(t) for tap period T_s.
    double pulse_shape(Pulse pulse, double t, double sample_period);

    // Steering vector of a UPA, length M, unit-modulus entries.
    cvec array_response(const ArrayGeometry &geometry, double azimuth, double elevation);

    // Frequency-domain geometric channel, M x K:
    //   h_k = sqrt(M / rho) * sum_d sum_l alpha_l a(theta_l, phi_l) p(d T_s - tau_l) exp(-j 2 pi k d / K)
    // Throws std::invalid_argument when a delay falls outside [0, D * T_s).
    cmat generate_channel(const ScenarioConfig &config, std::span<const RayPath> rays, int subcarrier_count);

    // Draws L rays with uniform angles, CN(0, 1/L) gains and delays inside the tap window.
    std::vector<RayPath> draw_rays(const ScenarioConfig &config, std::uint64_t seed);

    // Advances a ray set by one trajectory step: angles get N(0, step^2) drift,
    // gains follow a stationary AR(1) update with innovation weight min(step, 1)
    // and delays a reflected random walk of scale step * T_s.
    std::vector<RayPath> drift_rays(const ScenarioConfig &config, std::span<const RayPath> rays, std::uint64_t seed);

    // Correlated sequence of realizations; each link has its own ray set.
    ChannelSequence sample_trajectory(const ScenarioConfig &config, int length, std::uint64_t seed);

    // Thrown by ingest_channels.
    class ChannelFileError : public std::runtime_error
    {
    public:
        enum class Kind
        {
            io,
            malformed_header,
            truncated_payload,
            non_finite_value
        };

        ChannelFileError(Kind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
        Kind kind() const { return kind_; }

    private:
        Kind kind_;
    };

    // Binary little-endian container: "RISC1\0", uint32 M, K, S, then per
    // sample h_t and h_r as interleaved (re, im) doubles in column-major order.
    void export_channels(const ChannelSequence &sequence, const std::filesystem::path &path);
    ChannelSequence ingest_channels(const std::filesystem::path &path);
}
