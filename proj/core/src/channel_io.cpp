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

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "risbeam/channel.hpp"

namespace risbeam
{
    namespace
    {
        constexpr std::array<char, 6> magic = {'R', 'I', 'S', 'C', '1', '\0'};
        constexpr std::size_t header_bytes = magic.size() + 3 * sizeof(std::uint32_t);

        void put_u32(std::string &out, std::uint32_t v)
        {
            for (int i = 0; i < 4; ++i)
                out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
        }

        void put_f64(std::string &out, double v)
        {
            const auto bits = std::bit_cast<std::uint64_t>(v);
            for (int i = 0; i < 8; ++i)
                out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
        }

        std::uint32_t get_u32(const unsigned char *p)
        {
            std::uint32_t v = 0;
            for (int i = 0; i < 4; ++i)
                v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
            return v;
        }

        double get_f64(const unsigned char *p)
        {
            std::uint64_t v = 0;
            for (int i = 0; i < 8; ++i)
                v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
            return std::bit_cast<double>(v);
        }

        void put_matrix(std::string &out, const cmat &m)
        {
            // Eigen default storage is column-major
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                for (Eigen::Index r = 0; r < m.rows(); ++r)
                {
                    put_f64(out, m(r, c).real());
                    put_f64(out, m(r, c).imag());
                }
        }
    }

    void export_channels(const ChannelSequence &sequence, const std::filesystem::path &path)
    {
        if (sequence.realizations.empty())
            throw std::invalid_argument("export_channels: empty sequence");

        const auto M = sequence.realizations.front().h_t.rows();
        const auto K = sequence.realizations.front().h_t.cols();
        for (const auto &r : sequence.realizations)
            if (r.h_t.rows() != M || r.h_t.cols() != K || r.h_r.rows() != M || r.h_r.cols() != K)
                throw std::invalid_argument("export_channels: realizations do not share one shape");

        std::string buf;
        buf.reserve(header_bytes + sequence.size() * 2 * M * K * 16);
        buf.append(magic.data(), magic.size());
        put_u32(buf, static_cast<std::uint32_t>(M));
        put_u32(buf, static_cast<std::uint32_t>(K));
        put_u32(buf, static_cast<std::uint32_t>(sequence.size()));
        for (const auto &r : sequence.realizations)
        {
            put_matrix(buf, r.h_t);
            put_matrix(buf, r.h_r);
        }

        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw ChannelFileError(ChannelFileError::Kind::io, "cannot open " + path.string() + " for writing");
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (!out)
            throw ChannelFileError(ChannelFileError::Kind::io, "write failed: " + path.string());
    }

    ChannelSequence ingest_channels(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ChannelFileError(ChannelFileError::Kind::io, "cannot open " + path.string());
        const std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        const auto *bytes = reinterpret_cast<const unsigned char *>(raw.data());

        if (raw.size() < header_bytes || std::memcmp(raw.data(), magic.data(), magic.size()) != 0)
            throw ChannelFileError(ChannelFileError::Kind::malformed_header, "bad magic or short header in " + path.string());

        const std::uint32_t M = get_u32(bytes + 6);
        const std::uint32_t K = get_u32(bytes + 10);
        const std::uint32_t S = get_u32(bytes + 14);
        if (M == 0 || K == 0 || S == 0)
            throw ChannelFileError(ChannelFileError::Kind::malformed_header, "header declares an empty dimension");

        const std::uint64_t values = 2ULL * 2ULL * M * K * S; // two links, re+im
        const std::uint64_t expected = header_bytes + values * 8ULL;
        if (raw.size() != expected)
            throw ChannelFileError(ChannelFileError::Kind::truncated_payload,
                                   "payload is " + std::to_string(raw.size() - header_bytes) + " bytes, header implies " +
                                       std::to_string(expected - header_bytes));

        ChannelSequence seq;
        seq.meta.geometry = ArrayGeometry{static_cast<int>(M), 1, 1, 0.5};
        seq.meta.num_subcarriers = static_cast<int>(K);
        seq.realizations.resize(S);

        const unsigned char *p = bytes + header_bytes;
        auto read_matrix = [&](cmat &m) {
            m.resize(M, K);
            for (std::uint32_t c = 0; c < K; ++c)
                for (std::uint32_t r = 0; r < M; ++r)
                {
                    const double re = get_f64(p);
                    const double im = get_f64(p + 8);
                    p += 16;
                    if (!std::isfinite(re) || !std::isfinite(im))
                        throw ChannelFileError(ChannelFileError::Kind::non_finite_value,
                                               "non-finite channel value in " + path.string());
                    m(r, c) = cplx(re, im);
                }
        };
        for (auto &r : seq.realizations)
        {
            read_matrix(r.h_t);
            read_matrix(r.h_r);
        }
        return seq;
    }
}
