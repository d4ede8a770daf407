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
#include <cstring>
#include <fstream>
#include <iterator>

#include "risbeam/mlp.hpp"

namespace risbeam
{
    namespace
    {
        constexpr std::array<char, 4> magic = {'R', 'I', 'S', 'M'};
        constexpr std::uint32_t version = 1;

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

        class Reader
        {
        public:
            explicit Reader(std::string data) : data_(std::move(data)) {}

            std::uint32_t u32()
            {
                need(4);
                std::uint32_t v = 0;
                for (int i = 0; i < 4; ++i)
                    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
                pos_ += 4;
                return v;
            }

            double f64()
            {
                need(8);
                std::uint64_t v = 0;
                for (int i = 0; i < 8; ++i)
                    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
                pos_ += 8;
                return std::bit_cast<double>(v);
            }

            bool done() const { return pos_ == data_.size(); }

        private:
            void need(std::size_t n) const
            {
                if (pos_ + n > data_.size())
                    throw std::runtime_error("load_model: checkpoint is truncated");
            }

            std::string data_;
            std::size_t pos_ = 4;
        };
    }

    void save_model(const MlpModel &model, const std::filesystem::path &path)
    {
        model.validate();
        std::string buf(magic.begin(), magic.end());
        put_u32(buf, version);
        const auto &widths = model.architecture.layer_widths;
        put_u32(buf, static_cast<std::uint32_t>(widths.size()));
        for (int w : widths)
            put_u32(buf, static_cast<std::uint32_t>(w));
        put_f64(buf, model.architecture.dropout_rate);
        for (const auto &layer : model.layers)
        {
            for (Eigen::Index r = 0; r < layer.weights.rows(); ++r)
                for (Eigen::Index c = 0; c < layer.weights.cols(); ++c)
                    put_f64(buf, layer.weights(r, c));
            for (Eigen::Index r = 0; r < layer.bias.size(); ++r)
                put_f64(buf, layer.bias(r));
        }

        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("save_model: cannot open " + path.string());
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (!out)
            throw std::runtime_error("save_model: write failed for " + path.string());
    }

    MlpModel load_model(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("load_model: cannot open " + path.string());
        std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        if (raw.size() < magic.size() || std::memcmp(raw.data(), magic.data(), magic.size()) != 0)
            throw std::runtime_error("load_model: not a model checkpoint: " + path.string());

        Reader rd(std::move(raw));
        const auto v = rd.u32();
        if (v != version)
            throw std::runtime_error("load_model: unsupported checkpoint version " + std::to_string(v));

        MlpModel model;
        const auto count = rd.u32();
        if (count < 2 || count > 64)
            throw std::runtime_error("load_model: implausible layer count " + std::to_string(count));
        for (std::uint32_t i = 0; i < count; ++i)
            model.architecture.layer_widths.push_back(static_cast<int>(rd.u32()));
        model.architecture.dropout_rate = rd.f64();
        model.architecture.validate();

        const auto &widths = model.architecture.layer_widths;
        for (std::size_t l = 0; l + 1 < widths.size(); ++l)
        {
            DenseLayer layer{rmat(widths[l + 1], widths[l]), rvec(widths[l + 1])};
            for (Eigen::Index r = 0; r < layer.weights.rows(); ++r)
                for (Eigen::Index c = 0; c < layer.weights.cols(); ++c)
                    layer.weights(r, c) = rd.f64();
            for (Eigen::Index r = 0; r < layer.bias.size(); ++r)
                layer.bias(r) = rd.f64();
            model.layers.push_back(std::move(layer));
        }
        if (!rd.done())
            throw std::runtime_error("load_model: trailing bytes after parameters");
        model.mode = Mode::infer;
        model.validate();
        return model;
    }
}
