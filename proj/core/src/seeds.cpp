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

#include "risbeam/seeds.hpp"

namespace risbeam
{
    std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    std::uint64_t derive_seed(std::uint64_t master, std::string_view label)
    {
        // FNV-1a over the label, then mixed with the master seed
        std::uint64_t h = 0xCBF29CE484222325ULL;
        for (unsigned char c : label)
        {
            h ^= c;
            h *= 0x100000001B3ULL;
        }
        return splitmix64(master ^ splitmix64(h));
    }

    std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index)
    {
        return splitmix64(derive_seed(master, label) + 0x632BE59BD9B4E019ULL * (index + 1));
    }
}
