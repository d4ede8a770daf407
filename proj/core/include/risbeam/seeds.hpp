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
#include <random>
#include <string_view>

namespace risbeam
{
    // Random engine used by every stochastic stage.
    using Rng = std::mt19937_64;

    // One round of the splitmix64 finalizer.
    std::uint64_t splitmix64(std::uint64_t x);

    // Derives an independent sub-seed from a master seed and a stage label,
    // e.g. derive_seed(master, "trajectory"). Stable across platforms.
    std::uint64_t derive_seed(std::uint64_t master, std::string_view label);
    std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index);

    inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }
}
