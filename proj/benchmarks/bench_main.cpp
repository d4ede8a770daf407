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

#include <random>

#include <benchmark/benchmark.h>

#include "risbeam/channel.hpp"
#include "risbeam/dataset.hpp"
#include "risbeam/mlp.hpp"
#include "risbeam/ris.hpp"
#include "risbeam/seeds.hpp"

using namespace risbeam;

namespace
{
    cmat random_cmat(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed)
    {
        Rng rng = make_rng(seed);
        std::normal_distribution<double> n(0.0, 1.0);
        cmat m(rows, cols);
        for (Eigen::Index i = 0; i < m.size(); ++i)
        {
            const double re = n(rng);
            m.data()[i] = cplx(re, n(rng));
        }
        return m;
    }
}

// Oracle labelling cost: side x side RIS, side^2 beams, K subcarriers
static void BM_ExhaustiveSearch(benchmark::State &state)
{
    const int side = static_cast<int>(state.range(0));
    const int K = static_cast<int>(state.range(1));
    const ArrayGeometry g{1, side, side, 0.5};
    const auto codebook = build_dft_codebook(g, g.size());
    const cmat c = random_cmat(g.size(), K, 1);
    const LinkBudget budget{1.0, 1.0, K};
    for (auto _ : state)
        benchmark::DoNotOptimize(exhaustive_search(c, codebook, budget));
    state.SetItemsProcessed(state.iterations() * codebook.size());
}
BENCHMARK(BM_ExhaustiveSearch)->Args({8, 16})->Args({16, 16})->Args({32, 64});

static void BM_GenerateChannel(benchmark::State &state)
{
    ScenarioConfig c;
    const int side = static_cast<int>(state.range(0));
    c.geometry = {1, side, side, 0.5};
    c.num_paths = static_cast<int>(state.range(1));
    c.num_subcarriers = 64;
    const auto rays = draw_rays(c, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(generate_channel(c, rays, c.num_subcarriers));
}
BENCHMARK(BM_GenerateChannel)->Args({8, 1})->Args({32, 1})->Args({32, 5});

static void BM_SampleTrajectory(benchmark::State &state)
{
    ScenarioConfig c;
    c.geometry = {1, 8, 8, 0.5};
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_trajectory(c, 40, 5));
}
BENCHMARK(BM_SampleTrajectory);

static void BM_EncodeFeatures(benchmark::State &state)
{
    const SampledChannel s{random_cmat(8, 64, 2)};
    for (auto _ : state)
        benchmark::DoNotOptimize(encode_features(s, 64));
}
BENCHMARK(BM_EncodeFeatures);

static void BM_ForwardBatch(benchmark::State &state)
{
    const int t_s = static_cast<int>(state.range(0));
    const auto model = init_model(MlpArchitecture::desk_scale(t_s * 256, 64), 1);
    const rmat x = random_cmat(t_s * 256, 200, 3).real();
    for (auto _ : state)
        benchmark::DoNotOptimize(forward_batch(model, x));
    state.SetItemsProcessed(state.iterations() * x.cols());
}
BENCHMARK(BM_ForwardBatch)->Arg(1)->Arg(3);

// One optimizer step on a 32-sample mini-batch of the desk network
static void BM_TrainStep(benchmark::State &state)
{
    const int t_s = static_cast<int>(state.range(0));
    auto model = init_model(MlpArchitecture::desk_scale(t_s * 256, 64), 1);
    const rmat x = random_cmat(t_s * 256, 32, 4).real();
    const rmat t = random_cmat(64, 32, 5).real().cwiseAbs();
    Gradients grads = Gradients::zeros_like(model);
    SgdMomentum opt(model, 0.9);
    std::uint64_t seed = 0;
    for (auto _ : state)
    {
        const auto masks = draw_dropout_masks(model.architecture, x.cols(), seed++);
        benchmark::DoNotOptimize(loss_gradient(model, x, t, 1e-4, masks, grads));
        opt.step(model, grads, 1e-3);
    }
    state.SetItemsProcessed(state.iterations() * x.cols());
}
BENCHMARK(BM_TrainStep)->Arg(1)->Arg(3);

BENCHMARK_MAIN();
