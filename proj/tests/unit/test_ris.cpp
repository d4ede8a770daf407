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

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "risbeam/ris.hpp"

using namespace risbeam;

namespace
{
    ChannelRealization random_realization(int M, int K, std::mt19937_64 &rng)
    {
        return {oracle::random_cmat(M, K, rng), oracle::random_cmat(M, K, rng)};
    }

    Codebook random_codebook(int M, int P, std::mt19937_64 &rng)
    {
        Codebook cb;
        cb.vectors.resize(M, P);
        for (int n = 0; n < P; ++n)
            cb.vectors.col(n) = oracle::random_phases(M, rng);
        return cb;
    }

    cvec column_vector(std::initializer_list<cplx> values)
    {
        cvec v(static_cast<Eigen::Index>(values.size()));
        Eigen::Index i = 0;
        for (const auto &x : values)
            v(i++) = x;
        return v;
    }
}

TEST_CASE("cascade hand examples")
{
    ChannelRealization ones{cmat::Ones(2, 1), cmat::Ones(2, 1)};
    CHECK(cascade(ones) == cmat::Ones(2, 1));

    const cplx j(0.0, 1.0);
    ChannelRealization r{column_vector({1.0, j}), column_vector({j, j})};
    const cmat c = cascade(r);
    CHECK(c(0, 0) == j);
    CHECK(c(1, 0) == cplx(-1.0, 0.0));
}

TEST_CASE("cascade matches entrywise products")
{
    std::mt19937_64 rng(1);
    const auto r = random_realization(4, 3, rng);
    const cmat c = cascade(r);
    for (int m = 0; m < 4; ++m)
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(c(m, k) - r.h_t(m, k) * r.h_r(m, k)) <= 1e-15 * std::abs(c(m, k)));
    ChannelRealization bad{cmat::Ones(2, 1), cmat::Ones(3, 1)};
    CHECK_THROWS_AS(cascade(bad), std::invalid_argument);
}

TEST_CASE("received_signal hand examples")
{
    ChannelRealization r{cmat::Ones(1, 1), cmat::Ones(1, 1)};
    const cvec y = received_signal(r, cvec::Ones(1), column_vector({2.0}), cvec::Zero(1));
    CHECK(y(0) == cplx(2.0, 0.0));

    std::mt19937_64 rng(2);
    const auto big = random_realization(5, 4, rng);
    const cvec noise = oracle::random_cmat(4, 1, rng);
    const cvec out = received_signal(big, oracle::random_phases(5, rng), cvec::Zero(4), noise);
    CHECK(out == noise);
}

TEST_CASE("received_signal equals the cascade form")
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> Md(1, 16), Kd(1, 8);
    for (int trial = 0; trial < 100; ++trial)
    {
        const int M = Md(rng), K = Kd(rng);
        const auto r = random_realization(M, K, rng);
        const cvec psi = oracle::random_phases(M, rng);
        const cvec s = oracle::random_cmat(K, 1, rng);
        const cvec n = oracle::random_cmat(K, 1, rng);
        const cvec lib = received_signal(r, psi, s, n);
        const cvec ref = oracle::cascade_form(r, psi, s, n);
        REQUIRE((lib - ref).norm() <= 1e-12 * ref.norm());
    }
}

TEST_CASE("received_signal rejects non unit-modulus interaction vectors")
{
    ChannelRealization r{cmat::Ones(2, 1), cmat::Ones(2, 1)};
    cvec psi = cvec::Ones(2);
    psi(1) = 0.5;
    CHECK_THROWS_AS(received_signal(r, psi, cvec::Ones(1), cvec::Zero(1)), std::invalid_argument);
}

TEST_CASE("achievable_rate closed forms")
{
    LinkBudget unit{1.0, 1.0, 1};
    CHECK(achievable_rate(cmat::Zero(3, 1), cvec::Ones(3), unit) == 0.0);
    CHECK(achievable_rate(cmat::Ones(1, 1), cvec::Ones(1), unit) == Catch::Approx(1.0).epsilon(1e-15));

    // SNR = P_T / (K sigma^2) = 6 / (2 * 1) = 3
    LinkBudget three{6.0, 1.0, 2};
    CHECK(three.snr() == 3.0);
    CHECK(achievable_rate(cmat::Ones(1, 2), cvec::Ones(1), three) == Catch::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(achievable_rate(cmat::Ones(1, 3), cvec::Ones(1), three), std::invalid_argument);
}

TEST_CASE("achievable_rate is invariant to a global phase")
{
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> beta(0.0, 2.0 * pi);
    LinkBudget b{2.0, 0.5, 4};
    for (int trial = 0; trial < 50; ++trial)
    {
        const cmat c = oracle::random_cmat(8, 4, rng);
        const cvec psi = oracle::random_phases(8, rng);
        const double base = achievable_rate(c, psi, b);
        const double rotated = achievable_rate(c, std::polar(1.0, beta(rng)) * psi, b);
        CHECK(std::abs(base - rotated) <= 1e-12 * std::max(1.0, base));
    }
}

TEST_CASE("achievable_rate increases strictly with power")
{
    std::mt19937_64 rng(5);
    const cmat c = oracle::random_cmat(6, 3, rng);
    const cvec psi = oracle::random_phases(6, rng);
    double prev = 0.0;
    for (double p : {0.1, 0.2, 1.0, 10.0, 1e3})
    {
        const double r = achievable_rate(c, psi, {p, 1.0, 3});
        CHECK(r > prev);
        prev = r;
    }
}

TEST_CASE("exhaustive_search trivial cases")
{
    std::mt19937_64 rng(6);
    const cmat c = oracle::random_cmat(4, 2, rng);
    const auto single = exhaustive_search(c, random_codebook(4, 1, rng), {1.0, 1.0, 2});
    CHECK(single.best_index == 0);
    REQUIRE(single.rates.size() == 1);
}

TEST_CASE("exhaustive_search picks the phase-conjugate beam for K = 1")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial)
    {
        const cmat c = oracle::random_cmat(4, 1, rng);
        Codebook cb = random_codebook(4, 16, rng);
        const int slot = static_cast<int>(rng() % 16);
        for (int m = 0; m < 4; ++m)
            cb.vectors(m, slot) = std::polar(1.0, -std::arg(c(m, 0)));
        CHECK(exhaustive_search(c, cb, {1.0, 1.0, 1}).best_index == slot);
    }
}

TEST_CASE("exhaustive_search matches a brute-force loop")
{
    std::mt19937_64 rng(0);
    {
        const cmat c = oracle::random_cmat(4, 2, rng);
        const auto cb = random_codebook(4, 8, rng);
        LinkBudget b{1.0, 1.0, 2};
        const auto lib = exhaustive_search(c, cb, b);
        const auto ref = oracle::brute_force_search(c, cb.vectors, b.snr());
        CHECK(lib.best_index == ref.best_index);
        for (std::size_t n = 0; n < ref.rates.size(); ++n)
            CHECK(std::abs(lib.rates[n] - ref.rates[n]) <= 1e-12 * std::max(1.0, ref.rates[n]));
    }

    std::uniform_int_distribution<int> Md(1, 16), Pd(1, 64), Kd(1, 8);
    for (int trial = 0; trial < 50; ++trial)
    {
        const int M = Md(rng), P = Pd(rng), K = Kd(rng);
        const cmat c = oracle::random_cmat(M, K, rng);
        const auto cb = random_codebook(M, P, rng);
        LinkBudget b{1.0 + trial, 0.5, K};
        const auto lib = exhaustive_search(c, cb, b);
        const auto ref = oracle::brute_force_search(c, cb.vectors, b.snr());
        REQUIRE(lib.best_index == ref.best_index);
        CHECK(lib.best_rate == lib.rates[lib.best_index]);
        for (std::size_t n = 0; n < ref.rates.size(); ++n)
            REQUIRE(std::abs(lib.rates[n] - ref.rates[n]) <= 1e-12 * std::max(1.0, ref.rates[n]));
    }
}

TEST_CASE("every codeword is bounded by the search optimum")
{
    std::mt19937_64 rng(8);
    const cmat c = oracle::random_cmat(16, 4, rng);
    const auto cb = build_dft_codebook({1, 4, 4, 0.5}, 32);
    LinkBudget b{4.0, 1.0, 4};
    const auto best = exhaustive_search(c, cb, b);
    for (int n = 0; n < cb.size(); ++n)
        CHECK(achievable_rate(c, cb.vectors.col(n), b) <= best.best_rate);
}

TEST_CASE("exhaustive_search is permutation equivariant")
{
    std::mt19937_64 rng(9);
    const cmat c = oracle::random_cmat(8, 3, rng);
    Codebook cb = random_codebook(8, 12, rng);
    cb.vectors.col(5) = cb.vectors.col(2); // a tie, to exercise the lowest-index rule
    LinkBudget b{1.0, 1.0, 3};
    const auto base = exhaustive_search(c, cb, b);

    std::vector<int> perm(12);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Codebook permuted;
    permuted.vectors.resize(8, 12);
    for (int n = 0; n < 12; ++n)
        permuted.vectors.col(n) = cb.vectors.col(perm[n]);
    const auto moved = exhaustive_search(c, permuted, b);

    for (int n = 0; n < 12; ++n)
        CHECK(moved.rates[n] == base.rates[perm[n]]);
    int expected = 0;
    for (int n = 1; n < 12; ++n)
        if (moved.rates[n] > moved.rates[expected])
            expected = n;
    CHECK(moved.best_index == expected);
    CHECK(moved.best_rate == base.best_rate);
}

TEST_CASE("build_dft_codebook shapes")
{
    const auto one = build_dft_codebook({1, 1, 1, 0.5}, 1);
    REQUIRE(one.size() == 1);
    CHECK(one.vectors(0, 0) == cplx(1.0, 0.0));

    const auto four = build_dft_codebook({1, 4, 1, 0.5}, 4);
    const cmat g4 = four.vectors.adjoint() * four.vectors;
    CHECK((g4 - 4.0 * cmat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);

    const auto sixteen = build_dft_codebook({1, 4, 4, 0.5}, 16);
    const cmat g16 = sixteen.vectors.adjoint() * sixteen.vectors;
    CHECK((g16 - 16.0 * cmat::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-10);

    for (int size : {3, 7, 16, 40, 64, 100})
    {
        const auto cb = build_dft_codebook({1, 8, 8, 0.5}, size);
        CHECK(cb.size() == size);
        CHECK(cb.elements() == 64);
        CHECK_NOTHROW(cb.validate());
        for (int n = 0; n < size; ++n)
            CHECK(is_unit_modulus(cb.vectors.col(n)));
    }
    CHECK_THROWS_AS(build_dft_codebook({1, 4, 4, 0.5}, 0), std::invalid_argument);
}

TEST_CASE("select_active_elements")
{
    CHECK(select_active_elements(4, 4, 123).active_indices == std::vector<int>{0, 1, 2, 3});

    const auto a = select_active_elements(1024, 8, 99);
    const auto b = select_active_elements(1024, 8, 99);
    CHECK(a.active_indices == b.active_indices);
    CHECK_NOTHROW(a.validate(1024));
    CHECK(std::is_sorted(a.active_indices.begin(), a.active_indices.end()));

    CHECK_THROWS_AS(select_active_elements(4, 5, 0), std::invalid_argument);
    CHECK_THROWS_AS(select_active_elements(4, 0, 0), std::invalid_argument);
}

TEST_CASE("select_active_elements is uniform across seeds")
{
    const int M = 1024, m_bar = 8, seeds = 1000;
    std::vector<int> hits(M, 0);
    for (int s = 0; s < seeds; ++s)
        for (int idx : select_active_elements(M, m_bar, s).active_indices)
            ++hits[idx];
    const double p = static_cast<double>(m_bar) / M;
    const double mean = seeds * p;
    const double sigma = std::sqrt(seeds * p * (1.0 - p));
    int outside = 0;
    for (int h : hits)
        if (std::abs(h - mean) > 3.0 * sigma)
            ++outside;
    // 3 sigma leaves ~0.3% of a fair sampler's counts outside; allow for that tail
    INFO(outside << " of " << M << " indices outside 3 sigma");
    CHECK(outside <= 10);
}

TEST_CASE("sampled_channel gathers active rows of the cascade")
{
    std::mt19937_64 rng(10);
    const auto r = random_realization(6, 3, rng);
    const cmat full = cascade(r);

    SelectionMatrix all{{0, 1, 2, 3, 4, 5}};
    CHECK(sampled_channel(all, r).h_bar == full);

    const auto two = random_realization(2, 4, rng);
    SelectionMatrix first{{0}};
    CHECK(sampled_channel(first, two).h_bar == cascade(two).row(0));

    SelectionMatrix pick{{1, 3, 4}};
    const cmat h = sampled_channel(pick, r).h_bar;
    REQUIRE(h.rows() == 3);
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
        {
            const cplx ref = r.h_t(pick.active_indices[i], k) * r.h_r(pick.active_indices[i], k);
            CHECK(std::abs(h(i, k) - ref) <= 1e-15 * std::abs(ref));
        }

    SelectionMatrix outside{{0, 6}};
    CHECK_THROWS_AS(sampled_channel(outside, r), std::out_of_range);
}

TEST_CASE("estimate_sampled_channel")
{
    std::mt19937_64 rng(12);
    const auto r = random_realization(8, 4, rng);
    SelectionMatrix sel{{0, 2, 5}};
    const cmat exact = sampled_channel(sel, r).h_bar;

    CHECK(estimate_sampled_channel(sel, r, std::numeric_limits<double>::infinity(), 1).h_bar == exact);

    const cmat noisy = estimate_sampled_channel(sel, r, 0.0, 1).h_bar;
    CHECK(noisy == estimate_sampled_channel(sel, r, 0.0, 1).h_bar);
    CHECK(noisy != exact);

    // Estimation error shrinks as the pilot SNR grows
    const double err_low = (estimate_sampled_channel(sel, r, 0.0, 2).h_bar - exact).norm();
    const double err_high = (estimate_sampled_channel(sel, r, 40.0, 2).h_bar - exact).norm();
    CHECK(err_high < err_low);
    CHECK_THROWS_AS(estimate_sampled_channel(sel, r, std::nan(""), 1), std::invalid_argument);
}
