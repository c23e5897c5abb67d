// SPDX-License-Identifier: Apache-2.0
//
// otadsgd: analog over-the-air distributed SGD simulator
// Copyright (C) 2026 The otadsgd authors
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

#include "otadsgd/channel.hpp"

#include <doctest.h>

#include <cmath>

using namespace otadsgd;
using cd = std::complex<double>;

namespace {

struct PooledMoments {
    double power = 0.0;
    double cross = 0.0;
    double cross_sq = 0.0;
    double count = 0.0;
};

PooledMoments pooled(const std::vector<ComplexMatrixX<double>>& mats) {
    PooledMoments p;
    for (const auto& m : mats) {
        for (Index j = 0; j < m.size(); ++j) {
            const cd x = m.data()[j];
            p.power += std::norm(x);
            p.cross += x.real() * x.imag();
            p.cross_sq += (x.real() * x.imag()) * (x.real() * x.imag());
            p.count += 1.0;
        }
    }
    return p;
}

}  // namespace

TEST_CASE("sample_channel is deterministic in the seed") {
    const ChannelDims dims{2, 3, 4, 5};
    const auto a = sample_channel(42, 7, dims, 1.0);
    const auto b = sample_channel(42, 7, dims, 1.0);
    const auto other_seed = sample_channel(43, 7, dims, 1.0);
    const auto other_iter = sample_channel(42, 8, dims, 1.0);
    REQUIRE(a.gains.size() == 6);
    for (std::size_t j = 0; j < a.gains.size(); ++j) {
        CHECK(a.gains[j] == b.gains[j]);
        CHECK(a.gains[j] != other_seed.gains[j]);
        CHECK(a.gains[j] != other_iter.gains[j]);
    }
}

TEST_CASE("each gain is keyed by its own indices, not by sampling order") {
    const auto small = sample_channel(9, 1, ChannelDims{1, 2, 3, 4}, 1.0);
    const auto large = sample_channel(9, 1, ChannelDims{2, 3, 3, 4}, 1.0);
    CHECK(small.gain(0, 0) == large.gain(0, 0));
    CHECK(small.gain(0, 1) == large.gain(0, 1));
}

TEST_CASE("channel gains have the configured second moment and circular symmetry") {
    const auto h = sample_channel(42, 1, ChannelDims{1, 10, 10, 10000}, 1.0);
    const PooledMoments p = pooled(h.gains);
    CHECK(p.count == 1.0e6);
    CHECK(std::abs(p.power / p.count - 1.0) < 0.01);
    const double mean_cross = p.cross / p.count;
    const double se = std::sqrt((p.cross_sq / p.count - mean_cross * mean_cross) / p.count);
    CHECK(std::abs(mean_cross) < 3.0 * se);

    const auto h2 = sample_channel(42, 1, ChannelDims{1, 10, 10, 10000}, 2.5);
    CHECK(std::abs(pooled(h2.gains).power / 1.0e6 - 2.5) < 0.025);
}

TEST_CASE("noise moments, determinism and the noiseless case") {
    const ChannelDims dims{1, 1, 100, 10000};
    const auto z = sample_noise(5, 3, dims, 20.0);
    CHECK(std::abs(pooled(z.noise).power / 1.0e6 - 20.0) < 0.2);
    CHECK(sample_noise(5, 3, dims, 20.0).noise[0] == z.noise[0]);

    const auto silent = sample_noise(5, 3, ChannelDims{2, 1, 3, 4}, 0.0);
    for (const auto& w : silent.noise) CHECK(w.isZero(0.0));
}

TEST_CASE("sampling rejects degenerate parameters") {
    CHECK_THROWS_AS(sample_channel(1, 1, ChannelDims{0, 1, 1, 1}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(sample_channel(1, 1, ChannelDims{1, 1, 0, 1}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(sample_channel(1, 1, ChannelDims{1, 1, 1, 1}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sample_channel(1, 1, ChannelDims{1, 1, 1, 1}, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(sample_noise(1, 1, ChannelDims{1, 1, 1, 1}, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(sample_channel(1, 0x80000000u, ChannelDims{1, 1, 1, 1}, 1.0), std::invalid_argument);
}

TEST_CASE("propagate: identity channel and two-device sum") {
    ChannelRealization<double> h;
    h.dims = {1, 1, 1, 1};
    h.gains = {ComplexMatrixX<double>::Constant(1, 1, cd(1, 0))};
    SymbolBlocks<double> x(1, 1);
    x << cd(0.3, -2.0);
    CHECK(propagate<double>({x}, h).symbols[0](0, 0) == cd(0.3, -2.0));

    ChannelRealization<double> h2;
    h2.dims = {1, 2, 1, 1};
    h2.gains = {ComplexMatrixX<double>::Constant(1, 1, cd(1, 0)), ComplexMatrixX<double>::Constant(1, 1, cd(0, 1))};
    SymbolBlocks<double> one(1, 1);
    one << cd(1, 0);
    CHECK(propagate<double>({one, one}, h2).symbols[0](0, 0) == cd(1, 1));
}

TEST_CASE("propagate matches an explicit entrywise sum") {
    const ChannelDims dims{2, 3, 4, 5};
    const auto h = sample_channel(11, 2, dims, 1.0);
    const auto z = sample_noise(11, 2, dims, 0.5);
    std::vector<SymbolBlocks<double>> tx;
    for (Index m = 0; m < dims.devices; ++m) tx.push_back(SymbolBlocks<double>::Random(dims.subchannels, dims.symbols));
    const auto rx = propagate(tx, h, z);
    for (Index n = 0; n < dims.symbols; ++n)
        for (Index k = 0; k < dims.antennas; ++k)
            for (Index i = 0; i < dims.subchannels; ++i) {
                cd expected = z.noise[n](k, i);
                for (Index m = 0; m < dims.devices; ++m) expected += h.gain(n, m)(k, i) * tx[m](i, n);
                CHECK(std::abs(rx.symbols[n](k, i) - expected) < 1e-13);
            }
}

TEST_CASE("propagate: zero signal returns the noise exactly, and is linear") {
    const ChannelDims dims{2, 2, 3, 4};
    const auto h = sample_channel(3, 1, dims, 1.0);
    const auto z = sample_noise(3, 1, dims, 2.0);
    const std::vector<SymbolBlocks<double>> silent(2, SymbolBlocks<double>::Zero(4, 2));
    const auto rx = propagate(silent, h, z);
    for (Index n = 0; n < 2; ++n) CHECK(rx.symbols[n] == z.noise[n]);

    std::vector<SymbolBlocks<double>> a, b, combo;
    const cd scale(0.7, -1.2);
    for (int m = 0; m < 2; ++m) {
        a.push_back(SymbolBlocks<double>::Random(4, 2));
        b.push_back(SymbolBlocks<double>::Random(4, 2));
        combo.push_back(scale * a.back() + b.back());
    }
    const auto ya = propagate(a, h), yb = propagate(b, h), yc = propagate(combo, h);
    for (Index n = 0; n < 2; ++n)
        CHECK((yc.symbols[n] - (scale * ya.symbols[n] + yb.symbols[n])).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("propagate rejects mismatched shapes") {
    const ChannelDims dims{1, 2, 2, 3};
    const auto h = sample_channel(1, 1, dims, 1.0);
    const auto z = sample_noise(1, 1, dims, 1.0);
    CHECK_THROWS_AS(propagate<double>({SymbolBlocks<double>::Zero(3, 1)}, h, z), DimensionError);
    CHECK_THROWS_AS(propagate<double>({SymbolBlocks<double>::Zero(3, 1), SymbolBlocks<double>::Zero(2, 1)}, h, z),
                    DimensionError);
    const auto z_wrong = sample_noise(1, 1, ChannelDims{1, 2, 3, 3}, 1.0);
    CHECK_THROWS_AS(propagate<double>({SymbolBlocks<double>::Zero(3, 1), SymbolBlocks<double>::Zero(3, 1)}, h, z_wrong),
                    DimensionError);
}

TEST_CASE("received symbols average to zero over independent realizations") {
    const ChannelDims dims{1, 2, 1, 1};
    SymbolBlocks<double> x(1, 1);
    x << cd(1.5, -0.5);
    const std::vector<SymbolBlocks<double>> tx{x, x};
    const int trials = 20000;
    double sum_re = 0, sum_im = 0, sq_re = 0, sq_im = 0;
    for (int t = 0; t < trials; ++t) {
        const auto h = sample_channel(77, static_cast<std::uint32_t>(t), dims, 1.0);
        const auto z = sample_noise(77, static_cast<std::uint32_t>(t), dims, 1.0);
        const cd y = propagate(tx, h, z).symbols[0](0, 0);
        sum_re += y.real();
        sum_im += y.imag();
        sq_re += y.real() * y.real();
        sq_im += y.imag() * y.imag();
    }
    const double mean_re = sum_re / trials, mean_im = sum_im / trials;
    CHECK(std::abs(mean_re) <= 4.0 * std::sqrt((sq_re / trials - mean_re * mean_re) / trials));
    CHECK(std::abs(mean_im) <= 4.0 * std::sqrt((sq_im / trials - mean_im * mean_im) / trials));
}
