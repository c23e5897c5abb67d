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

// Rayleigh block-fading multiple-access channel to a K-antenna receiver.
//
// Gains and noise are i.i.d. circularly symmetric complex Gaussians, redrawn
// for every OFDM symbol and every iteration. Each scalar is keyed by
// (seed, iteration, stream, symbol, device, antenna, subchannel) through the
// Philox generator, so sampling order never changes a realization.

#ifndef OTADSGD_CHANNEL_HPP
#define OTADSGD_CHANNEL_HPP

#include "otadsgd/common.hpp"
#include "otadsgd/packing.hpp"
#include "otadsgd/philox.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace otadsgd {

struct ChannelDims {
    Index symbols = 1;      // N
    Index devices = 1;      // M
    Index antennas = 1;     // K
    Index subchannels = 1;  // s

    bool operator==(const ChannelDims&) const = default;
};

/// Gains h[n][m] as K x s matrices (row k = antenna, column i = subchannel).
template <typename Real = double>
struct ChannelRealization {
    ChannelDims dims;
    double sigma_h_sq = 1.0;
    std::vector<ComplexMatrixX<Real>> gains;  // index n * M + m

    const ComplexMatrixX<Real>& gain(Index n, Index m) const { return gains[n * dims.devices + m]; }
    ComplexMatrixX<Real>& gain(Index n, Index m) { return gains[n * dims.devices + m]; }

    /// Sum over devices of the K x s gain matrices for symbol n.
    ComplexMatrixX<Real> summed_gain(Index n) const {
        ComplexMatrixX<Real> total = gain(n, 0);
        for (Index m = 1; m < dims.devices; ++m) total += gain(n, m);
        return total;
    }
};

/// Receiver noise z[n] as K x s matrices.
template <typename Real = double>
struct NoiseRealization {
    ChannelDims dims;  // devices is unused
    double sigma_z_sq = 0.0;
    std::vector<ComplexMatrixX<Real>> noise;  // index n
};

/// Per-antenna received symbols y[n] as K x s matrices.
template <typename Real = double>
struct ReceivedSignal {
    std::vector<ComplexMatrixX<Real>> symbols;  // index n
};

namespace detail {

inline void check_dims(const ChannelDims& dims, std::uint32_t iteration) {
    if (iteration >= 0x80000000u) throw std::invalid_argument("channel: iteration index must be below 2^31");
    if (dims.symbols < 1 || dims.devices < 1 || dims.antennas < 1 || dims.subchannels < 1)
        throw std::invalid_argument("channel dimensions must all be at least 1");
    if (dims.symbols >= (Index{1} << 24))
        throw std::invalid_argument("channel: too many symbols for the RNG counter layout");
    if (dims.antennas * dims.subchannels > Index{std::numeric_limits<std::uint32_t>::max()})
        throw std::invalid_argument("channel: K * s exceeds the RNG counter layout");
}

inline std::uint32_t counter_word(StreamTag tag, Index n) {
    return (static_cast<std::uint32_t>(tag) << 24) | static_cast<std::uint32_t>(n);
}

}  // namespace detail

/// Draws all gains for one iteration.
template <typename Real = double>
ChannelRealization<Real> sample_channel(std::uint64_t seed, std::uint32_t iteration,
                                        const ChannelDims& dims, double sigma_h_sq) {
    detail::check_dims(dims, iteration);
    if (!(sigma_h_sq > 0.0)) throw std::invalid_argument("sample_channel: sigma_h_sq must be positive");

    ChannelRealization<Real> h;
    h.dims = dims;
    h.sigma_h_sq = sigma_h_sq;
    h.gains.reserve(static_cast<std::size_t>(dims.symbols * dims.devices));
    const PhiloxKey key = philox_key(seed);
    for (Index n = 0; n < dims.symbols; ++n) {
        const std::uint32_t c1 = detail::counter_word(StreamTag::channel, n);
        for (Index m = 0; m < dims.devices; ++m) {
            ComplexMatrixX<Real> g(dims.antennas, dims.subchannels);
            for (Index k = 0; k < dims.antennas; ++k) {
                for (Index i = 0; i < dims.subchannels; ++i) {
                    const auto c3 = static_cast<std::uint32_t>(k * dims.subchannels + i);
                    const auto block =
                        philox4x32({iteration, c1, static_cast<std::uint32_t>(m), c3}, key);
                    g(k, i) = std::complex<Real>(complex_normal_from_block(block, sigma_h_sq));
                }
            }
            h.gains.push_back(std::move(g));
        }
    }
    return h;
}

/// Draws all receiver noise for one iteration; sigma_z_sq == 0 gives exact zeros.
template <typename Real = double>
NoiseRealization<Real> sample_noise(std::uint64_t seed, std::uint32_t iteration, const ChannelDims& dims,
                                    double sigma_z_sq) {
    detail::check_dims(dims, iteration);
    if (!(sigma_z_sq >= 0.0)) throw std::invalid_argument("sample_noise: sigma_z_sq must be nonnegative");

    NoiseRealization<Real> z;
    z.dims = dims;
    z.sigma_z_sq = sigma_z_sq;
    z.noise.reserve(static_cast<std::size_t>(dims.symbols));
    const PhiloxKey key = philox_key(seed);
    for (Index n = 0; n < dims.symbols; ++n) {
        ComplexMatrixX<Real> w = ComplexMatrixX<Real>::Zero(dims.antennas, dims.subchannels);
        if (sigma_z_sq > 0.0) {
            const std::uint32_t c1 = detail::counter_word(StreamTag::noise, n);
            for (Index k = 0; k < dims.antennas; ++k) {
                for (Index i = 0; i < dims.subchannels; ++i) {
                    const auto block = philox4x32(
                        {iteration, c1, static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(i)}, key);
                    w(k, i) = std::complex<Real>(complex_normal_from_block(block, sigma_z_sq));
                }
            }
        }
        z.noise.push_back(std::move(w));
    }
    return z;
}

/// y[n] = sum_m h[n][m] (.) x_m[n] + z[n], entrywise per subchannel.
/// `tx[m]` is device m's s x N transmitted block matrix, already power-scaled.
template <typename Real>
ReceivedSignal<Real> propagate(const std::vector<SymbolBlocks<Real>>& tx, const ChannelRealization<Real>& h,
                               const NoiseRealization<Real>& z) {
    const ChannelDims& dims = h.dims;
    if (static_cast<Index>(tx.size()) != dims.devices)
        throw DimensionError("propagate: transmitter count does not match channel");
    for (const auto& x : tx) {
        if (x.rows() != dims.subchannels || x.cols() != dims.symbols)
            throw DimensionError("propagate: transmitted block shape does not match channel");
    }
    if (z.dims.symbols != dims.symbols || z.dims.antennas != dims.antennas ||
        z.dims.subchannels != dims.subchannels)
        throw DimensionError("propagate: noise shape does not match channel");

    ReceivedSignal<Real> rx;
    rx.symbols.reserve(static_cast<std::size_t>(dims.symbols));
    for (Index n = 0; n < dims.symbols; ++n) {
        ComplexMatrixX<Real> y = z.noise[n];
        for (Index m = 0; m < dims.devices; ++m)
            y.array() += h.gain(n, m).array().rowwise() * tx[m].col(n).transpose().array();
        rx.symbols.push_back(std::move(y));
    }
    return rx;
}

/// Noise-free variant of propagate.
template <typename Real>
ReceivedSignal<Real> propagate(const std::vector<SymbolBlocks<Real>>& tx, const ChannelRealization<Real>& h) {
    NoiseRealization<Real> silent;
    silent.dims = h.dims;
    silent.noise.assign(static_cast<std::size_t>(h.dims.symbols),
                        ComplexMatrixX<Real>::Zero(h.dims.antennas, h.dims.subchannels));
    return propagate(tx, h, silent);
}

}  // namespace otadsgd

#endif  // OTADSGD_CHANNEL_HPP
