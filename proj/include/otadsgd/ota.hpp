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

// Over-the-air gradient aggregation without transmitter CSI.
//
// Devices send alpha_t * packed gradient uncoded and simultaneously. The
// receiver knows every gain and combines the antennas with the conjugate of
// the device-summed gain:
//
//     y^n_i = (1/K) sum_k conj(sum_m h^n_{m,k,i}) y^n_{k,i}
//
// and scales the result by 1 / (alpha_t M sigma_h^2) to estimate the average
// gradient. As K grows, (1/K) sum_k |h|^2 hardens to sigma_h^2 and the
// cross-device interference and noise vanish.

#ifndef OTADSGD_OTA_HPP
#define OTADSGD_OTA_HPP

#include "otadsgd/channel.hpp"
#include "otadsgd/common.hpp"
#include "otadsgd/packing.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace otadsgd {

/// Transmit amplitude scaling alpha_t for iterations t = 1..T.
struct PowerSchedule {
    enum class Kind { constant, linear_ramp };

    Kind kind = Kind::linear_ramp;
    double alpha0 = 1.0;
    double slope = 1.0e-3;

    static PowerSchedule constant(double alpha) { return {Kind::constant, alpha, 0.0}; }
    static PowerSchedule ramp(double alpha0, double slope) { return {Kind::linear_ramp, alpha0, slope}; }

    double alpha(std::int64_t t) const {
        return kind == Kind::constant ? alpha0 : alpha0 + slope * static_cast<double>(t);
    }

    /// Throws unless alpha_t > 0 for every t in [1, T].
    void validate(std::int64_t iterations) const {
        if (!std::isfinite(alpha0) || !std::isfinite(slope))
            throw std::invalid_argument("power schedule: non-finite parameters");
        // alpha_t is affine in t, so checking the endpoints suffices.
        if (!(alpha(1) > 0.0) || !(alpha(iterations) > 0.0))
            throw std::invalid_argument("power schedule: alpha_t must stay positive over the run");
    }
};

/// Combiner output, s x N (column n is y^n).
template <typename Real>
using CombinedObservation = ComplexMatrixX<Real>;

/// Diagnostic split of the combiner output; the three parts sum to it.
template <typename Real>
struct Decomposition {
    ComplexMatrixX<Real> signal;
    ComplexMatrixX<Real> interference;
    ComplexMatrixX<Real> noise;

    ComplexMatrixX<Real> total() const { return signal + interference + noise; }
};

/// x^n_m = alpha_t g^n_m.
template <typename Derived>
SymbolBlocks<typename Derived::Scalar> transmit(const Eigen::MatrixBase<Derived>& gradient, double alpha_t,
                                                Index s) {
    using Real = typename Derived::Scalar;
    if (!(alpha_t > 0.0) || !std::isfinite(alpha_t))
        throw std::invalid_argument("transmit: alpha_t must be positive");
    return static_cast<Real>(alpha_t) * pack(gradient, s);
}

/// Sum over symbols of ||x^n||^2.
template <typename Real>
double symbol_energy(const SymbolBlocks<Real>& blocks) {
    return static_cast<double>(blocks.squaredNorm());
}

namespace detail {

template <typename Real>
void check_received(const ReceivedSignal<Real>& rx, const ChannelDims& dims) {
    if (static_cast<Index>(rx.symbols.size()) != dims.symbols)
        throw DimensionError("received symbol count does not match channel");
    for (const auto& y : rx.symbols) {
        if (y.rows() != dims.antennas || y.cols() != dims.subchannels)
            throw DimensionError("received block shape does not match channel");
    }
}

}  // namespace detail

/// Matched-sum combining across antennas.
template <typename Real>
CombinedObservation<Real> combine(const ReceivedSignal<Real>& rx, const ChannelRealization<Real>& h) {
    const ChannelDims& dims = h.dims;
    detail::check_received(rx, dims);

    CombinedObservation<Real> out(dims.subchannels, dims.symbols);
    const Real inv_k = Real(1) / static_cast<Real>(dims.antennas);
    for (Index n = 0; n < dims.symbols; ++n) {
        const ComplexMatrixX<Real> weights = h.summed_gain(n).conjugate();
        out.col(n) = (weights.cwiseProduct(rx.symbols[n])).colwise().sum().transpose() * inv_k;
    }
    return out;
}

/// Average-gradient estimate from the combiner output, length d.
template <typename Real>
VectorX<Real> estimate_average_gradient(const CombinedObservation<Real>& obs, double alpha_t, Index devices,
                                        double sigma_h_sq, Index d) {
    if (!(alpha_t > 0.0)) throw std::invalid_argument("estimate: alpha_t must be positive");
    if (!(sigma_h_sq > 0.0)) throw std::invalid_argument("estimate: sigma_h_sq must be positive");
    if (devices < 1) throw std::invalid_argument("estimate: device count must be at least 1");
    const Real scale = static_cast<Real>(1.0 / (alpha_t * static_cast<double>(devices) * sigma_h_sq));
    return unpack(obs * scale, d);
}

/// Splits the combiner output into its signal, interference and noise terms.
///
/// `packed[m]` is device m's unscaled packed gradient (s x N). Each term is
/// evaluated from its own defining sum, not by subtraction:
///   signal       = alpha sum_m ((1/K) sum_k |h_mk|^2) g_m
///   interference = (alpha/K) sum_k sum_m sum_{m' != m} conj(h_mk) h_m'k g_m'
///   noise        = (1/K) sum_k conj(sum_m h_mk) z_k
/// Diagnostic only: the receiver never sees per-device gradients.
template <typename Real>
Decomposition<Real> decompose(const std::vector<SymbolBlocks<Real>>& packed, const ChannelRealization<Real>& h,
                              const NoiseRealization<Real>& z, double alpha_t) {
    const ChannelDims& dims = h.dims;
    if (static_cast<Index>(packed.size()) != dims.devices)
        throw DimensionError("decompose: gradient count does not match channel");
    for (const auto& g : packed) {
        if (g.rows() != dims.subchannels || g.cols() != dims.symbols)
            throw DimensionError("decompose: packed gradient shape does not match channel");
    }
    detail::check_received(ReceivedSignal<Real>{z.noise}, dims);

    const Real alpha = static_cast<Real>(alpha_t);
    const Real inv_k = Real(1) / static_cast<Real>(dims.antennas);
    Decomposition<Real> parts{ComplexMatrixX<Real>::Zero(dims.subchannels, dims.symbols),
                              ComplexMatrixX<Real>::Zero(dims.subchannels, dims.symbols),
                              ComplexMatrixX<Real>::Zero(dims.subchannels, dims.symbols)};

    for (Index n = 0; n < dims.symbols; ++n) {
        for (Index m = 0; m < dims.devices; ++m) {
            const auto& hm = h.gain(n, m);
            const VectorX<Real> gain = hm.cwiseAbs2().colwise().sum().transpose() * inv_k;
            parts.signal.col(n) += alpha * gain.cwiseProduct(packed[m].col(n));

            for (Index mp = 0; mp < dims.devices; ++mp) {
                if (mp == m) continue;
                const ComplexMatrixX<Real> cross = hm.conjugate().cwiseProduct(h.gain(n, mp));
                parts.interference.col(n) +=
                    (alpha * inv_k) * cross.colwise().sum().transpose().cwiseProduct(packed[mp].col(n));
            }
        }
        parts.noise.col(n) =
            (h.summed_gain(n).conjugate().cwiseProduct(z.noise[n])).colwise().sum().transpose() * inv_k;
    }
    return parts;
}

/// Cross-device channel product
///   (1/K) sum_k sum_m sum_{m' != m} conj(h_mk) h_m'k
/// per (subchannel i, symbol n), as an s x N matrix. Zero when M = 1.
template <typename Real>
ComplexMatrixX<Real> interference_statistic(const ChannelRealization<Real>& h) {
    const ChannelDims& dims = h.dims;
    ComplexMatrixX<Real> stat = ComplexMatrixX<Real>::Zero(dims.subchannels, dims.symbols);
    const Real inv_k = Real(1) / static_cast<Real>(dims.antennas);
    for (Index n = 0; n < dims.symbols; ++n) {
        for (Index m = 0; m < dims.devices; ++m) {
            for (Index mp = 0; mp < dims.devices; ++mp) {
                if (mp == m) continue;
                stat.col(n) +=
                    h.gain(n, m).conjugate().cwiseProduct(h.gain(n, mp)).colwise().sum().transpose() * inv_k;
            }
        }
    }
    return stat;
}

/// Effective per-subchannel signal weight (1/K) sum_k |h^n_{m,k,i}|^2 of device m.
template <typename Real>
VectorX<Real> signal_gain(const ChannelRealization<Real>& h, Index n, Index m) {
    return h.gain(n, m).cwiseAbs2().colwise().sum().transpose() / static_cast<Real>(h.dims.antennas);
}

}  // namespace otadsgd

#endif  // OTADSGD_OTA_HPP
