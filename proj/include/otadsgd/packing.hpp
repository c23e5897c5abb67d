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

// Mapping between a real gradient of length d and N = ceil(d / 2s) complex
// OFDM symbols of s subchannels each.
//
// The gradient is zero-padded to 2sN and cut into chunks of 2s entries. In
// chunk n the first s entries become the real parts of symbol n and the
// next s entries its imaginary parts. Symbols are stored as the columns of
// an s x N complex matrix.

#ifndef OTADSGD_PACKING_HPP
#define OTADSGD_PACKING_HPP

#include "otadsgd/common.hpp"

namespace otadsgd {

/// s x N matrix, column n is the payload of OFDM symbol n.
template <typename Real>
using SymbolBlocks = ComplexMatrixX<Real>;

template <typename Derived>
SymbolBlocks<typename Derived::Scalar> pack(const Eigen::MatrixBase<Derived>& gradient, Index s) {
    using Real = typename Derived::Scalar;
    static_assert(!Eigen::NumTraits<Real>::IsComplex, "pack expects a real gradient");
    if (s < 1) throw std::invalid_argument("pack: s must be at least 1");
    if (gradient.cols() != 1 || gradient.rows() < 1)
        throw DimensionError("pack: gradient must be a nonempty column vector");
    if (!gradient.allFinite()) throw std::invalid_argument("pack: gradient has non-finite entries");

    const Index d = gradient.rows();
    const Index n_symbols = symbol_count(d, s);

    // Padded gradient viewed as s x 2N: even columns are real parts, odd columns imaginary.
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> chunks =
        Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>::Zero(s, 2 * n_symbols);
    Eigen::Map<VectorX<Real>>(chunks.data(), d) = gradient;

    SymbolBlocks<Real> blocks(s, n_symbols);
    for (Index n = 0; n < n_symbols; ++n) {
        blocks.col(n).real() = chunks.col(2 * n);
        blocks.col(n).imag() = chunks.col(2 * n + 1);
    }
    return blocks;
}

/// Inverse of pack; entries beyond d are padding and are dropped.
template <typename Derived>
VectorX<typename Eigen::NumTraits<typename Derived::Scalar>::Real> unpack(
    const Eigen::MatrixBase<Derived>& blocks, Index d) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    const Index s = blocks.rows();
    const Index n_symbols = blocks.cols();
    if (d < 1) throw std::invalid_argument("unpack: d must be at least 1");
    if (s < 1 || n_symbols < 1) throw DimensionError("unpack: no symbols");
    if (n_symbols != symbol_count(d, s))
        throw DimensionError("unpack: expected " + std::to_string(symbol_count(d, s)) +
                             " symbols for d=" + std::to_string(d) + ", got " +
                             std::to_string(n_symbols));

    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> chunks(s, 2 * n_symbols);
    for (Index n = 0; n < n_symbols; ++n) {
        chunks.col(2 * n) = blocks.col(n).real();
        chunks.col(2 * n + 1) = blocks.col(n).imag();
    }
    return Eigen::Map<const VectorX<Real>>(chunks.data(), d);
}

}  // namespace otadsgd

#endif  // OTADSGD_PACKING_HPP
