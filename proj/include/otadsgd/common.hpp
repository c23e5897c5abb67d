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

#ifndef OTADSGD_COMMON_HPP
#define OTADSGD_COMMON_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace otadsgd {

using Index = Eigen::Index;

template <typename Real>
using VectorX = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <typename Real>
using ComplexVectorX = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

// Rows are antennas, columns are subchannels.
template <typename Real>
using ComplexMatrixX = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// Inputs whose shapes do not agree with each other or with the configured dimensions.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Rejected configuration document or override.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A non-finite value appeared during a training run.
class NumericAbort : public std::runtime_error {
public:
    NumericAbort(std::int64_t iteration, std::string stage)
        : std::runtime_error("non-finite value at iteration " + std::to_string(iteration) +
                             " in stage '" + stage + "'"),
          iteration_(iteration),
          stage_(std::move(stage)) {}

    std::int64_t iteration() const noexcept { return iteration_; }
    const std::string& stage() const noexcept { return stage_; }

private:
    std::int64_t iteration_;
    std::string stage_;
};

/// Number of complex symbols needed to carry a length-d real vector over s subchannels.
inline Index symbol_count(Index d, Index s) {
    if (d < 1 || s < 1) throw std::invalid_argument("symbol_count: d and s must be positive");
    return (d + 2 * s - 1) / (2 * s);
}

}  // namespace otadsgd

#endif  // OTADSGD_COMMON_HPP
