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

// Monte Carlo checks of the combiner's channel statistics, shared by the
// `verify-stats` command.

#ifndef OTADSGD_VERIFICATION_HPP
#define OTADSGD_VERIFICATION_HPP

#include "otadsgd/statcheck.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace otadsgd {

struct InterferenceCase {
    Index devices = 2;
    Index antennas = 4;
    double sigma_h_sq = 1.0;

    /// M (M - 1) sigma_h^4 / K.
    double expected_variance() const;
};

/// One cross-device statistic per trial (single symbol, single subchannel).
std::vector<std::complex<double>> interference_samples(std::uint64_t seed, const InterferenceCase& c,
                                                       std::int64_t trials);

/// sqrt(E[(G - sigma_h^2)^2]) / sigma_h^2 over trials for the signal weight
/// G = (1/K) sum_k |h_{1,k}|^2 of device 1, with M devices present.
double hardening_relative_rms(std::uint64_t seed, Index devices, Index antennas, double sigma_h_sq,
                              std::int64_t trials);

struct VerifyOptions {
    std::int64_t trials = 100000;
    std::uint64_t seed = 1;
    std::vector<InterferenceCase> cases = {{2, 4, 1.0}, {4, 8, 1.0}, {8, 16, 2.0}};
    std::vector<Index> hardening_antennas = {4, 16, 64, 256};
    double mean_standard_errors = 4.0;
    double variance_rel_tol = 0.05;
    double ratio_lo = 0.4;
    double ratio_hi = 0.6;
};

/// Interference mean and variance per case, then hardening ratios across
/// successive antenna counts. Throws std::invalid_argument for trials < 1000.
std::vector<MonteCarloCheck> verify_stats(const VerifyOptions& options);

}  // namespace otadsgd

#endif  // OTADSGD_VERIFICATION_HPP
