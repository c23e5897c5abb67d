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

#include "otadsgd/verification.hpp"

#include "otadsgd/channel.hpp"
#include "otadsgd/ota.hpp"

#include <cmath>
#include <string>

namespace otadsgd {

namespace {

std::string case_label(const InterferenceCase& c) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "M=%lld,K=%lld,sigma_h_sq=%g", static_cast<long long>(c.devices),
                  static_cast<long long>(c.antennas), c.sigma_h_sq);
    return buf;
}

}  // namespace

double InterferenceCase::expected_variance() const {
    const double m = static_cast<double>(devices);
    return m * (m - 1.0) * sigma_h_sq * sigma_h_sq / static_cast<double>(antennas);
}

std::vector<std::complex<double>> interference_samples(std::uint64_t seed, const InterferenceCase& c,
                                                       std::int64_t trials) {
    std::vector<std::complex<double>> samples;
    samples.reserve(static_cast<std::size_t>(trials));
    const ChannelDims dims{1, c.devices, c.antennas, 1};
    for (std::int64_t trial = 0; trial < trials; ++trial) {
        const auto h = sample_channel<double>(seed, static_cast<std::uint32_t>(trial), dims, c.sigma_h_sq);
        samples.push_back(interference_statistic(h)(0, 0));
    }
    return samples;
}

double hardening_relative_rms(std::uint64_t seed, Index devices, Index antennas, double sigma_h_sq,
                              std::int64_t trials) {
    const ChannelDims dims{1, devices, antennas, 1};
    double sq = 0.0;
    for (std::int64_t trial = 0; trial < trials; ++trial) {
        const auto h = sample_channel<double>(seed, static_cast<std::uint32_t>(trial), dims, sigma_h_sq);
        const double dev = signal_gain(h, 0, 0)(0) - sigma_h_sq;
        sq += dev * dev;
    }
    return std::sqrt(sq / static_cast<double>(trials)) / sigma_h_sq;
}

std::vector<MonteCarloCheck> verify_stats(const VerifyOptions& options) {
    if (options.trials < 1000) throw std::invalid_argument("verify-stats needs at least 1000 trials");

    std::vector<MonteCarloCheck> checks;
    for (const auto& c : options.cases) {
        const std::string label = case_label(c);
        const auto samples = interference_samples(options.seed, c, options.trials);
        checks.push_back(check_mean_zero(samples, options.mean_standard_errors, "interference mean " + label));
        if (c.devices < 2) {
            // No cross-device pairs: the statistic must vanish identically.
            double largest = 0.0;
            for (const auto& x : samples) largest = std::max(largest, std::abs(x));
            MonteCarloCheck zero;
            zero.name = "interference vanishes " + label;
            zero.observed = largest;
            zero.tolerance_kind = MonteCarloCheck::Tolerance::absolute_range;
            zero.trials = options.trials;
            zero.passed = largest == 0.0;
            checks.push_back(zero);
        } else {
            checks.push_back(check_variance(samples, c.expected_variance(), options.variance_rel_tol,
                                            "interference variance " + label));
        }
    }

    const auto& ks = options.hardening_antennas;
    std::vector<double> rms;
    for (Index k : ks) rms.push_back(hardening_relative_rms(options.seed, 2, k, 1.0, options.trials));
    for (std::size_t j = 1; j < ks.size(); ++j) {
        checks.push_back(check_in_range(rms[j] / rms[j - 1], options.ratio_lo, options.ratio_hi, options.trials,
                                        "hardening ratio K=" + std::to_string(ks[j - 1]) + "->" +
                                            std::to_string(ks[j])));
    }
    return checks;
}

}  // namespace otadsgd
