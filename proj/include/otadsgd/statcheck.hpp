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

// Small statistical assertions for Monte Carlo checks. Every check returns a
// report carrying observed value, expectation, tolerance and trial count.

#ifndef OTADSGD_STATCHECK_HPP
#define OTADSGD_STATCHECK_HPP

#include "otadsgd/common.hpp"

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace otadsgd {

struct MonteCarloCheck {
    enum class Tolerance { relative, standard_errors, absolute_range, margin };

    std::string name;
    bool passed = false;
    double observed = 0.0;
    double expected = 0.0;
    Tolerance tolerance_kind = Tolerance::relative;
    double tolerance = 0.0;
    Index trials = 0;
    std::string detail;

    /// One line: PASS/FAIL, name, observed vs expected, tolerance, trials.
    std::string summary() const;
};

/// |mean| <= max_standard_errors * std / sqrt(n), for the real and imaginary
/// parts separately. A part with zero spread passes only if its mean is zero.
/// `observed` is the larger of the two |mean| / standard-error ratios.
MonteCarloCheck check_mean_zero(std::span<const std::complex<double>> samples, double max_standard_errors,
                                std::string name = "mean_zero");
MonteCarloCheck check_mean_zero(std::span<const double> samples, double max_standard_errors,
                                std::string name = "mean_zero");

/// |sample variance - expected| <= rel_tol * expected. For complex samples
/// the variance is E|x - mean|^2. Needs at least 100 samples.
MonteCarloCheck check_variance(std::span<const std::complex<double>> samples, double expected, double rel_tol,
                               std::string name = "variance");
MonteCarloCheck check_variance(std::span<const double> samples, double expected, double rel_tol,
                               std::string name = "variance");

enum class Direction { increasing, decreasing };

/// Each successive metric must move in `direction` or regress by at most
/// noise_margin. Parameter values must be strictly increasing.
MonteCarloCheck check_monotone(std::span<const std::pair<double, double>> series, Direction direction,
                               double noise_margin, std::string name = "monotone");

/// lo <= observed <= hi.
MonteCarloCheck check_in_range(double observed, double lo, double hi, Index trials, std::string name);

}  // namespace otadsgd

#endif  // OTADSGD_STATCHECK_HPP
