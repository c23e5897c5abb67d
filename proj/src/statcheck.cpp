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

#include "otadsgd/statcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace otadsgd {

namespace {

struct Moments {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
};

// Two-pass mean and variance over a real-valued projection of the samples.
template <typename T, typename Proj>
Moments moments(std::span<const T> samples, Proj proj) {
    const double n = static_cast<double>(samples.size());
    double sum = 0.0;
    for (const T& x : samples) sum += proj(x);
    Moments mo;
    mo.mean = sum / n;
    double sq = 0.0;
    for (const T& x : samples) {
        const double dev = proj(x) - mo.mean;
        sq += dev * dev;
    }
    mo.variance = sq / (n - 1.0);
    return mo;
}

// |mean| in units of its standard error; zero-spread parts are 0 when the mean
// is exactly zero and infinite otherwise.
double z_score(const Moments& mo, double n) {
    const double se = std::sqrt(mo.variance / n);
    if (se == 0.0) return mo.mean == 0.0 ? 0.0 : INFINITY;
    return std::abs(mo.mean) / se;
}

void require_samples(std::size_t have, std::size_t need, const std::string& name) {
    if (have < need)
        throw std::invalid_argument(name + ": needs at least " + std::to_string(need) + " samples, got " +
                                    std::to_string(have));
}

std::string fmt(const char* format, double a, double b) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), format, a, b);
    return buf;
}

}  // namespace

std::string MonteCarloCheck::summary() const {
    const char* kind = "";
    switch (tolerance_kind) {
        case Tolerance::relative: kind = "relative"; break;
        case Tolerance::standard_errors: kind = "standard errors"; break;
        case Tolerance::absolute_range: kind = "range"; break;
        case Tolerance::margin: kind = "margin"; break;
    }
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%s  %-40s observed=%.6g expected=%.6g tolerance=%.4g (%s) trials=%lld",
                  passed ? "PASS" : "FAIL", name.c_str(), observed, expected, tolerance, kind,
                  static_cast<long long>(trials));
    std::string line = buf;
    if (!detail.empty()) line += "  [" + detail + "]";
    return line;
}

MonteCarloCheck check_mean_zero(std::span<const std::complex<double>> samples, double max_standard_errors,
                                std::string name) {
    require_samples(samples.size(), 2, name);
    const double n = static_cast<double>(samples.size());
    const Moments re = moments(samples, [](const std::complex<double>& x) { return x.real(); });
    const Moments im = moments(samples, [](const std::complex<double>& x) { return x.imag(); });

    MonteCarloCheck check;
    check.name = std::move(name);
    check.observed = std::max(z_score(re, n), z_score(im, n));
    check.expected = 0.0;
    check.tolerance_kind = MonteCarloCheck::Tolerance::standard_errors;
    check.tolerance = max_standard_errors;
    check.trials = static_cast<Index>(samples.size());
    check.passed = check.observed <= max_standard_errors;
    check.detail = fmt("mean=%.4g%+.4gj", re.mean, im.mean);
    return check;
}

MonteCarloCheck check_mean_zero(std::span<const double> samples, double max_standard_errors, std::string name) {
    require_samples(samples.size(), 2, name);
    const Moments mo = moments(samples, [](double x) { return x; });

    MonteCarloCheck check;
    check.name = std::move(name);
    check.observed = z_score(mo, static_cast<double>(samples.size()));
    check.tolerance_kind = MonteCarloCheck::Tolerance::standard_errors;
    check.tolerance = max_standard_errors;
    check.trials = static_cast<Index>(samples.size());
    check.passed = check.observed <= max_standard_errors;
    check.detail = fmt("mean=%.4g std=%.4g", mo.mean, std::sqrt(mo.variance));
    return check;
}

namespace {

MonteCarloCheck variance_check(double observed, std::size_t n, double expected, double rel_tol, std::string name) {
    MonteCarloCheck check;
    check.name = std::move(name);
    check.observed = observed;
    check.expected = expected;
    check.tolerance_kind = MonteCarloCheck::Tolerance::relative;
    check.tolerance = rel_tol;
    check.trials = static_cast<Index>(n);
    check.passed = std::abs(observed - expected) <= rel_tol * expected;
    check.detail = fmt("relative error=%.4g of allowed %.4g", std::abs(observed - expected) / expected, rel_tol);
    return check;
}

void require_variance_inputs(std::size_t n, double expected, double rel_tol, const std::string& name) {
    require_samples(n, 100, name);
    if (!(expected > 0.0)) throw std::invalid_argument(name + ": expected variance must be positive");
    if (!(rel_tol > 0.0)) throw std::invalid_argument(name + ": tolerance must be positive");
}

}  // namespace

MonteCarloCheck check_variance(std::span<const std::complex<double>> samples, double expected, double rel_tol,
                               std::string name) {
    require_variance_inputs(samples.size(), expected, rel_tol, name);
    const Moments re = moments(samples, [](const std::complex<double>& x) { return x.real(); });
    const Moments im = moments(samples, [](const std::complex<double>& x) { return x.imag(); });
    return variance_check(re.variance + im.variance, samples.size(), expected, rel_tol, std::move(name));
}

MonteCarloCheck check_variance(std::span<const double> samples, double expected, double rel_tol, std::string name) {
    require_variance_inputs(samples.size(), expected, rel_tol, name);
    const Moments mo = moments(samples, [](double x) { return x; });
    return variance_check(mo.variance, samples.size(), expected, rel_tol, std::move(name));
}

MonteCarloCheck check_monotone(std::span<const std::pair<double, double>> series, Direction direction,
                               double noise_margin, std::string name) {
    if (series.size() < 2) throw std::invalid_argument(name + ": needs at least two points");
    if (!(noise_margin >= 0.0)) throw std::invalid_argument(name + ": noise margin must be nonnegative");
    for (std::size_t j = 1; j < series.size(); ++j) {
        if (!(series[j].first > series[j - 1].first))
            throw std::invalid_argument(name + ": parameter values must be strictly increasing");
    }

    // Worst step against the requested direction (positive means a regression).
    double worst = -INFINITY;
    for (std::size_t j = 1; j < series.size(); ++j) {
        const double step = series[j].second - series[j - 1].second;
        worst = std::max(worst, direction == Direction::increasing ? -step : step);
    }

    MonteCarloCheck check;
    check.name = std::move(name);
    check.observed = std::max(worst, 0.0);
    check.expected = 0.0;
    check.tolerance_kind = MonteCarloCheck::Tolerance::margin;
    check.tolerance = noise_margin;
    check.trials = static_cast<Index>(series.size());
    check.passed = worst <= noise_margin;
    std::string values;
    for (const auto& [param, metric] : series) values += fmt("%g:%.4g ", param, metric);
    values.pop_back();
    check.detail = values;
    return check;
}

MonteCarloCheck check_in_range(double observed, double lo, double hi, Index trials, std::string name) {
    MonteCarloCheck check;
    check.name = std::move(name);
    check.observed = observed;
    check.expected = 0.5 * (lo + hi);
    check.tolerance_kind = MonteCarloCheck::Tolerance::absolute_range;
    check.tolerance = 0.5 * (hi - lo);
    check.trials = trials;
    check.passed = observed >= lo && observed <= hi;
    check.detail = fmt("range=[%g, %g]", lo, hi);
    return check;
}

}  // namespace otadsgd
