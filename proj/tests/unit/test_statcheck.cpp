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

#include <doctest.h>

#include <random>

using namespace otadsgd;

namespace {

std::vector<double> normals(int n, double scale, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, scale);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (double& x : out) x = normal(rng);
    return out;
}

}  // namespace

TEST_CASE("check_mean_zero") {
    const std::vector<double> zeros(50, 0.0);
    CHECK(check_mean_zero(std::span<const double>(zeros), 4.0, "zeros").passed);
    const std::vector<double> ones(50, 1.0);
    CHECK_FALSE(check_mean_zero(std::span<const double>(ones), 4.0, "ones").passed);

    const auto draws = normals(100000, 1.0, 1);
    CHECK(check_mean_zero(std::span<const double>(draws), 4.0, "normal").passed);
    std::vector<double> shifted = draws;
    for (double& x : shifted) x += 0.05;
    CHECK_FALSE(check_mean_zero(std::span<const double>(shifted), 4.0, "shifted").passed);

    std::vector<std::complex<double>> complex_draws;
    const auto im = normals(100000, 1.0, 2);
    for (std::size_t j = 0; j < draws.size(); ++j) complex_draws.emplace_back(draws[j], im[j]);
    CHECK(check_mean_zero(complex_draws, 4.0, "complex").passed);
    for (auto& z : complex_draws) z += std::complex<double>(0.0, 0.05);
    CHECK_FALSE(check_mean_zero(complex_draws, 4.0, "complex shifted").passed);

    const std::vector<double> one_sample{0.0};
    CHECK_THROWS_AS(check_mean_zero(std::span<const double>(one_sample), 4.0, "tiny"), std::invalid_argument);
}

TEST_CASE("check_variance") {
    const auto draws = normals(100000, 1.0, 3);
    CHECK(check_variance(std::span<const double>(draws), 1.0, 0.05, "unit").passed);
    std::vector<double> doubled = draws;
    for (double& x : doubled) x *= 2.0;
    const auto scaled = check_variance(std::span<const double>(doubled), 1.0, 0.05, "scaled");
    CHECK_FALSE(scaled.passed);
    CHECK(scaled.observed == doctest::Approx(4.0).epsilon(0.05));

    const std::vector<double> few(99, 1.0);
    CHECK_THROWS_AS(check_variance(std::span<const double>(few), 1.0, 0.05, "few"), std::invalid_argument);
    CHECK_THROWS_AS(check_variance(std::span<const double>(draws), 0.0, 0.05, "zero"), std::invalid_argument);
}

TEST_CASE("check_monotone") {
    using P = std::pair<double, double>;
    const std::vector<P> rising{{1, 0.5}, {5, 0.6}, {40, 0.8}};
    CHECK(check_monotone(rising, Direction::increasing, 0.0, "rising").passed);
    const std::vector<P> dip{{1, 0.5}, {5, 0.49}};
    CHECK(check_monotone(dip, Direction::increasing, 0.02, "dip").passed);
    const std::vector<P> drop{{1, 0.8}, {5, 0.5}};
    CHECK_FALSE(check_monotone(drop, Direction::increasing, 0.02, "drop").passed);
    CHECK(check_monotone(drop, Direction::decreasing, 0.0, "drop down").passed);
    const std::vector<P> unordered{{5, 0.5}, {1, 0.6}};
    CHECK_THROWS_AS(check_monotone(unordered, Direction::increasing, 0.0, "unordered"), std::invalid_argument);
    const std::vector<P> single{{1, 0.5}};
    CHECK_THROWS_AS(check_monotone(single, Direction::increasing, 0.0, "single"), std::invalid_argument);
}

TEST_CASE("reports carry the audit fields") {
    const auto draws = normals(1000, 1.0, 4);
    const auto report = check_variance(std::span<const double>(draws), 1.0, 0.2, "audit");
    CHECK(report.trials == 1000);
    CHECK(report.expected == 1.0);
    CHECK(report.tolerance == 0.2);
    const std::string line = report.summary();
    CHECK(line.find("audit") != std::string::npos);
    CHECK(line.find("observed=") != std::string::npos);
    CHECK(line.find("expected=") != std::string::npos);
    CHECK(line.find("tolerance=") != std::string::npos);
    CHECK(line.find("trials=1000") != std::string::npos);

    CHECK(check_in_range(0.5, 0.4, 0.6, 10, "ratio").passed);
    CHECK_FALSE(check_in_range(0.61, 0.4, 0.6, 10, "ratio").passed);
}
