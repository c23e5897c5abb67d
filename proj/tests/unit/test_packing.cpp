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

#include "otadsgd/packing.hpp"
#include "otadsgd/philox.hpp"

#include <doctest.h>

#include <limits>

using namespace otadsgd;
using cd = std::complex<double>;

TEST_CASE("pack lays out real then imaginary halves of each 2s chunk") {
    Eigen::VectorXd g(6);
    g << 1, 2, 3, 4, 5, 6;
    const auto blocks = pack(g, 2);
    REQUIRE(blocks.rows() == 2);
    REQUIRE(blocks.cols() == 2);
    CHECK(blocks(0, 0) == cd(1, 3));
    CHECK(blocks(1, 0) == cd(2, 4));
    CHECK(blocks(0, 1) == cd(5, 0));
    CHECK(blocks(1, 1) == cd(6, 0));
}

TEST_CASE("pack smallest case and zero vector") {
    Eigen::VectorXd g(2);
    g << 0.25, -7.5;
    const auto one = pack(g, 1);
    REQUIRE(one.size() == 1);
    CHECK(one(0, 0) == cd(0.25, -7.5));

    const auto zeros = pack(Eigen::VectorXd::Zero(4), 2);
    CHECK(zeros.cols() == 1);
    CHECK(zeros.isZero(0.0));
}

TEST_CASE("pack rejects bad input") {
    Eigen::VectorXd g = Eigen::VectorXd::Ones(4);
    CHECK_THROWS_AS(pack(g, 0), std::invalid_argument);
    g(2) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(pack(g, 2), std::invalid_argument);
    g(2) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(pack(g, 2), std::invalid_argument);
}

TEST_CASE("unpack inverts the worked examples") {
    SymbolBlocks<double> blocks(2, 2);
    blocks << cd(1, 3), cd(5, 0), cd(2, 4), cd(6, 0);
    Eigen::VectorXd expected(6);
    expected << 1, 2, 3, 4, 5, 6;
    CHECK(unpack(blocks, 6) == expected);

    SymbolBlocks<double> single(1, 1);
    single << cd(1, 2);
    const Eigen::VectorXd one = unpack(single, 1);
    REQUIRE(one.size() == 1);
    CHECK(one(0) == 1.0);
}

TEST_CASE("unpack rejects a block count that does not fit d") {
    const SymbolBlocks<double> blocks = SymbolBlocks<double>::Zero(2, 2);
    CHECK_THROWS_AS(unpack(blocks, 4), DimensionError);   // needs 1 symbol
    CHECK_THROWS_AS(unpack(blocks, 9), DimensionError);   // needs 3 symbols
    CHECK_NOTHROW(unpack(blocks, 5));
    CHECK_THROWS_AS(unpack(blocks, 0), std::invalid_argument);
}

TEST_CASE("pack properties over random shapes") {
    PhiloxStream rng(2024, StreamTag::verification, 1);
    for (int trial = 0; trial < 300; ++trial) {
        const Index d = 1 + static_cast<Index>(rng.next_below(64));
        const Index s = 1 + static_cast<Index>(rng.next_below(16));
        Eigen::VectorXd g(d), g2(d);
        for (Index j = 0; j < d; ++j) {
            g(j) = rng.next_normal();
            g2(j) = rng.next_normal();
        }
        const auto blocks = pack(g, s);

        CHECK(blocks.rows() == s);
        CHECK(blocks.cols() == (d + 2 * s - 1) / (2 * s));
        CHECK(unpack(blocks, d) == g);
        // Energy identity: zero padding adds nothing.
        CHECK(blocks.squaredNorm() == doctest::Approx(g.squaredNorm()).epsilon(1e-14));
        // Linearity.
        const double a = rng.next_normal();
        const double b = rng.next_normal();
        const SymbolBlocks<double> lhs = pack((a * g + b * g2).eval(), s);
        const SymbolBlocks<double> rhs = a * blocks + b * pack(g2, s);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-14 * (1.0 + rhs.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("pack is generic over the real scalar") {
    Eigen::VectorXf g(3);
    g << 1.f, 2.f, 3.f;
    const SymbolBlocks<float> blocks = pack(g, 1);
    CHECK(blocks.cols() == 2);
    CHECK(blocks(0, 0) == std::complex<float>(1.f, 2.f));
    CHECK(unpack(blocks, 3) == g);
}
