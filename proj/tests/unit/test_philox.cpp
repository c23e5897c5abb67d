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

#include "otadsgd/philox.hpp"

#include <doctest.h>

#include <set>

using namespace otadsgd;

TEST_CASE("philox4x32-10 known-answer vectors") {
    // Reference vectors published with Random123 (kat_vectors).
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("uniform_open_closed stays in (0, 1]") {
    CHECK(uniform_open_closed(0, 0) > 0.0);
    CHECK(uniform_open_closed(0xffffffff, 0xffffffff) == 1.0);
}

TEST_CASE("streams are reproducible and separated by tag and index") {
    PhiloxStream a(42, StreamTag::partition, 3);
    PhiloxStream b(42, StreamTag::partition, 3);
    PhiloxStream other_index(42, StreamTag::partition, 4);
    PhiloxStream other_tag(42, StreamTag::minibatch, 3);
    std::set<std::uint64_t> seen;
    for (int j = 0; j < 100; ++j) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        seen.insert(x);
        seen.insert(other_index.next_u64());
        seen.insert(other_tag.next_u64());
    }
    CHECK(seen.size() == 300);
}

TEST_CASE("seek lands on the same values as sequential reading") {
    PhiloxStream seq(7, StreamTag::minibatch, 0);
    for (int j = 0; j < 10; ++j) seq.next_u64();  // 5 blocks, two u64 per block
    PhiloxStream jump(7, StreamTag::minibatch, 0);
    jump.seek(5);
    CHECK(jump.next_u64() == seq.next_u64());
}

TEST_CASE("next_below is in range and roughly uniform") {
    PhiloxStream s(1, StreamTag::verification, 0);
    int counts[7] = {};
    for (int j = 0; j < 70000; ++j) {
        const auto v = s.next_below(7);
        REQUIRE(v < 7);
        ++counts[v];
    }
    // Binomial(70000, 1/7): sd ~ 92, allow 5 sd.
    for (int c : counts) CHECK(std::abs(c - 10000) < 460);
}

TEST_CASE("complex normal moments") {
    const PhiloxKey key = philox_key(5);
    const int n = 200000;
    double power = 0.0, cross = 0.0, re_sq = 0.0;
    for (int j = 0; j < n; ++j) {
        const auto w = complex_normal_from_block(philox4x32({static_cast<std::uint32_t>(j), 0, 0, 0}, key), 3.0);
        power += std::norm(w);
        cross += w.real() * w.imag();
        re_sq += w.real() * w.real();
    }
    CHECK(power / n == doctest::Approx(3.0).epsilon(0.01));
    CHECK(re_sq / n == doctest::Approx(1.5).epsilon(0.015));
    // E[re im] = 0 with sd 1.5 / sqrt(n).
    CHECK(std::abs(cross / n) < 4.0 * 1.5 / std::sqrt(double(n)));
}
