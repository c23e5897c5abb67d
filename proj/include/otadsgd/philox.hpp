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

// Counter-based random numbers (Philox4x32-10, Salmon et al., SC'11).
//
// Every random draw in the simulator is a pure function of (seed, counter),
// so the value of a channel coefficient does not depend on the order in
// which coefficients are generated.

#ifndef OTADSGD_PHILOX_HPP
#define OTADSGD_PHILOX_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace otadsgd {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

namespace detail {

inline void philox_mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

}  // namespace detail

/// Philox4x32 with 10 rounds.
inline PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) {
    constexpr std::uint32_t kMulA = 0xD2511F53;
    constexpr std::uint32_t kMulB = 0xCD9E8D57;
    constexpr std::uint32_t kWeylA = 0x9E3779B9;
    constexpr std::uint32_t kWeylB = 0xBB67AE85;

    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeylA;
            key[1] += kWeylB;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        detail::philox_mulhilo(kMulA, ctr[0], hi0, lo0);
        detail::philox_mulhilo(kMulB, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

inline PhiloxKey philox_key(std::uint64_t seed) {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// Uniform double in (0, 1], 53 bits of resolution.
inline double uniform_open_closed(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

/// Circularly symmetric complex Gaussian with E|w|^2 = variance, from one Philox block.
/// Box-Muller: |w|^2 is exponential with mean `variance`, phase uniform.
inline std::complex<double> complex_normal_from_block(const PhiloxCounter& block, double variance) {
    const double u_radius = uniform_open_closed(block[0], block[1]);
    const double u_phase = uniform_open_closed(block[2], block[3]);
    const double radius = std::sqrt(-variance * std::log(u_radius));
    const double phase = 2.0 * std::numbers::pi * u_phase;
    return {radius * std::cos(phase), radius * std::sin(phase)};
}

/// Stream tags keep independent uses of one master seed apart.
enum class StreamTag : std::uint32_t {
    channel = 1,
    noise = 2,
    minibatch = 3,
    partition = 4,
    synthetic_train = 5,
    synthetic_test = 6,
    synthetic_means = 7,
    verification = 8,
};

/// Sequential draws from one keyed sub-stream. Counter layout: word 0 is
/// the tag with its high bit set (channel draws use word 0 = iteration, which
/// stays below 2^31), word 1 is a caller-chosen index, words 2-3 count blocks.
class PhiloxStream {
public:
    PhiloxStream(std::uint64_t seed, StreamTag tag, std::uint32_t index)
        : key_(philox_key(seed)), c0_(0x80000000u | static_cast<std::uint32_t>(tag)), c1_(index) {}

    std::uint64_t next_u64() {
        if (used_ == 4) refill();
        const std::uint64_t hi = buffer_[used_++];
        const std::uint64_t lo = buffer_[used_++];
        return (hi << 32) | lo;
    }

    /// Jumps to block `block` of the stream.
    void seek(std::uint64_t block) {
        position_ = block;
        used_ = 4;
    }

    /// Uniform in [0, 1).
    double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (one of the pair is discarded).
    double next_normal() {
        const double u1 = 1.0 - next_uniform();
        const double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Uniform integer in [0, bound), unbiased by rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

private:
    void refill() {
        buffer_ = philox4x32({c0_, c1_, static_cast<std::uint32_t>(position_),
                              static_cast<std::uint32_t>(position_ >> 32)},
                             key_);
        ++position_;
        used_ = 0;
    }

    PhiloxKey key_;
    std::uint32_t c0_;
    std::uint32_t c1_;
    std::uint64_t position_ = 0;
    PhiloxCounter buffer_{};
    int used_ = 4;
};

}  // namespace otadsgd

#endif  // OTADSGD_PHILOX_HPP
