// Copyright 2026 The ced authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace ced {

// Philox-4x32-10 counter-based generator (Salmon et al., SC 2011).
// Every 128-bit output block is a pure function of (key, stream, block),
// so per-trial substreams keyed by (master seed, trial index) reproduce
// bit-identically under any parallel schedule.
class PhiloxRng {
public:
    PhiloxRng(std::uint64_t key, std::uint64_t stream)
        : key_(key), stream_(stream) {}

    std::uint32_t next_u32() {
        if (pos_ == 4) {
            buf_ = block(key_, stream_, block_++);
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    /// Uniform double in (0, 1]; never 0, so log() stays finite.
    double next_unit() {
        const std::uint64_t bits = next_u64() >> 11;  // 53 random bits
        return (static_cast<double>(bits) + 1.0) * 0x1p-53;
    }

    /// Standard circular complex normal: |z|^2 ~ Exp(1), uniform phase.
    std::complex<double> next_cnormal() {
        const double radius = std::sqrt(-std::log(next_unit()));
        const double angle =
            2.0 * M_PI * (static_cast<double>(next_u64() >> 11) * 0x1p-53);
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    /// One real standard normal (uses one complex draw; spare discarded).
    double next_normal() {
        return next_cnormal().real() * std::sqrt(2.0);
    }

    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        // Multiply-shift rejection-free mapping is biased by < 2^-64 for the
        // small n used here (grid sizes); acceptable and branch-free.
        const unsigned __int128 prod =
            static_cast<unsigned __int128>(next_u64()) * n;
        return static_cast<std::uint64_t>(prod >> 64);
    }

    static std::array<std::uint32_t, 4> block(std::uint64_t key,
                                              std::uint64_t stream,
                                              std::uint64_t block_index) {
        std::array<std::uint32_t, 4> ctr = {
            static_cast<std::uint32_t>(block_index),
            static_cast<std::uint32_t>(block_index >> 32),
            static_cast<std::uint32_t>(stream),
            static_cast<std::uint32_t>(stream >> 32)};
        std::array<std::uint32_t, 2> k = {static_cast<std::uint32_t>(key),
                                          static_cast<std::uint32_t>(key >> 32)};
        for (int round = 0; round < 10; ++round) {
            ctr = one_round(ctr, k);
            k[0] += 0x9E3779B9u;  // golden-ratio Weyl increments
            k[1] += 0xBB67AE85u;
        }
        return ctr;
    }

private:
    static std::array<std::uint32_t, 4> one_round(
        const std::array<std::uint32_t, 4>& ctr,
        const std::array<std::uint32_t, 2>& key) {
        const std::uint64_t p0 = 0xD2511F53ull * ctr[0];
        const std::uint64_t p1 = 0xCD9E8D57ull * ctr[2];
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }

    std::uint64_t key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
};

}  // namespace ced
