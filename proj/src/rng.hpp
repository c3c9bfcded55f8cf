// Copyright (c) the addq authors.
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

#include <cmath>
#include <cstdint>

namespace addq {

// Counter-based pseudorandom generation (splitmix64 core). Every consumer
// derives its own stream key from (seed, tag, index), so generation order is
// independent of scheduling and results are reproducible across thread counts
// and platforms. Distributions are implemented here rather than taken from
// <random> because libstdc++/libc++ leave distribution algorithms unspecified.

inline uint64_t mix64(uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

constexpr uint64_t kRngGamma = 0x9e3779b97f4a7c15ull;

// Stream tags. One substream per (matrix, row) for generation; other
// consumers get their own tag so streams never collide.
enum StreamTag : uint64_t {
    kStreamWeightRows = 1,
    kStreamWeightOutliers = 2,
    kStreamActivationRows = 3,
    kStreamActivationShiftDims = 4,
    kStreamKmeansSeed = 5,
    kStreamSweepLayer = 6,
    kStreamTest = 7,
};

inline uint64_t derive_stream(uint64_t seed, uint64_t tag, uint64_t index = 0) {
    uint64_t h = mix64(seed + kRngGamma);
    h = mix64(h ^ (tag * 0xd6e8feb86659fd93ull));
    h = mix64(h ^ (index * kRngGamma));
    return h != 0 ? h : kRngGamma;
}

class Prng {
  public:
    Prng(uint64_t seed, uint64_t tag, uint64_t index = 0)
            : key_(derive_stream(seed, tag, index)) {}

    explicit Prng(uint64_t key) : key_(key) {}

    // value i of the stream is mix64(key + i*gamma); the counter only tracks
    // position, the generator itself is stateless in the counter.
    uint64_t next_u64() {
        counter_ += 1;
        return mix64(key_ + counter_ * kRngGamma);
    }

    // uniform in [0, 1)
    double next_uniform() {
        return double(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform integer in [0, n), n > 0
    uint64_t next_index(uint64_t n) {
        return next_u64() % n;
    }

    // standard normal via Box-Muller; consumes two uniforms per pair
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - next_uniform(); // (0, 1], keeps log() finite
        double u2 = next_uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586232 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    uint64_t key_;
    uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace addq
