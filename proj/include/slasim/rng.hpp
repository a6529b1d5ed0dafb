/*
 * Copyright 2026 The slasim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace slasim {

/// Generator identity recorded in run metadata. Streams are mt19937_64
/// instances whose seeds are derived by splitmix64 from (master seed, key),
/// so every (class, purpose, serial) tuple draws from an independent stream.
inline constexpr const char* kRngAlgorithm = "mt19937_64/splitmix64-keyed";

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic per-replication seed: run `index` under master seed `seed`.
inline std::uint64_t replication_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed + index);
}

/// One independent random stream. Draw helpers avoid std::*_distribution so
/// the mapping from generator output to variates is pinned down by this code.
class RandomStream {
public:
    RandomStream() : engine_(0) {}
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Stream keyed by an arbitrary tuple, folded with splitmix64.
    template <typename... Keys>
    static RandomStream keyed(std::uint64_t seed, Keys... keys) {
        std::uint64_t h = splitmix64(seed);
        ((h = splitmix64(h ^ static_cast<std::uint64_t>(keys))), ...);
        return RandomStream(h);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Exponential with the given mean (inverse-CDF on 1 - U, so log(0) never occurs).
    double exponential(double mean) {
        return -mean * std::log(1.0 - uniform01());
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace slasim
