// Copyright 2026 The qcoop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QCOOP_RNG_HPP_
#define QCOOP_RNG_HPP_

#include <cstdint>
#include <random>

namespace qcoop {

/// SplitMix64 finalizer. A bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

/// Seed of the `index`-th run of a batch.
///
/// seed_i = mix64(base + (i + 1) * 0x9E3779B97F4A7C15). The increment is odd,
/// so distinct indices give distinct mixer inputs, and mix64 is a bijection:
/// no two runs of a batch share a seed.
constexpr std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
    return mix64(base_seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

/// Deterministic random stream owned by a single simulation run.
///
/// Wraps std::mt19937_64, whose output sequence is fixed by the standard.
/// Uniform reals are built from the top 53 bits by hand because
/// std::uniform_real_distribution is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1). Consumes exactly one engine output.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::uint64_t next_u64() { return engine_(); }

    /// Equal streams produce identical future sequences.
    friend bool operator==(const Rng&, const Rng&) = default;

private:
    std::mt19937_64 engine_;
};

}  // namespace qcoop

#endif  // QCOOP_RNG_HPP_
