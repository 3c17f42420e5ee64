/*
 Copyright 2026 The cpe-workbench Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include <cstdint>

namespace cpe {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

/// SplitMix64 output finalizer (Stafford "Mix13" variant).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Seed for independent stream `stream` under `base`:
/// mix64(base ^ mix64(stream + golden)). Used for per-trial seeds and for the
/// data / Tx / LO / AWGN streams inside one trial.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept
{
    return mix64(base ^ mix64(stream + kGoldenGamma));
}

/// Counter-based 64-bit generator: draw k (1-based) is mix64(seed + k*golden),
/// i.e. SplitMix64. Any draw is addressable without running the ones before it.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit constexpr CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    constexpr result_type operator()() noexcept { return mix64(seed_ + (++counter_) * kGoldenGamma); }

    /// Uniform on (0, 1] with 53-bit resolution.
    double uniform_positive() noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

/// Standard normal deviates by the Box-Muller transform over a CounterRng.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) noexcept : rng_(seed) {}

    double operator()() noexcept;

private:
    CounterRng rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace cpe
