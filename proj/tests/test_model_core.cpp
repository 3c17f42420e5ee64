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
#include "cpe/modulation.hpp"
#include "cpe/random.hpp"

#include <doctest.h>

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace cpe;

namespace {

constexpr double kPi = std::numbers::pi;
const int kOrders[] = {4, 8, 16, 32, 64};

Bits random_bits(std::size_t count, std::uint64_t seed)
{
    CounterRng rng(seed);
    Bits bits(count);
    for (auto& b : bits)
        b = static_cast<std::uint8_t>(rng() >> 63);
    return bits;
}

// Nearest point by exhaustive angular distance, lowest index on ties.
std::size_t brute_force_decision(double phase, int n)
{
    std::size_t best = 0;
    double best_distance = 10.0;
    for (int i = 0; i < n; ++i) {
        const double d = std::abs(std::remainder(phase - 2.0 * kPi * i / n, 2.0 * kPi));
        if (d < best_distance - 1e-15) {
            best_distance = d;
            best = static_cast<std::size_t>(i);
        }
    }
    return best;
}

}  // namespace

TEST_CASE("supported orders only")
{
    for (int n : kOrders) {
        const ModulationFormat f(n);
        CHECK(f.order() == n);
        CHECK(f.bits_per_symbol() == std::countr_zero(static_cast<unsigned>(n)));
    }
    for (int n : {0, 1, 2, 3, 6, 12, 128}) {
        CHECK_THROWS_WITH_AS(ModulationFormat{n}, doctest::Contains("unsupported order"),
                             std::invalid_argument);
    }
}

TEST_CASE("constellation geometry and Gray labels")
{
    const auto qpsk = build_constellation(ModulationFormat(4));
    const double expected[] = {0.0, kPi / 2, kPi, 3 * kPi / 2};
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(qpsk.points[i] - std::polar(1.0, expected[i])) < 1e-15);
    }
    for (int n : kOrders) {
        const auto c = build_constellation(ModulationFormat(n));
        REQUIRE(c.points.size() == static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            CHECK(std::abs(std::abs(c.points[i]) - 1.0) < 1e-15);
            const auto next = c.gray_labels[(i + 1) % n];
            CHECK(std::popcount(c.gray_labels[i] ^ next) == 1);
            CHECK(gray_decode(c.gray_labels[i]) == static_cast<std::uint32_t>(i));
        }
    }
}

TEST_CASE("hard decision")
{
    const auto qpsk = build_constellation(ModulationFormat(4));
    CHECK(hard_decision(std::polar(1.0, kPi / 4 - 0.01), qpsk) == 0);
    CHECK(hard_decision(std::polar(1.0, kPi / 4 + 0.01), qpsk) == 1);
    CHECK_THROWS_AS(hard_decision(Sample{0.0, 0.0}, qpsk), std::invalid_argument);

    for (int n : kOrders) {
        const auto c = build_constellation(ModulationFormat(n));
        for (int i = 0; i < n; ++i)
            CHECK(hard_decision(c.points[i], c) == static_cast<std::size_t>(i));
        // Scale never matters.
        CHECK(hard_decision(3.5 * c.points[n - 1], c) == static_cast<std::size_t>(n - 1));
    }

    SUBCASE("sweep of 10^4 phases against a brute-force search")
    {
        for (int n : kOrders) {
            const auto c = build_constellation(ModulationFormat(n));
            int mismatches = 0;
            for (int k = 0; k < 10000; ++k) {
                // Offset avoids landing exactly on a boundary, where rounding
                // in the two computations could legitimately disagree.
                const double phase = -kPi + 2.0 * kPi * (k + 0.37) / 10000.0;
                mismatches += hard_decision(std::polar(1.0, phase), c) != brute_force_decision(phase, n);
            }
            CHECK(mismatches == 0);
        }
    }

    SUBCASE("exact boundary goes to the lower index")
    {
        const auto c = build_constellation(ModulationFormat(4));
        CHECK(hard_decision(Sample{1.0, 1.0}, c) == 0);    // pi/4 between 0 and 1
        CHECK(hard_decision(Sample{-1.0, 1.0}, c) == 1);   // 3pi/4 between 1 and 2
        CHECK(hard_decision(Sample{1.0, -1.0}, c) == 0);   // -pi/4 between 3 and 0
    }
}

TEST_CASE("differential encoding")
{
    const ModulationFormat qpsk(4);
    const auto empty = differential_encode({}, qpsk);
    REQUIRE(empty.size() == 1);
    CHECK(empty[0] == Sample{1.0, 0.0});

    const Bits zeros{0, 0};
    const auto s = differential_encode(zeros, qpsk);
    REQUIRE(s.size() == 2);
    CHECK(std::abs(s[1] - s[0]) < 1e-15);

    const Bits odd{1, 0, 1};
    CHECK_THROWS_AS(differential_encode(odd, qpsk), std::invalid_argument);
    CHECK_THROWS_AS(differential_decode(empty, qpsk), std::invalid_argument);
}

TEST_CASE("round trip and static rotation immunity")
{
    for (int n : kOrders) {
        const ModulationFormat f(n);
        const std::size_t b = static_cast<std::size_t>(f.bits_per_symbol());
        const Bits bits = random_bits(10000 - 10000 % b, 99 + n);
        auto stream = differential_encode(bits, f);
        CHECK(differential_decode(stream, f) == bits);

        const Sample rotation = std::polar(1.0, 2.345);
        for (auto& x : stream)
            x *= rotation;
        CHECK(differential_decode(stream, f) == bits);
    }
}

TEST_CASE("one perturbed symbol corrupts two adjacent differences")
{
    const ModulationFormat f(4);
    const Bits bits = random_bits(400, 5);
    auto stream = differential_encode(bits, f);
    const std::size_t k = 50;
    const double eps = 1e-3;
    stream[k] *= std::polar(1.0, kPi / 4 + eps);
    const Bits rx = differential_decode(stream, f);

    // Difference k-1 -> k moves by +1 point, difference k -> k+1 by -1 point;
    // Gray adjacency makes each exactly one bit.
    int errors_before = 0, errors_after = 0, errors_elsewhere = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const std::size_t diff = i / 2 + 1;
        const bool e = bits[i] != rx[i];
        if (diff == k)
            errors_before += e;
        else if (diff == k + 1)
            errors_after += e;
        else
            errors_elsewhere += e;
    }
    CHECK(errors_before == 1);
    CHECK(errors_after == 1);
    CHECK(errors_elsewhere == 0);
}

TEST_CASE("Gray adjacency: a one-step decision error costs exactly one bit")
{
    for (int n : kOrders) {
        const ModulationFormat f(n);
        const std::size_t b = static_cast<std::size_t>(f.bits_per_symbol());
        const Bits bits = random_bits(64 * b, 7 + n);
        const auto clean = differential_encode(bits, f);
        for (int shift : {-1, 1}) {
            // Rotate every symbol from index 10 on: only difference 10 changes.
            auto stream = clean;
            for (std::size_t k = 10; k < stream.size(); ++k)
                stream[k] *= std::polar(1.0, shift * f.step());
            const Bits rx = differential_decode(stream, f);
            std::size_t errors = 0;
            for (std::size_t i = 0; i < bits.size(); ++i)
                errors += bits[i] != rx[i];
            CHECK(errors == 1);
        }
    }
}
