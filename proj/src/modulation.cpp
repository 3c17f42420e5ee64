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

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cpe {

ModulationFormat::ModulationFormat(int order) : order_(order), bits_(0)
{
    if (order < 4 || order > 64 || !std::has_single_bit(static_cast<unsigned>(order)))
        throw std::invalid_argument("unsupported order " + std::to_string(order) +
                                    " (expected 4, 8, 16, 32 or 64)");
    bits_ = std::countr_zero(static_cast<unsigned>(order));
}

double ModulationFormat::step() const noexcept
{
    return 2.0 * std::numbers::pi / order_;
}

std::uint32_t gray_encode(std::uint32_t index) noexcept
{
    return index ^ (index >> 1);
}

std::uint32_t gray_decode(std::uint32_t label) noexcept
{
    std::uint32_t index = label;
    for (std::uint32_t shift = label >> 1; shift != 0; shift >>= 1)
        index ^= shift;
    return index;
}

Constellation build_constellation(const ModulationFormat& format)
{
    Constellation c{format, {}, {}};
    const int n = format.order();
    c.points.reserve(n);
    c.gray_labels.reserve(n);
    for (int i = 0; i < n; ++i) {
        c.points.push_back(std::polar(1.0, format.step() * i));
        c.gray_labels.push_back(gray_encode(static_cast<std::uint32_t>(i)));
    }
    return c;
}

std::size_t hard_decision(Sample sample, const Constellation& constellation)
{
    if (sample == Sample{0.0, 0.0})
        throw std::invalid_argument("hard_decision: zero-magnitude sample");

    const auto n = static_cast<long>(constellation.points.size());
    const double x = std::arg(sample) / constellation.format.step();
    const double lower = std::floor(x);
    const double frac = x - lower;

    auto wrap = [n](long i) { return ((i % n) + n) % n; };
    const long below = wrap(static_cast<long>(lower));
    const long above = wrap(static_cast<long>(lower) + 1);
    if (frac < 0.5)
        return static_cast<std::size_t>(below);
    if (frac > 0.5)
        return static_cast<std::size_t>(above);
    return static_cast<std::size_t>(std::min(below, above));
}

SampleStream differential_encode(std::span<const std::uint8_t> bits,
                                 const ModulationFormat& format)
{
    const auto b = static_cast<std::size_t>(format.bits_per_symbol());
    if (bits.size() % b != 0)
        throw std::invalid_argument("differential_encode: bit count " +
                                    std::to_string(bits.size()) +
                                    " is not divisible by log2(n) = " + std::to_string(b));

    const auto n = static_cast<std::uint32_t>(format.order());
    SampleStream out;
    out.reserve(bits.size() / b + 1);
    out.emplace_back(1.0, 0.0);

    std::uint32_t phase_index = 0;
    for (std::size_t i = 0; i < bits.size(); i += b) {
        std::uint32_t label = 0;
        for (std::size_t j = 0; j < b; ++j)
            label = (label << 1) | (bits[i + j] & 1u);
        phase_index = (phase_index + gray_decode(label)) % n;
        out.push_back(std::polar(1.0, format.step() * phase_index));
    }
    return out;
}

Bits differential_decode(std::span<const Sample> stream, const ModulationFormat& format)
{
    if (stream.size() < 2)
        throw std::invalid_argument("differential_decode: stream shorter than 2");

    const Constellation constellation = build_constellation(format);
    const auto b = format.bits_per_symbol();
    Bits out;
    out.reserve((stream.size() - 1) * static_cast<std::size_t>(b));
    for (std::size_t k = 1; k < stream.size(); ++k) {
        const auto delta = hard_decision(stream[k] * std::conj(stream[k - 1]), constellation);
        const std::uint32_t label = constellation.gray_labels[delta];
        for (int j = b - 1; j >= 0; --j)
            out.push_back(static_cast<std::uint8_t>((label >> j) & 1u));
    }
    return out;
}

}  // namespace cpe
