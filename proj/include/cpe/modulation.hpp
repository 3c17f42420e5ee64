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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cpe {

using Sample = std::complex<double>;
using SampleStream = std::vector<Sample>;
/// One bit per element, values 0 or 1.
using Bits = std::vector<std::uint8_t>;

/// n-PSK format with n in {4, 8, 16, 32, 64}.
class ModulationFormat {
public:
    /// Throws std::invalid_argument("unsupported order ...") for any other n.
    explicit ModulationFormat(int order);

    int order() const noexcept { return order_; }
    int bits_per_symbol() const noexcept { return bits_; }
    /// Angular spacing between adjacent points, 2*pi/n.
    double step() const noexcept;

    bool operator==(const ModulationFormat&) const = default;

private:
    int order_;
    int bits_;
};

std::uint32_t gray_encode(std::uint32_t index) noexcept;
std::uint32_t gray_decode(std::uint32_t label) noexcept;

/// Unit-circle points at phases 2*pi*i/n with reflected-binary Gray labels.
struct Constellation {
    ModulationFormat format;
    std::vector<Sample> points;
    std::vector<std::uint32_t> gray_labels;
};

Constellation build_constellation(const ModulationFormat& format);

/// Index of the point with minimum angular distance to `sample`; an exact
/// boundary goes to the lower index. Throws std::invalid_argument for a
/// zero-magnitude sample.
std::size_t hard_decision(Sample sample, const Constellation& constellation);

/// Differential n-PSK mapping. The output starts with a phase-0 reference
/// symbol followed by one symbol per log2(n)-bit group (MSB first); each group
/// is the Gray label of the phase increment from the previous symbol.
SampleStream differential_encode(std::span<const std::uint8_t> bits,
                                 const ModulationFormat& format);

/// Inverse of differential_encode: the phase difference of every consecutive
/// pair is hard-decided and mapped back through the Gray table.
Bits differential_decode(std::span<const Sample> stream,
                         const ModulationFormat& format);

}  // namespace cpe
