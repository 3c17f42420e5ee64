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
#include "cpe/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cpe {
namespace {

// n is a power of two, so x^n is log2(n) squarings.
Sample nth_power(Sample x, int bits_per_symbol) noexcept
{
    for (int i = 0; i < bits_per_symbol; ++i)
        x *= x;
    return x;
}

FeedforwardResult correct(std::span<const Sample> stream, PhaseEstimateSeries estimate)
{
    FeedforwardResult out{std::move(estimate), SampleStream(stream.size())};
    for (std::size_t k = 0; k < stream.size(); ++k)
        out.corrected[k] = stream[k] * std::polar(1.0, -out.estimate.phase[k]);
    return out;
}

// Raw (1/n) arg of each power sum; a zero sum repeats the previous raw value.
std::vector<double> raw_estimates(std::span<const Sample> sums, int order,
                                  std::vector<std::size_t>& flagged)
{
    std::vector<double> raw(sums.size());
    double previous = 0.0;
    for (std::size_t i = 0; i < sums.size(); ++i) {
        if (sums[i] == Sample{0.0, 0.0}) {
            raw[i] = previous;
            flagged.push_back(i);
        } else {
            raw[i] = std::arg(sums[i]) / order;
        }
        previous = raw[i];
    }
    return raw;
}

}  // namespace

void NlmsConfig::validate() const
{
    if (!(mu > 0.0 && mu < 2.0))
        throw std::invalid_argument("NLMS step size must satisfy 0 < mu < 2");
}

NlmsResult nlms_cpe(std::span<const Sample> stream, const Constellation& constellation,
                    const NlmsConfig& config, std::span<const Sample> reference)
{
    config.validate();
    if (stream.empty())
        throw std::invalid_argument("nlms_cpe: empty stream");

    const std::size_t training =
        config.mode == NlmsMode::training ? std::min(config.training_length, stream.size()) : 0;
    if (reference.size() < training)
        throw std::invalid_argument("nlms_cpe: reference shorter than the training length");

    NlmsResult out;
    out.output.resize(stream.size());
    out.taps.reserve(stream.size() + 1);

    Sample w{1.0, 0.0};
    out.taps.push_back(w);
    for (std::size_t k = 0; k < stream.size(); ++k) {
        const Sample x = stream[k];
        const double power = std::norm(x);
        if (power == 0.0) {
            out.output[k] = Sample{0.0, 0.0};
            out.skipped.push_back(k);
            out.taps.push_back(w);
            continue;
        }
        const Sample y = w * x;
        out.output[k] = y;

        Sample desired;
        if (k < training)
            desired = reference[k];
        else if (y == Sample{0.0, 0.0})
            desired = y;  // w collapsed to 0: no decision possible, hold the tap
        else
            desired = constellation.points[hard_decision(y, constellation)];

        const Sample error = desired - y;
        w += config.mu * error * std::conj(x) / power;
        out.taps.push_back(w);
    }
    return out;
}

void BwaConfig::validate() const
{
    if (block_size < 1)
        throw std::invalid_argument("BWA block size must be >= 1");
}

void VvConfig::validate() const
{
    if (window < 3 || window % 2 == 0)
        throw std::invalid_argument("window must be odd >= 3, got " + std::to_string(window));
}

PhaseEstimateSeries unwrap_phase(std::span<const double> raw, const ModulationFormat& format)
{
    if (raw.empty())
        throw std::invalid_argument("unwrap_phase: empty input");

    const double step = format.step();
    PhaseEstimateSeries out;
    out.phase.resize(raw.size());
    out.unwrap_offset.resize(raw.size());
    out.phase[0] = raw[0];
    out.unwrap_offset[0] = 0;
    for (std::size_t k = 1; k < raw.size(); ++k) {
        const long m = std::lround((out.phase[k - 1] - raw[k]) / step);
        out.unwrap_offset[k] = m;
        out.phase[k] = raw[k] + static_cast<double>(m) * step;
    }
    return out;
}

FeedforwardResult bwa_cpe(std::span<const Sample> stream, const ModulationFormat& format,
                          const BwaConfig& config)
{
    config.validate();
    const std::size_t n_block = config.block_size;
    if (stream.size() < n_block)
        throw std::invalid_argument("bwa_cpe: stream shorter than the block size");

    const std::size_t blocks = (stream.size() + n_block - 1) / n_block;
    std::vector<Sample> sums(blocks, Sample{0.0, 0.0});
    for (std::size_t k = 0; k < stream.size(); ++k)
        sums[k / n_block] += nth_power(stream[k], format.bits_per_symbol());

    std::vector<std::size_t> flagged;
    const auto raw = raw_estimates(sums, format.order(), flagged);
    const PhaseEstimateSeries per_block = unwrap_phase(raw, format);

    PhaseEstimateSeries per_symbol;
    per_symbol.phase.resize(stream.size());
    per_symbol.unwrap_offset.resize(stream.size());
    per_symbol.flagged = std::move(flagged);
    for (std::size_t k = 0; k < stream.size(); ++k) {
        per_symbol.phase[k] = per_block.phase[k / n_block];
        per_symbol.unwrap_offset[k] = per_block.unwrap_offset[k / n_block];
    }
    return correct(stream, std::move(per_symbol));
}

FeedforwardResult vv_cpe(std::span<const Sample> stream, const ModulationFormat& format,
                         const VvConfig& config)
{
    config.validate();
    if (stream.size() < config.window)
        throw std::invalid_argument("vv_cpe: stream shorter than the window");

    std::vector<Sample> powers(stream.size());
    for (std::size_t k = 0; k < stream.size(); ++k)
        powers[k] = nth_power(stream[k], format.bits_per_symbol());

    // Each window is summed directly (no running sum) so the result does not
    // depend on the traversal order.
    const std::size_t half = config.window / 2;
    std::vector<Sample> sums(stream.size());
    for (std::size_t k = 0; k < stream.size(); ++k) {
        const std::size_t first = k >= half ? k - half : 0;
        const std::size_t last = std::min(stream.size() - 1, k + half);
        Sample acc{0.0, 0.0};
        for (std::size_t p = first; p <= last; ++p)
            acc += powers[p];
        sums[k] = acc;
    }

    std::vector<std::size_t> flagged;
    const auto raw = raw_estimates(sums, format.order(), flagged);
    PhaseEstimateSeries estimate = unwrap_phase(raw, format);
    estimate.flagged = std::move(flagged);
    return correct(stream, std::move(estimate));
}

}  // namespace cpe
