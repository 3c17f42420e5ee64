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
#include "cpe/channel.hpp"

#include "cpe/random.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cpe {
namespace {

// FFTW's planner is not thread-safe; plan execution is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};

// Forward transform, pointwise multiply, inverse transform, scale by 1/N.
// Buffers come from fftw_malloc so the plan (and its rounding) never depends
// on where std::vector happened to place the data.
SampleStream circular_filter(std::span<const Sample> input, std::span<const Sample> bins)
{
    const auto n = input.size();
    std::unique_ptr<fftw_complex, FftwFree> buf(fftw_alloc_complex(n));
    if (!buf)
        throw std::bad_alloc();

    fftw_plan forward;
    fftw_plan inverse;
    {
        std::scoped_lock lock(planner_mutex());
        forward = fftw_plan_dft_1d(static_cast<int>(n), buf.get(), buf.get(), FFTW_FORWARD,
                                   FFTW_ESTIMATE);
        inverse = fftw_plan_dft_1d(static_cast<int>(n), buf.get(), buf.get(), FFTW_BACKWARD,
                                   FFTW_ESTIMATE);
    }

    auto* data = reinterpret_cast<Sample*>(buf.get());
    std::copy(input.begin(), input.end(), data);
    fftw_execute(forward);
    for (std::size_t k = 0; k < n; ++k)
        data[k] *= bins[k];
    fftw_execute(inverse);

    SampleStream out(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k)
        out[k] = data[k] * scale;

    std::scoped_lock lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(inverse);
    return out;
}

double mean_power(std::span<const Sample> stream)
{
    double acc = 0.0;
    for (const auto& x : stream)
        acc += std::norm(x);
    return stream.empty() ? 0.0 : acc / static_cast<double>(stream.size());
}

void add_noise_in_place(std::span<Sample> stream, double variance, std::uint64_t seed)
{
    GaussianSource gauss(seed);
    const double sigma = std::sqrt(variance / 2.0);
    for (auto& x : stream) {
        const double re = gauss();
        const double im = gauss();
        x += Sample{sigma * re, sigma * im};
    }
}

}  // namespace

void LaserConfig::validate() const
{
    if (!(delta_f_tx_hz >= 0.0) || !(delta_f_lo_hz >= 0.0))
        throw std::invalid_argument("laser linewidths must be >= 0");
}

LinkConfig LinkConfig::from_engineering_units(double dispersion_ps_nm_km, double length_km,
                                              double wavelength_nm)
{
    // 1 ps/(nm km) = 1e-12 s / (1e-9 m * 1e3 m) = 1e-6 s/m^2
    LinkConfig link{dispersion_ps_nm_km * 1e-6, length_km * 1e3, wavelength_nm * 1e-9};
    link.validate();
    return link;
}

double LinkConfig::accumulated_dispersion() const noexcept
{
    return dispersion_s_per_m2 * wavelength_m * wavelength_m * length_m / kSpeedOfLight;
}

double LinkConfig::delay_spread_symbols(double symbol_rate_baud) const noexcept
{
    return accumulated_dispersion() * symbol_rate_baud * symbol_rate_baud;
}

void LinkConfig::validate() const
{
    if (!(dispersion_s_per_m2 >= 0.0))
        throw std::invalid_argument("link dispersion must be >= 0");
    if (!(length_m >= 0.0))
        throw std::invalid_argument("link length must be >= 0");
    if (!(wavelength_m > 0.0))
        throw std::invalid_argument("link wavelength must be > 0");
}

ChannelSeeds ChannelSeeds::derive(std::uint64_t trial_seed) noexcept
{
    return {derive_seed(trial_seed, 1), derive_seed(trial_seed, 2), derive_seed(trial_seed, 3)};
}

std::vector<double> gen_wiener_phase(std::size_t length, double variance_per_symbol,
                                     std::uint64_t seed)
{
    if (!(variance_per_symbol >= 0.0))
        throw std::invalid_argument("gen_wiener_phase: negative variance");
    std::vector<double> phase(length, 0.0);
    if (variance_per_symbol == 0.0)
        return phase;
    GaussianSource gauss(seed);
    const double sigma = std::sqrt(variance_per_symbol);
    for (std::size_t k = 1; k < length; ++k)
        phase[k] = phase[k - 1] + sigma * gauss();
    return phase;
}

FrequencyResponse FrequencyResponse::conjugate() const
{
    FrequencyResponse out{bins, delay_spread_symbols};
    for (auto& h : out.bins)
        h = std::conj(h);
    return out;
}

FrequencyResponse cd_response(const LinkConfig& link, double symbol_rate_baud,
                              std::size_t fft_size)
{
    if (fft_size < 64 || !std::has_single_bit(fft_size))
        throw std::invalid_argument("cd_response: fft_size must be a power of two >= 64, got " +
                                    std::to_string(fft_size));
    if (!(symbol_rate_baud > 0.0))
        throw std::invalid_argument("cd_response: symbol rate must be > 0");
    link.validate();

    FrequencyResponse response;
    response.delay_spread_symbols = link.delay_spread_symbols(symbol_rate_baud);
    response.bins.resize(fft_size);

    const double beta = std::numbers::pi * link.accumulated_dispersion();
    const double df = symbol_rate_baud / static_cast<double>(fft_size);
    const auto half = static_cast<long>(fft_size / 2);
    for (std::size_t k = 0; k < fft_size; ++k) {
        const long signed_k = static_cast<long>(k) < half ? static_cast<long>(k)
                                                          : static_cast<long>(k) - 2 * half;
        const double f = static_cast<double>(signed_k) * df;
        response.bins[k] = std::polar(1.0, beta * f * f);
    }
    return response;
}

SampleStream apply_response(std::span<const Sample> stream, const FrequencyResponse& response)
{
    if (stream.empty())
        throw std::invalid_argument("apply_response: empty stream");
    if (stream.size() != response.size())
        throw std::invalid_argument("apply_response: stream length " +
                                    std::to_string(stream.size()) +
                                    " does not match response size " +
                                    std::to_string(response.size()));
    return circular_filter(stream, response.bins);
}

SampleStream add_awgn(std::span<const Sample> stream, Snr snr_db, std::uint64_t seed)
{
    SampleStream out(stream.begin(), stream.end());
    if (!snr_db)
        return out;
    const double variance = mean_power(stream) / std::pow(10.0, *snr_db / 10.0);
    add_noise_in_place(out, variance, seed);
    return out;
}

SampleStream apply_phase(std::span<const Sample> stream, std::span<const double> phase)
{
    if (stream.size() != phase.size())
        throw std::invalid_argument("apply_phase: length mismatch");
    SampleStream out(stream.size());
    for (std::size_t k = 0; k < stream.size(); ++k)
        out[k] = stream[k] * std::polar(1.0, phase[k]);
    return out;
}

ChannelRealization emulate_channel(std::span<const Sample> tx, const LaserConfig& lasers,
                                   const std::optional<LinkConfig>& link,
                                   double symbol_rate_baud, Snr snr_db,
                                   const ChannelSeeds& seeds)
{
    if (tx.empty())
        throw std::invalid_argument("emulate_channel: empty input");
    if (!(symbol_rate_baud > 0.0))
        throw std::invalid_argument("emulate_channel: symbol rate must be > 0");
    lasers.validate();

    const double symbol_period = 1.0 / symbol_rate_baud;
    const double two_pi_ts = 2.0 * std::numbers::pi * symbol_period;
    const std::size_t len = tx.size();

    ChannelRealization out;
    out.tx_phase = gen_wiener_phase(len, two_pi_ts * lasers.delta_f_tx_hz, seeds.tx_pn);
    const double noise_variance =
        snr_db ? mean_power(tx) / std::pow(10.0, *snr_db / 10.0) : 0.0;

    const bool dispersive = link && link->accumulated_dispersion() > 0.0;
    if (!dispersive) {
        if (link)
            link->validate();
        out.lo_phase = gen_wiener_phase(len, two_pi_ts * lasers.delta_f_lo_hz, seeds.lo_pn);
        out.rx = apply_phase(tx, out.tx_phase);
        for (std::size_t k = 0; k < len; ++k)
            out.rx[k] *= std::polar(1.0, out.lo_phase[k]);
        if (snr_db)
            add_noise_in_place(out.rx, noise_variance, seeds.awgn);
        return out;
    }

    // Zero guards on both sides keep the circular convolutions from wrapping
    // dispersed energy (and the LO phase timeline) across the block edges.
    const double spread = link->delay_spread_symbols(symbol_rate_baud);
    const auto guard = static_cast<std::size_t>(std::ceil(spread)) + 16;
    const std::size_t fft_size = std::bit_ceil(std::max<std::size_t>(64, len + 2 * guard));

    SampleStream padded(fft_size, Sample{0.0, 0.0});
    for (std::size_t k = 0; k < len; ++k)
        padded[guard + k] = tx[k] * std::polar(1.0, out.tx_phase[k]);

    const FrequencyResponse cd = cd_response(*link, symbol_rate_baud, fft_size);
    padded = apply_response(padded, cd);

    const auto lo_full = gen_wiener_phase(fft_size, two_pi_ts * lasers.delta_f_lo_hz, seeds.lo_pn);
    for (std::size_t k = 0; k < fft_size; ++k)
        padded[k] *= std::polar(1.0, lo_full[k]);

    if (snr_db)
        add_noise_in_place(padded, noise_variance, seeds.awgn);

    padded = apply_response(padded, cd.conjugate());

    out.rx.assign(padded.begin() + static_cast<std::ptrdiff_t>(guard),
                  padded.begin() + static_cast<std::ptrdiff_t>(guard + len));
    out.lo_phase.assign(lo_full.begin() + static_cast<std::ptrdiff_t>(guard),
                        lo_full.begin() + static_cast<std::ptrdiff_t>(guard + len));
    return out;
}

}  // namespace cpe
