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

#include "cpe/modulation.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace cpe {

inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s

/// 3-dB Lorentzian linewidths of the transmitter and local-oscillator lasers, in Hz.
struct LaserConfig {
    double delta_f_tx_hz = 0.0;
    double delta_f_lo_hz = 0.0;

    void validate() const;
};

/// Fibre link in SI units.
struct LinkConfig {
    double dispersion_s_per_m2 = 0.0;
    double length_m = 0.0;
    double wavelength_m = 1550e-9;

    /// D in ps/(nm km), L in km, lambda in nm.
    static LinkConfig from_engineering_units(double dispersion_ps_nm_km, double length_km,
                                             double wavelength_nm);

    /// D * lambda^2 * L / c, in s^2.
    double accumulated_dispersion() const noexcept;
    /// Group-delay spread across the symbol-rate bandwidth, in symbol periods.
    double delay_spread_symbols(double symbol_rate_baud) const noexcept;

    void validate() const;
};

struct ChannelSeeds {
    std::uint64_t tx_pn = 0;
    std::uint64_t lo_pn = 0;
    std::uint64_t awgn = 0;

    /// Independent streams 1, 2, 3 of `trial_seed` (stream 0 is reserved for data bits).
    static ChannelSeeds derive(std::uint64_t trial_seed) noexcept;
};

/// Per-symbol SNR in dB; std::nullopt switches AWGN off.
using Snr = std::optional<double>;

/// Wiener phase: phi(0) = 0, increments i.i.d. N(0, variance_per_symbol).
std::vector<double> gen_wiener_phase(std::size_t length, double variance_per_symbol,
                                     std::uint64_t seed);

/// All-pass response on an FFT grid. Bin k holds frequency k*Rs/N for k < N/2 and
/// (k - N)*Rs/N otherwise.
struct FrequencyResponse {
    std::vector<Sample> bins;
    double delay_spread_symbols = 0.0;

    std::size_t size() const noexcept { return bins.size(); }
    /// The compensating (conjugate) response.
    FrequencyResponse conjugate() const;
};

/// H(f) = exp(j*pi*(D*lambda^2/c)*L*f^2). fft_size must be a power of two >= 64.
FrequencyResponse cd_response(const LinkConfig& link, double symbol_rate_baud,
                              std::size_t fft_size);

/// Circular convolution of one block with `response`; the stream length must
/// equal the response size. Callers that need linear convolution pad with a
/// guard of at least the delay spread on both sides (see emulate_channel).
SampleStream apply_response(std::span<const Sample> stream, const FrequencyResponse& response);

/// Adds circular complex Gaussian noise of variance mean|x|^2 / 10^(snr/10).
SampleStream add_awgn(std::span<const Sample> stream, Snr snr_db, std::uint64_t seed);

/// x(k) * exp(j*phase(k)).
SampleStream apply_phase(std::span<const Sample> stream, std::span<const double> phase);

struct ChannelRealization {
    SampleStream rx;
    std::vector<double> tx_phase;  // per symbol
    std::vector<double> lo_phase;  // per symbol, on the same time axis as rx
};

/// Tx phase noise -> CD -> LO phase noise -> AWGN -> CD compensation.
/// Without a link (or with zero accumulated dispersion) both CD stages are skipped.
/// The Tx phase noise is a pure rotation at the output; the LO phase noise,
/// having seen only the compensator, turns into equalization-enhanced phase noise.
ChannelRealization emulate_channel(std::span<const Sample> tx, const LaserConfig& lasers,
                                   const std::optional<LinkConfig>& link,
                                   double symbol_rate_baud, Snr snr_db,
                                   const ChannelSeeds& seeds);

}  // namespace cpe
