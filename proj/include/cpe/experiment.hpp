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

#include "cpe/channel.hpp"
#include "cpe/estimators.hpp"
#include "cpe/modulation.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace cpe {

enum class Algorithm { nlms, bwa, vv };

std::string_view to_string(Algorithm algorithm) noexcept;
/// Accepts "nlms", "bwa", "vv"; throws std::invalid_argument otherwise.
Algorithm parse_algorithm(std::string_view name);

struct CpeConfig {
    Algorithm algorithm = Algorithm::vv;
    std::size_t block_size = 15;        // BWA block / VV window
    double mu = 0.1;                    // NLMS step size
    std::size_t training_length = 500;  // NLMS training prefix

    /// Symbols at the head of the stream that are excluded from bit counting
    /// in addition to the differential reference.
    std::size_t excluded_symbols() const noexcept;
    void validate() const;
};

struct ScenarioConfig {
    ModulationFormat format{4};
    LaserConfig lasers;
    std::optional<LinkConfig> link;     // absent: back-to-back
    double symbol_rate_baud = 28e9;
    Snr snr_db;                         // absent: AWGN off
    CpeConfig cpe;
    std::size_t num_symbols = 100000;   // per trial, including the reference symbol
    std::size_t num_trials = 1;
    std::uint64_t base_seed = 1;
    /// Pure-PN mode: a single Wiener process of this per-symbol variance
    /// replaces the lasers and the CD/EDC stages.
    std::optional<double> pure_pn_sigma2;

    double symbol_period() const noexcept { return 1.0 / symbol_rate_baud; }
    /// Requested pure-PN variance, or the laser + EEPN total.
    double sigma2_total() const;
    void validate() const;
};

/// Analytic floor of the scenario's algorithm at its total variance.
double analytic_floor(const ScenarioConfig& scenario);

struct BitErrorCount {
    std::uint64_t errors = 0;
    std::uint64_t total = 0;
};

/// Hamming distance; throws std::invalid_argument on a length mismatch.
BitErrorCount count_bit_errors(std::span<const std::uint8_t> tx_bits,
                               std::span<const std::uint8_t> rx_bits);

struct ConfidenceInterval {
    double low = 0.0;
    double high = 0.0;
};

/// 95% Wilson score interval for `errors` out of `total` Bernoulli trials.
ConfidenceInterval wilson_interval(std::uint64_t errors, std::uint64_t total);

/// Fewer errors than this mark a result as statistically unreliable.
inline constexpr std::uint64_t kMinReliableErrors = 25;

struct BerResult {
    std::uint64_t bit_errors = 0;
    std::uint64_t bits_counted = 0;
    double ber = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double analytic_floor = 0.0;
    double sigma2_total = 0.0;
    std::uint64_t seed = 0;             // trial seed for run_trial, base seed for pooled results
    ScenarioConfig scenario;

    bool reliable() const noexcept { return bit_errors >= kMinReliableErrors; }
};

/// Seed of trial t: derive_seed(base_seed, t).
std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial_index) noexcept;

/// random bits -> differential_encode -> channel -> CPE -> differential_decode -> count.
BerResult run_trial(const ScenarioConfig& scenario, std::uint64_t trial_index);

/// Pools errors and bits over num_trials independent trials. `threads` only
/// changes speed; the result is identical for any value.
BerResult run_scenario(const ScenarioConfig& scenario, unsigned threads = 1);

/// Pools per-trial results in the given order.
BerResult pool_results(const ScenarioConfig& scenario, std::span<const BerResult> trials);

struct SweepSpec {
    std::vector<double> sigma2_grid;
    /// Empty: the base scenario's CPE only.
    std::vector<CpeConfig> algorithms;
};

struct SweepRow {
    double sigma2_total = 0.0;
    CpeConfig cpe;
    BerResult result;
};

/// Pure-PN sweep: one row per (grid point, algorithm), grid-major. The
/// linewidth echoed in each row's scenario is back-solved from the variance
/// with the link disabled.
std::vector<SweepRow> sweep(const ScenarioConfig& base, const SweepSpec& spec, unsigned threads = 1);

/// Runs fn(i) for i in [0, count) on up to `threads` workers and rethrows the
/// first exception.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

// ---------------------------------------------------------------------------
// Phase-noise measurements on a channel realization
// ---------------------------------------------------------------------------

struct PhaseNoiseMeasurement {
    /// Sample variance of the per-symbol increments of the laser phase (Tx + LO).
    double intrinsic_increment_variance = 0.0;
    /// Mean |rx conj(tx) exp(-j(phi_tx + phi_lo)) - 1|^2: the distortion a
    /// receiver tracking the laser phase perfectly would still see (EEPN).
    double eepn_distortion_power = 0.0;
    std::size_t samples = 0;

    double effective_variance() const noexcept
    {
        return intrinsic_increment_variance + eepn_distortion_power;
    }
};

/// Ignores `edge_guard` symbols at each end.
PhaseNoiseMeasurement measure_phase_noise(std::span<const Sample> tx,
                                          const ChannelRealization& channel,
                                          std::size_t edge_guard);

/// Sample variance of arg(z(k) z*(k-1)) with z = rx conj(tx), ignoring
/// `edge_guard` symbols at each end.
double recovered_increment_variance(std::span<const Sample> tx, std::span<const Sample> rx,
                                    std::size_t edge_guard);

}  // namespace cpe
