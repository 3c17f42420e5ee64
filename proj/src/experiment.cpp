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
#include "cpe/experiment.hpp"

#include "cpe/analytic.hpp"
#include "cpe/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

namespace cpe {
namespace {

Bits random_bits(std::size_t count, std::uint64_t seed)
{
    CounterRng rng(seed);
    Bits bits(count);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (i % 64 == 0)
            word = rng();
        bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
    }
    return bits;
}

SampleStream run_cpe(const SampleStream& rx, const SampleStream& tx, const ModulationFormat& format,
                     const CpeConfig& cpe)
{
    switch (cpe.algorithm) {
    case Algorithm::nlms: {
        NlmsConfig config;
        config.mu = cpe.mu;
        config.training_length = cpe.training_length;
        config.mode = cpe.training_length > 0 ? NlmsMode::training : NlmsMode::decision_directed;
        return nlms_cpe(rx, build_constellation(format), config, tx).output;
    }
    case Algorithm::bwa:
        return bwa_cpe(rx, format, BwaConfig{cpe.block_size}).corrected;
    case Algorithm::vv:
        return vv_cpe(rx, format, VvConfig{cpe.block_size}).corrected;
    }
    throw std::logic_error("unknown algorithm");
}

double sample_variance(std::span<const double> values)
{
    if (values.size() < 2)
        return 0.0;
    double mean = 0.0;
    for (const double v : values)
        mean += v;
    mean /= static_cast<double>(values.size());
    double acc = 0.0;
    for (const double v : values)
        acc += (v - mean) * (v - mean);
    return acc / static_cast<double>(values.size() - 1);
}

void check_guard(std::size_t length, std::size_t edge_guard)
{
    if (length < 2 * edge_guard + 2)
        throw std::invalid_argument("stream too short for the requested edge guard");
}

}  // namespace

std::string_view to_string(Algorithm algorithm) noexcept
{
    switch (algorithm) {
    case Algorithm::nlms:
        return "nlms";
    case Algorithm::bwa:
        return "bwa";
    case Algorithm::vv:
        return "vv";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view name)
{
    if (name == "nlms")
        return Algorithm::nlms;
    if (name == "bwa")
        return Algorithm::bwa;
    if (name == "vv")
        return Algorithm::vv;
    throw std::invalid_argument("unknown CPE algorithm '" + std::string(name) +
                                "' (expected nlms, bwa or vv)");
}

std::size_t CpeConfig::excluded_symbols() const noexcept
{
    return algorithm == Algorithm::nlms ? training_length : 0;
}

void CpeConfig::validate() const
{
    switch (algorithm) {
    case Algorithm::nlms: {
        NlmsConfig config;
        config.mu = mu;
        config.validate();
        break;
    }
    case Algorithm::bwa:
        BwaConfig{block_size}.validate();
        break;
    case Algorithm::vv:
        VvConfig{block_size}.validate();
        break;
    }
}

double ScenarioConfig::sigma2_total() const
{
    if (pure_pn_sigma2)
        return *pure_pn_sigma2;
    return total_variance(lasers, link, symbol_period()).sigma2_total;
}

void ScenarioConfig::validate() const
{
    lasers.validate();
    if (link)
        link->validate();
    if (!(symbol_rate_baud > 0.0))
        throw std::invalid_argument("symbol rate must be > 0");
    cpe.validate();
    if (num_trials < 1)
        throw std::invalid_argument("num_trials must be >= 1");
    if (pure_pn_sigma2 && !(*pure_pn_sigma2 >= 0.0))
        throw std::invalid_argument("pure-PN variance must be >= 0");
    const std::size_t span =
        cpe.algorithm == Algorithm::nlms ? cpe.training_length : cpe.block_size;
    if (num_symbols < 10 * std::max<std::size_t>(span, 1))
        throw std::invalid_argument("num_symbols " + std::to_string(num_symbols) +
                                    " must be >= 10 x " + std::to_string(span) +
                                    (cpe.algorithm == Algorithm::nlms ? " (training length)"
                                                                      : " (block size)"));
}

double analytic_floor(const ScenarioConfig& scenario)
{
    const int n = scenario.format.order();
    const double s2 = scenario.sigma2_total();
    switch (scenario.cpe.algorithm) {
    case Algorithm::nlms:
        return ber_floor_nlms(n, s2);
    case Algorithm::bwa:
        return ber_floor_bwa(n, s2, scenario.cpe.block_size);
    case Algorithm::vv:
        return ber_floor_vv(n, s2, scenario.cpe.block_size);
    }
    throw std::logic_error("unknown algorithm");
}

BitErrorCount count_bit_errors(std::span<const std::uint8_t> tx_bits,
                               std::span<const std::uint8_t> rx_bits)
{
    if (tx_bits.size() != rx_bits.size())
        throw std::invalid_argument("count_bit_errors: length mismatch (" +
                                    std::to_string(tx_bits.size()) + " vs " +
                                    std::to_string(rx_bits.size()) + ")");
    BitErrorCount count{0, tx_bits.size()};
    for (std::size_t i = 0; i < tx_bits.size(); ++i)
        count.errors += (tx_bits[i] & 1u) != (rx_bits[i] & 1u);
    return count;
}

ConfidenceInterval wilson_interval(std::uint64_t errors, std::uint64_t total)
{
    if (total == 0)
        return {0.0, 1.0};
    constexpr double z = 1.959963984540054;
    const double n = static_cast<double>(total);
    const double p = static_cast<double>(errors) / n;
    const double z2n = z * z / n;
    const double centre = (p + z2n / 2.0) / (1.0 + z2n);
    const double half = z / (1.0 + z2n) * std::sqrt(p * (1.0 - p) / n + z2n / (4.0 * n));
    return {std::max(0.0, std::min(p, centre - half)), std::min(1.0, std::max(p, centre + half))};
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial_index) noexcept
{
    return derive_seed(base_seed, trial_index);
}

BerResult run_trial(const ScenarioConfig& scenario, std::uint64_t trial_index)
{
    scenario.validate();
    const ModulationFormat& format = scenario.format;
    const auto b = static_cast<std::size_t>(format.bits_per_symbol());
    const std::uint64_t seed = trial_seed(scenario.base_seed, trial_index);
    const ChannelSeeds seeds = ChannelSeeds::derive(seed);

    const Bits tx_bits = random_bits((scenario.num_symbols - 1) * b, derive_seed(seed, 0));
    const SampleStream tx = differential_encode(tx_bits, format);

    SampleStream rx;
    if (scenario.pure_pn_sigma2) {
        const auto phase = gen_wiener_phase(tx.size(), *scenario.pure_pn_sigma2, seeds.tx_pn);
        rx = add_awgn(apply_phase(tx, phase), scenario.snr_db, seeds.awgn);
    } else {
        rx = emulate_channel(tx, scenario.lasers, scenario.link, scenario.symbol_rate_baud,
                             scenario.snr_db, seeds)
                 .rx;
    }

    const SampleStream corrected = run_cpe(rx, tx, format, scenario.cpe);
    const Bits rx_bits = differential_decode(corrected, format);

    const std::size_t skip = std::min(scenario.cpe.excluded_symbols(), scenario.num_symbols - 1) * b;
    const auto count = count_bit_errors(std::span(tx_bits).subspan(skip),
                                        std::span(rx_bits).subspan(skip));

    BerResult result;
    result.bit_errors = count.errors;
    result.bits_counted = count.total;
    result.ber = count.total ? static_cast<double>(count.errors) / static_cast<double>(count.total) : 0.0;
    const auto ci = wilson_interval(count.errors, count.total);
    result.ci_low = ci.low;
    result.ci_high = ci.high;
    result.sigma2_total = scenario.sigma2_total();
    result.analytic_floor = analytic_floor(scenario);
    result.seed = seed;
    result.scenario = scenario;
    return result;
}

BerResult pool_results(const ScenarioConfig& scenario, std::span<const BerResult> trials)
{
    BerResult pooled;
    for (const auto& t : trials) {
        pooled.bit_errors += t.bit_errors;
        pooled.bits_counted += t.bits_counted;
    }
    pooled.ber = pooled.bits_counted
                     ? static_cast<double>(pooled.bit_errors) / static_cast<double>(pooled.bits_counted)
                     : 0.0;
    const auto ci = wilson_interval(pooled.bit_errors, pooled.bits_counted);
    pooled.ci_low = ci.low;
    pooled.ci_high = ci.high;
    pooled.sigma2_total = scenario.sigma2_total();
    pooled.analytic_floor = analytic_floor(scenario);
    pooled.seed = scenario.base_seed;
    pooled.scenario = scenario;
    return pooled;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn)
{
    const std::size_t workers = std::min<std::size_t>(std::max(threads, 1u), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::scoped_lock lock(failure_mutex);
                        if (!failure)
                            failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure)
        std::rethrow_exception(failure);
}

BerResult run_scenario(const ScenarioConfig& scenario, unsigned threads)
{
    scenario.validate();
    std::vector<BerResult> trials(scenario.num_trials);
    parallel_for(trials.size(), threads, [&](std::size_t t) { trials[t] = run_trial(scenario, t); });
    return pool_results(scenario, trials);
}

std::vector<SweepRow> sweep(const ScenarioConfig& base, const SweepSpec& spec, unsigned threads)
{
    if (spec.sigma2_grid.empty())
        throw std::invalid_argument("sweep: empty sigma2 grid");
    const std::vector<CpeConfig> algorithms =
        spec.algorithms.empty() ? std::vector<CpeConfig>{base.cpe} : spec.algorithms;

    std::vector<ScenarioConfig> scenarios;
    for (const double s2 : spec.sigma2_grid) {
        for (const auto& cpe : algorithms) {
            ScenarioConfig s = base;
            s.cpe = cpe;
            s.pure_pn_sigma2 = s2;
            s.link.reset();
            s.lasers = LaserConfig{s2 / (2.0 * std::numbers::pi * s.symbol_period()), 0.0};
            s.validate();
            scenarios.push_back(s);
        }
    }

    // Every (scenario, trial) pair is an independent work unit; pooling
    // happens afterwards in trial order.
    const std::size_t per = base.num_trials;
    std::vector<BerResult> trials(scenarios.size() * per);
    parallel_for(trials.size(), threads, [&](std::size_t i) {
        trials[i] = run_trial(scenarios[i / per], i % per);
    });

    std::vector<SweepRow> rows;
    rows.reserve(scenarios.size());
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
        const auto pooled = pool_results(scenarios[s], std::span(trials).subspan(s * per, per));
        rows.push_back({*scenarios[s].pure_pn_sigma2, scenarios[s].cpe, pooled});
    }
    return rows;
}

PhaseNoiseMeasurement measure_phase_noise(std::span<const Sample> tx,
                                          const ChannelRealization& channel,
                                          std::size_t edge_guard)
{
    const std::size_t len = tx.size();
    if (channel.rx.size() != len || channel.tx_phase.size() != len || channel.lo_phase.size() != len)
        throw std::invalid_argument("measure_phase_noise: length mismatch");
    check_guard(len, edge_guard);

    std::vector<double> increments;
    increments.reserve(len - 2 * edge_guard);
    double distortion = 0.0;
    for (std::size_t k = edge_guard; k < len - edge_guard; ++k) {
        const double laser = channel.tx_phase[k] + channel.lo_phase[k];
        distortion += std::norm(channel.rx[k] * std::conj(tx[k]) * std::polar(1.0, -laser) - 1.0);
        if (k > edge_guard) {
            const double previous = channel.tx_phase[k - 1] + channel.lo_phase[k - 1];
            increments.push_back(laser - previous);
        }
    }

    PhaseNoiseMeasurement m;
    m.samples = len - 2 * edge_guard;
    m.intrinsic_increment_variance = sample_variance(increments);
    m.eepn_distortion_power = distortion / static_cast<double>(m.samples);
    return m;
}

double recovered_increment_variance(std::span<const Sample> tx, std::span<const Sample> rx,
                                    std::size_t edge_guard)
{
    if (tx.size() != rx.size())
        throw std::invalid_argument("recovered_increment_variance: length mismatch");
    check_guard(tx.size(), edge_guard);
    std::vector<double> increments;
    increments.reserve(tx.size());
    for (std::size_t k = edge_guard + 1; k < tx.size() - edge_guard; ++k) {
        const Sample z = rx[k] * std::conj(tx[k]);
        const Sample z_prev = rx[k - 1] * std::conj(tx[k - 1]);
        increments.push_back(std::arg(z * std::conj(z_prev)));
    }
    return sample_variance(increments);
}

}  // namespace cpe
