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

#include "cpe/experiment.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cpe {

/// A configuration problem tied to a dotted key path ("laser.delta_f_tx_khz").
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(key + ": " + message), key_(std::move(key))
    {
    }

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Ordered "section.key" -> raw value pairs as read from the file.
using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Simulation configuration resolved to SI units.
///
/// INI layout (unit suffixes are part of the key names):
///
///     [modulation]  n
///     [signal]      symbol_rate_gbaud
///     [laser]       delta_f_tx_khz, delta_f_lo_khz
///     [link]        dispersion_ps_nm_km, length_km, wavelength_nm   (optional section)
///     [cpe]         algorithm (nlms|bwa|vv or a comma list), block_size, mu, training_length (optional)
///     [sim]         num_symbols, num_trials, seed, snr_db (number or "off")
///     [sweep]       sigma2_grid (optional comma list, rad^2; switches to pure-PN mode)
struct SimulationConfig {
    ScenarioConfig scenario;              // scenario.cpe is algorithms.front()
    std::vector<CpeConfig> algorithms;
    std::optional<std::vector<double>> sigma2_grid;
    ConfigEntries entries;
};

SimulationConfig parse_config(const std::filesystem::path& path);
SimulationConfig parse_config_text(std::string_view text);

/// Floor-curve configuration for the `analytic` and `figures` commands. Keys:
/// modulation.n (comma list), cpe.block_size, and either sweep.sigma2_grid or
/// sweep.{sigma2_min, sigma2_max, points}. Keys of the simulation schema are
/// tolerated and ignored.
struct AnalyticConfig {
    std::vector<int> orders{4, 8, 16, 32, 64};
    std::size_t block_size = 15;
    std::vector<double> sigma2_grid;

    /// Five formats, N = 15, 41-point log grid over [1e-4, 1].
    static AnalyticConfig defaults();
};

AnalyticConfig parse_analytic_config(const std::filesystem::path& path);
AnalyticConfig parse_analytic_config_text(std::string_view text);

/// Entries rendered back to INI, grouped by section in first-seen order.
std::string render_ini(const ConfigEntries& entries);

/// Replaces (or adds) the value of `key`.
void set_entry(ConfigEntries& entries, const std::string& key, const std::string& value);

}  // namespace cpe
