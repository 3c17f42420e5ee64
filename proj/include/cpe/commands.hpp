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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cpe {

/// Options shared by the `analytic`, `simulate` and `figures` commands.
struct CommandOptions {
    std::optional<std::filesystem::path> config;
    std::filesystem::path out;
    std::optional<std::uint64_t> seed;  // overrides sim.seed
    unsigned threads = 1;               // speed only, never results
};

struct CommandReport {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> notes;
};

/// Analytic floors for every requested format and grid point, one CSV with an
/// `n` column. Without a config file the defaults of AnalyticConfig are used.
CommandReport cmd_analytic(const CommandOptions& options);

/// Monte-Carlo run (or pure-PN sweep when sweep.sigma2_grid is set). Writes the
/// CSV and "<out>.manifest.json". The config may also be a manifest written by
/// an earlier run, which replays that run.
CommandReport cmd_simulate(const CommandOptions& options);

/// fig1_qpsk.csv .. fig5_64psk.csv in the `out` directory.
CommandReport cmd_figures(const CommandOptions& options);

/// File names written by cmd_figures, in format order 4..64.
const std::vector<std::string>& figure_file_names();

/// States how the VV and NLMS floors compare for a given VV window.
std::string vv_nlms_note(std::size_t window);

std::filesystem::path manifest_path(const std::filesystem::path& csv_path);

}  // namespace cpe
