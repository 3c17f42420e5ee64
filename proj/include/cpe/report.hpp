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

#include "cpe/analytic.hpp"
#include "cpe/experiment.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cpe {

inline constexpr int kCsvSchemaVersion = 1;
inline constexpr std::string_view kCsvHeader =
    "sigma2_total,n,algorithm,block_size,mu,ber_floor_analytic,ber_mc,ci_low,ci_high,num_symbols,seed";

/// One CSV line. Empty optionals are written as empty fields.
struct ResultRow {
    double sigma2_total = 0.0;
    int n = 4;
    Algorithm algorithm = Algorithm::nlms;
    std::optional<std::size_t> block_size;
    std::optional<double> mu;
    double ber_floor_analytic = 0.0;
    std::optional<double> ber_mc;
    std::optional<double> ci_low;
    std::optional<double> ci_high;
    std::optional<std::size_t> num_symbols;
    std::optional<std::uint64_t> seed;
};

/// Header plus rows, LF line endings, numbers with 17 significant digits.
std::string format_csv(std::span<const ResultRow> rows);

/// Three rows (nlms, bwa, vv) per grid point; MC columns empty.
std::vector<ResultRow> analytic_rows(const FloorCurve& curve);

ResultRow simulation_row(const BerResult& result);

/// Writes to "<path>.tmp" and renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string sha256_hex(std::string_view data);

}  // namespace cpe
