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
#include "cpe/report.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <fstream>
#include <memory>
#include <stdexcept>
#include <system_error>

namespace cpe {
namespace {

template <class T>
std::string field(const std::optional<T>& value)
{
    if (!value)
        return {};
    if constexpr (std::is_floating_point_v<T>)
        return fmt::format("{:.17g}", *value);
    else
        return fmt::format("{}", *value);
}

}  // namespace

std::string format_csv(std::span<const ResultRow> rows)
{
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += fmt::format("{:.17g},{},{},{},{},{:.17g},{},{},{},{},{}\n", r.sigma2_total, r.n,
                           to_string(r.algorithm), field(r.block_size), field(r.mu),
                           r.ber_floor_analytic, field(r.ber_mc), field(r.ci_low), field(r.ci_high),
                           field(r.num_symbols), field(r.seed));
    }
    return out;
}

std::vector<ResultRow> analytic_rows(const FloorCurve& curve)
{
    std::vector<ResultRow> rows;
    rows.reserve(3 * curve.points.size());
    for (const auto& p : curve.points) {
        ResultRow nlms{p.sigma2_total, curve.order, Algorithm::nlms, {}, {}, p.nlms, {}, {}, {}, {}, {}};
        ResultRow bwa{p.sigma2_total, curve.order, Algorithm::bwa, curve.bwa_block_size, {}, p.bwa, {}, {}, {}, {}, {}};
        ResultRow vv{p.sigma2_total, curve.order, Algorithm::vv, curve.vv_window, {}, p.vv, {}, {}, {}, {}, {}};
        rows.push_back(nlms);
        rows.push_back(bwa);
        rows.push_back(vv);
    }
    return rows;
}

ResultRow simulation_row(const BerResult& result)
{
    const ScenarioConfig& s = result.scenario;
    ResultRow row;
    row.sigma2_total = result.sigma2_total;
    row.n = s.format.order();
    row.algorithm = s.cpe.algorithm;
    if (s.cpe.algorithm == Algorithm::nlms)
        row.mu = s.cpe.mu;
    else
        row.block_size = s.cpe.block_size;
    row.ber_floor_analytic = result.analytic_floor;
    row.ber_mc = result.ber;
    row.ci_low = result.ci_low;
    row.ci_high = result.ci_high;
    row.num_symbols = s.num_symbols;
    row.seed = result.seed;
    return row;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw std::runtime_error("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                                 ec.message());
    }
}

std::string sha256_hex(std::string_view data)
{
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1)
        throw std::runtime_error("sha256 failed");
    std::string hex;
    for (unsigned int i = 0; i < length; ++i)
        hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

}  // namespace cpe
