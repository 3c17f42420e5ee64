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
#include "cpe/commands.hpp"

#include "cpe/analytic.hpp"
#include "cpe/config.hpp"
#include "cpe/experiment.hpp"
#include "cpe/report.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#ifndef CPE_VERSION
#define CPE_VERSION "0.0.0"
#endif

namespace cpe {
namespace {

using nlohmann::json;

constexpr std::size_t kFigurePoints = 61;

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(path.string(), "cannot open config file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// A manifest from an earlier run carries the full config text.
std::string config_text(const std::filesystem::path& path)
{
    std::string text = read_text(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{')
        return text;
    json manifest;
    try {
        manifest = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(path.string(), std::string("invalid manifest: ") + e.what());
    }
    if (!manifest.contains("config") || !manifest["config"].contains("text"))
        throw ConfigError("config.text", "manifest does not embed a config");
    return manifest["config"]["text"].get<std::string>();
}

json cpe_json(const CpeConfig& cpe)
{
    json j{{"algorithm", std::string(to_string(cpe.algorithm))}};
    if (cpe.algorithm == Algorithm::nlms) {
        j["mu"] = cpe.mu;
        j["training_length"] = cpe.training_length;
    } else {
        j["block_size"] = cpe.block_size;
    }
    return j;
}

json resolved_json(const SimulationConfig& config)
{
    const ScenarioConfig& s = config.scenario;
    json j;
    j["modulation_order"] = s.format.order();
    j["symbol_rate_baud"] = s.symbol_rate_baud;
    j["symbol_period_s"] = s.symbol_period();
    j["laser"] = {{"delta_f_tx_hz", s.lasers.delta_f_tx_hz}, {"delta_f_lo_hz", s.lasers.delta_f_lo_hz}};
    if (s.link)
        j["link"] = {{"dispersion_s_per_m2", s.link->dispersion_s_per_m2},
                     {"length_m", s.link->length_m},
                     {"wavelength_m", s.link->wavelength_m}};
    else
        j["link"] = nullptr;
    if (s.snr_db)
        j["snr_db"] = *s.snr_db;
    else
        j["snr_db"] = "off";
    j["cpe"] = json::array();
    for (const auto& cpe : config.algorithms)
        j["cpe"].push_back(cpe_json(cpe));
    j["num_symbols"] = s.num_symbols;
    j["num_trials"] = s.num_trials;
    j["base_seed"] = s.base_seed;
    if (config.sigma2_grid) {
        j["mode"] = "pure-pn sweep";
        j["sigma2_grid"] = *config.sigma2_grid;
    } else {
        const auto v = total_variance(s.lasers, s.link, s.symbol_period());
        j["mode"] = "channel";
        j["variance"] = {{"sigma2_tx_lo", v.sigma2_tx_lo},
                         {"sigma2_eepn", v.sigma2_eepn},
                         {"sigma2_total", v.sigma2_total},
                         {"rho", v.rho}};
    }
    return j;
}

void ensure_parent(const std::filesystem::path& path)
{
    const auto parent = path.parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent))
        throw std::runtime_error("output directory does not exist: " + parent.string());
}

}  // namespace

std::filesystem::path manifest_path(const std::filesystem::path& csv_path)
{
    std::filesystem::path p = csv_path;
    p += ".manifest.json";
    return p;
}

const std::vector<std::string>& figure_file_names()
{
    static const std::vector<std::string> names{"fig1_qpsk.csv", "fig2_8psk.csv", "fig3_16psk.csv",
                                                "fig4_32psk.csv", "fig5_64psk.csv"};
    return names;
}

std::string vv_nlms_note(std::size_t window)
{
    const double n = static_cast<double>(window);
    const double factor = 6.0 * n / (n * n - 1.0);
    const char* relation = factor > 0.5 ? "below" : (factor < 0.5 ? "above" : "equal to");
    return fmt::format(
        "VV window N={}: 6N/(N^2-1) = {:.4f} vs 1/2 for NLMS, so the VV floor is {} the NLMS "
        "floor at every sigma2 > 0 (VV is lower only for odd N <= 11)",
        window, factor, relation);
}

CommandReport cmd_analytic(const CommandOptions& options)
{
    const AnalyticConfig config =
        options.config ? parse_analytic_config(*options.config) : AnalyticConfig::defaults();
    ensure_parent(options.out);

    std::vector<ResultRow> rows;
    std::size_t outside = 0;
    for (const int order : config.orders) {
        const FloorCurve curve = floor_curves(order, config.sigma2_grid, config.block_size, config.block_size);
        for (const auto& p : curve.points)
            for (const double f : {p.nlms, p.bwa, p.vv})
                outside += !FloorCurve::visible(f);
        const auto r = analytic_rows(curve);
        rows.insert(rows.end(), r.begin(), r.end());
    }
    write_file_atomic(options.out, format_csv(rows));

    CommandReport report;
    report.files.push_back(options.out);
    report.notes.push_back(vv_nlms_note(config.block_size));
    report.notes.push_back(fmt::format("{} of {} floor values lie outside the plotted range [{:g}, {:g}]",
                                       outside, rows.size(), kVisibleFloorMin, kVisibleFloorMax));
    return report;
}

CommandReport cmd_figures(const CommandOptions& options)
{
    const AnalyticConfig config =
        options.config ? parse_analytic_config(*options.config) : AnalyticConfig::defaults();
    std::error_code ec;
    std::filesystem::create_directories(options.out, ec);
    if (!std::filesystem::is_directory(options.out))
        throw std::runtime_error("cannot create output directory " + options.out.string());

    CommandReport report;
    const int orders[] = {4, 8, 16, 32, 64};
    for (std::size_t i = 0; i < 5; ++i) {
        const auto grid = figure_grid(orders[i], config.block_size, config.block_size, kFigurePoints);
        const FloorCurve curve = floor_curves(orders[i], grid, config.block_size, config.block_size);
        const auto path = options.out / figure_file_names()[i];
        write_file_atomic(path, format_csv(analytic_rows(curve)));
        report.files.push_back(path);
    }
    report.notes.push_back(vv_nlms_note(config.block_size));
    return report;
}

CommandReport cmd_simulate(const CommandOptions& options)
{
    if (!options.config)
        throw ConfigError("--config", "simulate requires a config file");
    SimulationConfig config = parse_config_text(config_text(*options.config));
    if (options.seed) {
        config.scenario.base_seed = *options.seed;
        set_entry(config.entries, "sim.seed", std::to_string(*options.seed));
    }
    ensure_parent(options.out);

    CommandReport report;
    std::vector<ResultRow> rows;
    auto record = [&](const BerResult& r) {
        rows.push_back(simulation_row(r));
        if (!r.reliable())
            report.notes.push_back(fmt::format(
                "unreliable: {} sigma2={:g} observed {} errors (< {})", to_string(r.scenario.cpe.algorithm),
                r.sigma2_total, r.bit_errors, kMinReliableErrors));
    };

    if (config.sigma2_grid) {
        for (const auto& row : sweep(config.scenario, {*config.sigma2_grid, config.algorithms}, options.threads))
            record(row.result);
    } else {
        for (const auto& cpe : config.algorithms) {
            ScenarioConfig s = config.scenario;
            s.cpe = cpe;
            record(run_scenario(s, options.threads));
        }
    }

    const std::string csv = format_csv(rows);
    write_file_atomic(options.out, csv);

    json manifest;
    manifest["tool"] = "cpe_workbench";
    manifest["version"] = CPE_VERSION;
    manifest["command"] = "simulate";
    manifest["csv_schema"] = kCsvSchemaVersion;
    manifest["timestamp"] = utc_timestamp();
    manifest["base_seed"] = config.scenario.base_seed;
    manifest["config"] = {{"text", render_ini(config.entries)}};
    manifest["resolved"] = resolved_json(config);
    manifest["outputs"] = json::array(
        {{{"path", options.out.filename().string()}, {"sha256", sha256_hex(csv)}, {"bytes", csv.size()}}});
    manifest["notes"] = report.notes;

    const auto mpath = manifest_path(options.out);
    write_file_atomic(mpath, manifest.dump(2) + "\n");
    report.files.push_back(options.out);
    report.files.push_back(mpath);
    return report;
}

}  // namespace cpe
