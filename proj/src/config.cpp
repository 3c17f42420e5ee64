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
#include "cpe/config.hpp"

#include "cpe/analytic.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace cpe {
namespace {

const std::vector<std::string>& simulation_keys()
{
    static const std::vector<std::string> keys{
        "modulation.n",         "signal.symbol_rate_gbaud", "laser.delta_f_tx_khz",
        "laser.delta_f_lo_khz", "link.dispersion_ps_nm_km", "link.length_km",
        "link.wavelength_nm",   "cpe.algorithm",            "cpe.block_size",
        "cpe.mu",               "cpe.training_length",      "sim.num_symbols",
        "sim.num_trials",       "sim.seed",                 "sim.snr_db",
        "sweep.sigma2_grid"};
    return keys;
}

const std::vector<std::string>& analytic_only_keys()
{
    static const std::vector<std::string> keys{"sweep.sigma2_min", "sweep.sigma2_max",
                                               "sweep.points"};
    return keys;
}

std::size_t edit_distance(std::string_view a, std::string_view b)
{
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j)
        row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diagonal = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t above = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diagonal + (a[i - 1] != b[j - 1])});
            diagonal = above;
        }
    }
    return row[b.size()];
}

std::string section_of(std::string_view key)
{
    return std::string(key.substr(0, key.find('.')));
}

std::string name_of(std::string_view key)
{
    const auto dot = key.find('.');
    return std::string(dot == std::string_view::npos ? key : key.substr(dot + 1));
}

// Nearest known key, preferring keys of the same section; ties go to the
// earlier key in schema order.
std::string suggest(std::string_view unknown, const std::vector<std::string>& known)
{
    const std::string section = section_of(unknown);
    const std::string name = name_of(unknown);
    bool same_section = std::any_of(known.begin(), known.end(),
                                    [&](const std::string& k) { return section_of(k) == section; });
    std::string best;
    std::size_t best_distance = std::string::npos;
    for (const auto& k : known) {
        if (same_section && section_of(k) != section)
            continue;
        const std::size_t d = same_section ? edit_distance(name, name_of(k)) : edit_distance(unknown, k);
        if (d < best_distance) {
            best_distance = d;
            best = k;
        }
    }
    return best;
}

std::string strip_hash_comments(std::string_view text)
{
    std::string out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t");
        if (first != std::string::npos && line[first] == '#')
            line.clear();
        out += line;
        out += '\n';
    }
    return out;
}

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

ConfigEntries read_entries(std::string_view text)
{
    boost::property_tree::ptree tree;
    std::istringstream in(strip_hash_comments(text));
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("line " + std::to_string(e.line()), e.message());
    }

    ConfigEntries entries;
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            if (!body.data().empty())
                throw ConfigError(section, "keys must be placed inside a [section]");
            continue;
        }
        for (const auto& [key, value] : body)
            entries.emplace_back(section + "." + key, trim(value.data()));
    }
    return entries;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(path.string(), "cannot open config file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

class EntryView {
public:
    EntryView(const ConfigEntries& entries, const std::vector<std::string>& accepted,
              const std::vector<std::string>& suggestions)
    {
        std::set<std::string> allowed(accepted.begin(), accepted.end());
        for (const auto& [key, value] : entries) {
            if (!allowed.contains(key)) {
                const std::string hint = suggest(key, suggestions);
                throw ConfigError(key, "unknown key" +
                                           (hint.empty() ? std::string() : "; did you mean '" + hint + "'?"));
            }
            values_[key] = value;
        }
    }

    bool has(const std::string& key) const { return values_.contains(key); }
    bool has_section(const std::string& section) const
    {
        return std::any_of(values_.begin(), values_.end(),
                           [&](const auto& kv) { return section_of(kv.first) == section; });
    }

    const std::string& raw(const std::string& key) const
    {
        const auto it = values_.find(key);
        if (it == values_.end())
            throw ConfigError(key, "missing required key");
        return it->second;
    }

    double number(const std::string& key) const { return parse_number(key, raw(key)); }

    std::size_t count(const std::string& key) const { return parse_count(key, raw(key)); }

    std::vector<std::string> list(const std::string& key) const
    {
        std::vector<std::string> items;
        std::string item;
        std::istringstream in(raw(key));
        while (std::getline(in, item, ','))
            items.push_back(trim(item));
        if (items.empty() || std::any_of(items.begin(), items.end(), [](auto& s) { return s.empty(); }))
            throw ConfigError(key, "expected a comma-separated list without empty items");
        return items;
    }

    static double parse_number(const std::string& key, const std::string& text)
    {
        double value = 0.0;
        const char* end = text.data() + text.size();
        const auto [ptr, ec] = std::from_chars(text.data(), end, value);
        if (ec != std::errc() || ptr != end || !std::isfinite(value))
            throw ConfigError(key, "expected a finite number, got '" + text + "'");
        return value;
    }

    static std::size_t parse_count(const std::string& key, const std::string& text)
    {
        // Integers, or exact integral values such as "1e6".
        const double value = parse_number(key, text);
        if (value < 0.0 || value != std::floor(value) || value > 9007199254740992.0)
            throw ConfigError(key, "expected a nonnegative integer, got '" + text + "'");
        return static_cast<std::size_t>(value);
    }

private:
    std::map<std::string, std::string> values_;
};

std::uint64_t parse_seed(const std::string& key, const std::string& text)
{
    std::uint64_t value = 0;
    const bool hex = text.starts_with("0x") || text.starts_with("0X");
    const char* begin = text.data() + (hex ? 2 : 0);
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value, hex ? 16 : 10);
    if (ec != std::errc() || ptr != end || begin == end)
        throw ConfigError(key, "expected an unsigned 64-bit integer, got '" + text + "'");
    return value;
}

std::vector<double> parse_grid(const EntryView& view, const std::string& key)
{
    std::vector<double> grid;
    for (const auto& item : view.list(key)) {
        const double v = EntryView::parse_number(key, item);
        if (v < 0.0)
            throw ConfigError(key, "variances must be >= 0");
        if (!grid.empty() && !(v > grid.back()))
            throw ConfigError(key, "grid must be strictly increasing");
        grid.push_back(v);
    }
    return grid;
}

int parse_order(const std::string& key, const std::string& text)
{
    const double v = EntryView::parse_number(key, text);
    try {
        if (v != std::floor(v) || v > 1024.0)
            throw std::invalid_argument("unsupported order " + text);
        return ModulationFormat(static_cast<int>(v)).order();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(key, e.what());
    }
}

template <class Fn>
auto with_key(const std::string& key, Fn&& fn)
{
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(key, e.what());
    }
}

SimulationConfig resolve_simulation(ConfigEntries entries)
{
    const EntryView view(entries, simulation_keys(), simulation_keys());
    SimulationConfig config;
    ScenarioConfig& s = config.scenario;

    s.format = ModulationFormat(parse_order("modulation.n", view.raw("modulation.n")));

    const double gbaud = view.number("signal.symbol_rate_gbaud");
    if (!(gbaud > 0.0))
        throw ConfigError("signal.symbol_rate_gbaud", "must be > 0");
    s.symbol_rate_baud = gbaud * 1e9;

    s.lasers.delta_f_tx_hz = view.number("laser.delta_f_tx_khz") * 1e3;
    s.lasers.delta_f_lo_hz = view.number("laser.delta_f_lo_khz") * 1e3;
    if (s.lasers.delta_f_tx_hz < 0.0)
        throw ConfigError("laser.delta_f_tx_khz", "must be >= 0");
    if (s.lasers.delta_f_lo_hz < 0.0)
        throw ConfigError("laser.delta_f_lo_khz", "must be >= 0");

    if (view.has_section("link")) {
        const double d = view.number("link.dispersion_ps_nm_km");
        const double l = view.number("link.length_km");
        const double w = view.number("link.wavelength_nm");
        if (d < 0.0)
            throw ConfigError("link.dispersion_ps_nm_km", "must be >= 0");
        if (l < 0.0)
            throw ConfigError("link.length_km", "must be >= 0");
        if (!(w > 0.0))
            throw ConfigError("link.wavelength_nm", "must be > 0");
        s.link = LinkConfig::from_engineering_units(d, l, w);
    }

    const std::size_t block_size = view.count("cpe.block_size");
    const double mu = view.number("cpe.mu");
    const std::size_t training = view.has("cpe.training_length") ? view.count("cpe.training_length") : 500;
    for (const auto& name : view.list("cpe.algorithm")) {
        CpeConfig cpe;
        cpe.algorithm = with_key("cpe.algorithm", [&] { return parse_algorithm(name); });
        cpe.block_size = block_size;
        cpe.mu = mu;
        cpe.training_length = training;
        const std::string key = cpe.algorithm == Algorithm::nlms ? "cpe.mu" : "cpe.block_size";
        with_key(key, [&] { cpe.validate(); });
        config.algorithms.push_back(cpe);
    }
    s.cpe = config.algorithms.front();

    s.num_symbols = view.count("sim.num_symbols");
    s.num_trials = view.count("sim.num_trials");
    if (s.num_trials < 1)
        throw ConfigError("sim.num_trials", "must be >= 1");
    s.base_seed = parse_seed("sim.seed", view.raw("sim.seed"));
    const std::string snr = view.raw("sim.snr_db");
    if (snr == "off")
        s.snr_db.reset();
    else
        s.snr_db = EntryView::parse_number("sim.snr_db", snr);

    for (const auto& cpe : config.algorithms) {
        ScenarioConfig probe = s;
        probe.cpe = cpe;
        with_key("sim.num_symbols", [&] { probe.validate(); });
    }

    if (view.has("sweep.sigma2_grid"))
        config.sigma2_grid = parse_grid(view, "sweep.sigma2_grid");

    config.entries = std::move(entries);
    return config;
}

AnalyticConfig resolve_analytic(const ConfigEntries& entries)
{
    std::vector<std::string> accepted = simulation_keys();
    accepted.insert(accepted.end(), analytic_only_keys().begin(), analytic_only_keys().end());
    const EntryView view(entries, accepted, accepted);

    AnalyticConfig config = AnalyticConfig::defaults();
    if (view.has("modulation.n")) {
        config.orders.clear();
        for (const auto& item : view.list("modulation.n"))
            config.orders.push_back(parse_order("modulation.n", item));
    }
    if (view.has("cpe.block_size")) {
        config.block_size = view.count("cpe.block_size");
        with_key("cpe.block_size", [&] { VvConfig{config.block_size}.validate(); });
    }

    const bool explicit_grid = view.has("sweep.sigma2_grid");
    const bool range = view.has("sweep.sigma2_min") || view.has("sweep.sigma2_max") || view.has("sweep.points");
    if (explicit_grid && range)
        throw ConfigError("sweep.sigma2_grid", "give either sigma2_grid or sigma2_min/sigma2_max/points");
    if (explicit_grid) {
        config.sigma2_grid = parse_grid(view, "sweep.sigma2_grid");
    } else if (range) {
        const double lo = view.number("sweep.sigma2_min");
        const double hi = view.number("sweep.sigma2_max");
        const std::size_t points = view.count("sweep.points");
        config.sigma2_grid = with_key("sweep.sigma2_min", [&] { return log_grid(lo, hi, points); });
    }
    return config;
}

}  // namespace

SimulationConfig parse_config_text(std::string_view text)
{
    return resolve_simulation(read_entries(text));
}

SimulationConfig parse_config(const std::filesystem::path& path)
{
    return parse_config_text(read_file(path));
}

AnalyticConfig AnalyticConfig::defaults()
{
    AnalyticConfig config;
    config.sigma2_grid = log_grid(1e-4, 1.0, 41);
    return config;
}

AnalyticConfig parse_analytic_config_text(std::string_view text)
{
    return resolve_analytic(read_entries(text));
}

AnalyticConfig parse_analytic_config(const std::filesystem::path& path)
{
    return parse_analytic_config_text(read_file(path));
}

std::string render_ini(const ConfigEntries& entries)
{
    std::vector<std::string> sections;
    for (const auto& [key, value] : entries) {
        const std::string section = section_of(key);
        if (std::find(sections.begin(), sections.end(), section) == sections.end())
            sections.push_back(section);
    }
    std::string out;
    for (const auto& section : sections) {
        if (!out.empty())
            out += '\n';
        out += "[" + section + "]\n";
        for (const auto& [key, value] : entries)
            if (section_of(key) == section)
                out += name_of(key) + " = " + value + "\n";
    }
    return out;
}

void set_entry(ConfigEntries& entries, const std::string& key, const std::string& value)
{
    for (auto& [k, v] : entries) {
        if (k == key) {
            v = value;
            return;
        }
    }
    entries.emplace_back(key, value);
}

}  // namespace cpe
