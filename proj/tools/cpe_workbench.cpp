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
#include "cpe/config.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <thread>

namespace {

struct Flags {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, Flags& flags, bool config_required, const std::string& out_help)
{
    auto* config = cmd->add_option("--config", flags.config, "INI config file (or a manifest to replay)");
    if (config_required)
        config->required();
    cmd->add_option("--out", flags.out, out_help)->required();
    cmd->add_option("--seed", flags.seed, "Override sim.seed");
    cmd->add_option("--threads", flags.threads, "Worker threads (default: hardware concurrency)");
}

cpe::CommandOptions to_options(const CLI::App* cmd, const Flags& flags)
{
    cpe::CommandOptions o;
    if (!flags.config.empty())
        o.config = flags.config;
    o.out = flags.out;
    if (cmd->count("--seed") > 0)
        o.seed = flags.seed;
    o.threads = flags.threads != 0 ? flags.threads : std::max(1u, std::thread::hardware_concurrency());
    return o;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Carrier-phase-estimation workbench"};
    app.set_version_flag("--version", std::string(CPE_VERSION));
    app.require_subcommand(1);

    Flags flags;
    auto* analytic = app.add_subcommand("analytic", "Analytic BER floors to CSV");
    add_common(analytic, flags, false, "Output CSV path");
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo BER to CSV plus manifest");
    add_common(simulate, flags, true, "Output CSV path");
    auto* figures = app.add_subcommand("figures", "Floor-curve CSVs for n = 4..64");
    add_common(figures, flags, false, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        cpe::CommandReport report;
        if (analytic->parsed())
            report = cpe::cmd_analytic(to_options(analytic, flags));
        else if (simulate->parsed())
            report = cpe::cmd_simulate(to_options(simulate, flags));
        else
            report = cpe::cmd_figures(to_options(figures, flags));
        for (const auto& note : report.notes)
            std::cerr << "note: " << note << '\n';
        for (const auto& file : report.files)
            std::cout << file.string() << '\n';
    } catch (const cpe::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
