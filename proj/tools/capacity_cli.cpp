// SPDX-License-Identifier: Apache-2.0
//
// fsolink: free-space optical link capacity and channel statistics
// Copyright (C) 2026 fsolink contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "fsolink/fsolink.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

// exit codes: 0 success, 2 config validation, 3 engine precondition, 4 numerical
constexpr int kExitConfig = 2;
constexpr int kExitEngine = 3;
constexpr int kExitNumeric = 4;

nlohmann::json load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw fsolink::config_error("config: cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw fsolink::config_error("config '" + path + "': " + e.what());
    }
}

int cmd_point(const std::string &config_path, const std::string &engine_name,
              const std::string &units_name, std::optional<std::uint64_t> seed) {
    using namespace fsolink;
    const auto doc = load_config(config_path);
    const auto sc = cli::point_scenario_from_json(doc);
    const auto engine = capacity::method_from_name(engine_name);
    const auto units = cli::units_from_string(units_name);
    cli::McSettings mc;
    if (doc.contains("sweep") && doc["sweep"].contains("mc"))
        mc = cli::mc_from_json(doc["sweep"]["mc"]);
    if (doc.contains("mc"))
        mc = cli::mc_from_json(doc["mc"]);
    if (seed)
        mc.seed = *seed;

    const auto res = cli::run_point(sc, engine, units, mc);
    std::printf("%.9g %s %s", res.display_value(),
                units == cli::Units::bits ? "bits" : "nats",
                capacity::method_name(res.estimate.method));
    if (res.estimate.std_error) {
        const double conv = (units == cli::Units::bits) ? 1.0 / 0.69314718055994530942 : 1.0;
        std::printf(" stderr=%.3g", *res.estimate.std_error * conv);
    }
    std::printf("\n");
    return 0;
}

int cmd_sweep(const std::string &config_path, const std::string &out_path) {
    using namespace fsolink;
    const auto doc = load_config(config_path);
    const auto spec = cli::sweep_from_json(doc);
    std::ofstream out(out_path);
    if (!out)
        throw config_error("sweep: cannot open output '" + out_path + "'");
    std::vector<std::string> warnings;
    cli::run_sweep(spec, out, &warnings);
    for (const auto &w : warnings)
        std::cerr << "warning: " << w << "\n";
    return 0;
}

int cmd_moments(const std::string &config_path, double order) {
    using namespace fsolink;
    const auto doc = load_config(config_path);
    const auto sc = cli::point_scenario_from_json(doc);
    const double value = moments::moment(sc, order);
    std::printf("%.12g\n", value);
    return 0;
}

int cmd_sample(const std::string &config_path, std::int64_t count, std::uint64_t seed,
               const std::string &out_path) {
    using namespace fsolink;
    const auto doc = load_config(config_path);
    const auto sc = cli::point_scenario_from_json(doc);
    if (count < 1)
        throw config_error("sample: count must be >= 1");
    std::ofstream out(out_path);
    if (!out)
        throw config_error("sample: cannot open output '" + out_path + "'");
    rng::Stream stream(seed);
    char buf[40];
    for (std::int64_t i = 0; i < count; ++i) {
        std::snprintf(buf, sizeof(buf), "%.9g\n", channel::snr_sample(sc, stream));
        out << buf;
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"ergodic capacity of FSO links over turbulence with pointing errors"};
    app.require_subcommand(1);

    std::string config_path, engine_name, units_name = "nats", out_path;
    std::optional<std::uint64_t> seed_override;
    double order = 1.0;
    std::int64_t count = 1000;
    std::uint64_t sample_seed = 1;

    auto *point = app.add_subcommand("point", "single capacity value for one scenario");
    point->add_option("--config", config_path, "scenario JSON")->required();
    point->add_option("--engine", engine_name,
                      "high_snr | low_snr | gauss_hermite | meijer_expansion | monte_carlo")
        ->required();
    point->add_option("--units", units_name, "nats | bits");
    std::uint64_t seed_val = 0;
    auto *seed_opt = point->add_option("--seed", seed_val, "Monte-Carlo seed override");

    auto *sweep = app.add_subcommand("sweep", "capacity sweep to CSV");
    sweep->add_option("--config", config_path, "scenario JSON with sweep section")->required();
    sweep->add_option("--out", out_path, "output CSV path")->required();

    auto *mom = app.add_subcommand("moments", "closed-form SNR moment E[gamma^n]");
    mom->add_option("--config", config_path, "scenario JSON")->required();
    mom->add_option("--n", order, "moment order (real, >= 0)")->required();

    auto *samp = app.add_subcommand("sample", "raw SNR draws, one per line");
    samp->add_option("--config", config_path, "scenario JSON")->required();
    samp->add_option("--count", count, "number of draws")->required();
    samp->add_option("--seed", sample_seed, "stream seed")->required();
    samp->add_option("--out", out_path, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (seed_opt->count() > 0)
            seed_override = seed_val;
        if (point->parsed())
            return cmd_point(config_path, engine_name, units_name, seed_override);
        if (sweep->parsed())
            return cmd_sweep(config_path, out_path);
        if (mom->parsed())
            return cmd_moments(config_path, order);
        if (samp->parsed())
            return cmd_sample(config_path, count, sample_seed, out_path);
    } catch (const fsolink::config_error &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const fsolink::engine_error &e) {
        std::cerr << "engine error: " << e.what() << "\n";
        return kExitEngine;
    } catch (const fsolink::numeric_error &e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return 0;
}
