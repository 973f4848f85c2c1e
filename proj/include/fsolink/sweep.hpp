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

#pragma once

#include "fsolink/capacity.hpp"
#include "fsolink/channel.hpp"
#include "fsolink/errors.hpp"
#include "fsolink/moments.hpp"
#include "fsolink/montecarlo.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

// Scenario configs in, CSV sweeps out. Scenario files are JSON documents with
// the top-level schema {turbulence, pointing, detection, snr?, sweep?}.

namespace fsolink::cli {

using nlohmann::json;

enum class SnrAxis { mu_r_db, average_snr_db };
enum class Units { nats, bits };

struct McSettings {
    std::int64_t n_samples = 1'000'000;
    std::uint64_t seed = 1;
    std::int64_t batch = 10'000;
};

struct SweepSpec {
    channel::LinkScenario scenario; // mu_r is overwritten per grid point
    SnrAxis axis = SnrAxis::mu_r_db;
    double start_db = 0.0;
    double stop_db = 0.0;
    double step_db = 0.0;
    std::vector<capacity::Method> engines;
    Units units = Units::nats;
    McSettings mc;

    void validate() const {
        scenario.validate();
        if (!(start_db < stop_db))
            throw config_error("sweep.start_db: must be < stop_db");
        if (!(step_db > 0.0))
            throw config_error("sweep.step_db: must be > 0");
        if (engines.empty())
            throw config_error("sweep.engines: must list at least one engine");
        const bool is_ln = std::holds_alternative<channel::Lognormal>(scenario.turbulence);
        const bool is_mgg = std::holds_alternative<channel::Malaga>(scenario.turbulence) ||
                            std::holds_alternative<channel::GammaGamma>(scenario.turbulence);
        for (auto e : engines) {
            if (e == capacity::Method::gauss_hermite &&
                (!is_ln || !scenario.pointing.zero_boresight()))
                throw config_error("sweep.engines: gauss_hermite requires LN turbulence "
                                   "with s = 0");
            if (e == capacity::Method::meijer_expansion &&
                (!is_mgg || !scenario.pointing.zero_boresight()))
                throw config_error("sweep.engines: meijer_expansion requires Malaga/GG "
                                   "turbulence with s = 0");
        }
        if (mc.n_samples < 1 || mc.batch < 1 || mc.n_samples % mc.batch != 0)
            throw config_error("sweep.mc: batch must divide n_samples");
    }
};

// ------------------------------------------------------------ JSON parsing

namespace detail {

inline double require_number(const json &j, const std::string &where, const std::string &key) {
    if (!j.contains(key) || !j[key].is_number())
        throw config_error(where + "." + key + ": required number missing");
    return j[key].get<double>();
}

} // namespace detail

inline channel::TurbulenceModel turbulence_from_json(const json &j) {
    if (!j.contains("model") || !j["model"].is_string())
        throw config_error("turbulence.model: required string missing");
    const std::string model = j["model"].get<std::string>();
    if (model == "LN") {
        const double sigma = detail::require_number(j, "turbulence", "sigma");
        channel::Lognormal t = channel::Lognormal::unit_mean(sigma);
        if (j.contains("lambda"))
            t.lambda = j["lambda"].get<double>();
        return t;
    }
    if (model == "RLN") {
        const double k = detail::require_number(j, "turbulence", "k");
        const double sigma = detail::require_number(j, "turbulence", "sigma");
        channel::RicianLognormal t = channel::RicianLognormal::unit_mean(k, sigma);
        if (j.contains("omega"))
            t.omega = j["omega"].get<double>();
        if (j.contains("lambda"))
            t.lambda = j["lambda"].get<double>();
        return t;
    }
    if (model == "Malaga") {
        channel::Malaga t;
        t.alpha = detail::require_number(j, "turbulence", "alpha");
        t.beta = static_cast<int>(detail::require_number(j, "turbulence", "beta"));
        t.b0 = detail::require_number(j, "turbulence", "b0");
        t.rho = detail::require_number(j, "turbulence", "rho");
        t.omega_los = detail::require_number(j, "turbulence", "omega");
        t.delta_phi = j.value("delta_phi", 1.5707963267948966);
        return t;
    }
    if (model == "GG") {
        channel::GammaGamma t;
        t.alpha = detail::require_number(j, "turbulence", "alpha");
        t.beta = detail::require_number(j, "turbulence", "beta");
        return t;
    }
    throw config_error("turbulence.model: unknown model '" + model +
                       "' (expected LN, RLN, Malaga or GG)");
}

inline channel::PointingErrorParams pointing_from_json(const json &j) {
    channel::PointingErrorParams p;
    p.xi = detail::require_number(j, "pointing", "xi");
    p.sigma_s = detail::require_number(j, "pointing", "sigma_s");
    p.s = j.value("s", 0.0);
    p.a0 = j.value("a0", 1.0);
    return p;
}

/// Parses {turbulence, pointing, detection}; mu_r stays at 1 until an SNR
/// point or sweep axis value is applied.
inline channel::LinkScenario scenario_from_json(const json &doc) {
    for (const char *key : {"turbulence", "pointing", "detection"})
        if (!doc.contains(key))
            throw config_error(std::string(key) + ": required section missing");
    channel::LinkScenario sc;
    sc.turbulence = turbulence_from_json(doc["turbulence"]);
    sc.pointing = pointing_from_json(doc["pointing"]);
    sc.detection = channel::Detection::from_r(
        static_cast<int>(detail::require_number(doc["detection"], "detection", "r")));
    sc.mu_r = 1.0;
    sc.validate();
    return sc;
}

inline SnrAxis axis_from_string(const std::string &s, const std::string &where) {
    if (s == "mu_r_db")
        return SnrAxis::mu_r_db;
    if (s == "average_snr_db")
        return SnrAxis::average_snr_db;
    throw config_error(where + ".axis: expected 'mu_r_db' or 'average_snr_db'");
}

inline Units units_from_string(const std::string &s) {
    if (s == "nats")
        return Units::nats;
    if (s == "bits")
        return Units::bits;
    throw config_error("units: expected 'nats' or 'bits'");
}

inline McSettings mc_from_json(const json &j) {
    McSettings mc;
    if (j.contains("n_samples"))
        mc.n_samples = j["n_samples"].get<std::int64_t>();
    if (j.contains("seed"))
        mc.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("batch"))
        mc.batch = j["batch"].get<std::int64_t>();
    return mc;
}

inline SweepSpec sweep_from_json(const json &doc) {
    if (!doc.contains("sweep"))
        throw config_error("sweep: required section missing");
    const json &j = doc["sweep"];
    SweepSpec spec;
    spec.scenario = scenario_from_json(doc);
    spec.axis = axis_from_string(j.value("axis", "mu_r_db"), "sweep");
    spec.start_db = detail::require_number(j, "sweep", "start_db");
    spec.stop_db = detail::require_number(j, "sweep", "stop_db");
    spec.step_db = detail::require_number(j, "sweep", "step_db");
    if (!j.contains("engines") || !j["engines"].is_array())
        throw config_error("sweep.engines: required array missing");
    for (const auto &e : j["engines"])
        spec.engines.push_back(capacity::method_from_name(e.get<std::string>()));
    spec.units = units_from_string(j.value("units", "nats"));
    if (j.contains("mc"))
        spec.mc = mc_from_json(j["mc"]);
    spec.validate();
    return spec;
}

/// Resolves the config's "snr" section to an electrical-SNR scenario.
inline channel::LinkScenario apply_snr_axis(const channel::LinkScenario &base, SnrAxis axis,
                                            double value_db) {
    channel::LinkScenario sc = base;
    const double lin = channel::db_to_linear(value_db);
    sc.mu_r = 1.0; // placeholder; the conversion below only reads fading params
    sc.mu_r = (axis == SnrAxis::average_snr_db) ? moments::average_to_electrical_snr(sc, lin)
                                                : lin;
    return sc;
}

inline channel::LinkScenario point_scenario_from_json(const json &doc) {
    channel::LinkScenario sc = scenario_from_json(doc);
    if (!doc.contains("snr"))
        throw config_error("snr: required section missing for point evaluation");
    const json &j = doc["snr"];
    const double value_db = detail::require_number(j, "snr", "value_db");
    return apply_snr_axis(sc, axis_from_string(j.value("axis", "mu_r_db"), "snr"), value_db);
}

// --------------------------------------------------------------- execution

inline capacity::CapacityEstimate evaluate_engine(const channel::LinkScenario &sc,
                                                  capacity::Method engine,
                                                  const McSettings &mc) {
    switch (engine) {
    case capacity::Method::high_snr: return capacity::high_snr_asymptote(sc);
    case capacity::Method::low_snr: return capacity::low_snr_asymptote(sc);
    case capacity::Method::gauss_hermite: return capacity::ln_capacity_gauss_hermite(sc);
    case capacity::Method::meijer_expansion:
        return capacity::malaga_meijer_expansion_asymptote(sc);
    case capacity::Method::monte_carlo:
        return mc::estimate_capacity({sc, mc.n_samples, mc.seed, mc.batch});
    }
    throw config_error("unknown engine");
}

namespace detail {

inline std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

} // namespace detail

/// Writes the sweep as CSV: header snr_db,engine,capacity,stderr,units; one
/// row per (grid point x engine); rows ordered by snr ascending then engine
/// name ascending; 9-significant-digit floats, byte-deterministic for a fixed
/// spec and seed. Engine failures on individual rows are recorded as nan and
/// reported through `warnings`; the run continues.
inline void run_sweep(const SweepSpec &spec, std::ostream &out,
                      std::vector<std::string> *warnings = nullptr) {
    spec.validate();
    std::vector<capacity::Method> engines = spec.engines;
    std::sort(engines.begin(), engines.end(), [](auto a, auto b) {
        return std::string(capacity::method_name(a)) < capacity::method_name(b);
    });
    engines.erase(std::unique(engines.begin(), engines.end()), engines.end());

    out << "snr_db,engine,capacity,stderr,units\n";
    const char *unit_name = (spec.units == Units::bits) ? "bits" : "nats";
    const double conv = (spec.units == Units::bits) ? 1.0 / 0.69314718055994530942 : 1.0;

    for (double db = spec.start_db; db <= spec.stop_db + 1e-9; db += spec.step_db) {
        const channel::LinkScenario sc = apply_snr_axis(spec.scenario, spec.axis, db);
        for (auto engine : engines) {
            out << detail::fmt9(db) << ',' << capacity::method_name(engine) << ',';
            try {
                const auto est = evaluate_engine(sc, engine, spec.mc);
                out << detail::fmt9(est.value * conv) << ',';
                if (est.std_error)
                    out << detail::fmt9(*est.std_error * conv);
            } catch (const std::exception &ex) {
                out << "nan,";
                if (warnings)
                    warnings->push_back(std::string(capacity::method_name(engine)) + " at " +
                                        detail::fmt9(db) + " dB: " + ex.what());
            }
            out << ',' << unit_name << '\n';
        }
    }
}

struct PointResult {
    capacity::CapacityEstimate estimate;
    Units units = Units::nats;

    double display_value() const {
        return units == Units::bits ? estimate.bits() : estimate.value;
    }
};

inline PointResult run_point(const channel::LinkScenario &sc, capacity::Method engine,
                             Units units, const McSettings &mc) {
    return {evaluate_engine(sc, engine, mc), units};
}

} // namespace fsolink::cli
