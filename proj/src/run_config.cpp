// Copyright (c) 2026 the ccpush authors
// SPDX-License-Identifier: Apache-2.0

#include "ccpush/run_config.hpp"

#include <nlohmann/json.hpp>

#include <set>
#include <stdexcept>

#include "ccpush/io_util.hpp"

namespace ccpush {

namespace {

using Json = nlohmann::ordered_json;

const std::set<std::string> kTopLevelKeys = {
    "K",        "N",       "F",           "M",           "P",
    "B",        "H",       "B_u",         "T_u",         "scheme",
    "mode",     "sizes_source", "seed",   "trials",      "radius_m",
    "pathloss_exponent", "rice_factor",   "min_distance_m", "noise_psd",
    "fd_tol",   "distinct_requests", "sweep", "output",  "verbosity"};

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw std::invalid_argument("config field '" + field + "': " + why);
}

double number(const Json& doc, const std::string& key) {
    if (!doc.at(key).is_number()) fail(key, "must be a number");
    return doc.at(key).get<double>();
}

std::int64_t integer(const Json& doc, const std::string& key) {
    if (!doc.at(key).is_number_integer()) fail(key, "must be an integer");
    return doc.at(key).get<std::int64_t>();
}

std::string text(const Json& doc, const std::string& key) {
    if (!doc.at(key).is_string()) fail(key, "must be a string");
    return doc.at(key).get<std::string>();
}

}  // namespace

bool operator==(const RunConfig& a, const RunConfig& b) {
    // applied_defaults is provenance, not configuration
    return a.trial == b.trial && a.sweep_parameter == b.sweep_parameter &&
           a.sweep_grid == b.sweep_grid && a.output_path == b.output_path &&
           a.verbosity == b.verbosity;
}

RunConfig parse_config(const std::string& json_text) {
    Json doc;
    try {
        doc = Json::parse(json_text);
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");

    for (const auto& item : doc.items())
        if (!kTopLevelKeys.count(item.key())) fail(item.key(), "unknown key");
    for (const char* key : {"K", "N", "F", "M", "P", "B", "H"})
        if (!doc.contains(key)) fail(key, "required key is missing");

    RunConfig config;
    TrialSpec& trial = config.trial;
    auto defaulted = [&](const std::string& key, const std::string& value) {
        config.applied_defaults.push_back(key + "=" + value);
    };

    trial.system.num_users = static_cast<int>(integer(doc, "K"));
    trial.system.num_contents = static_cast<int>(integer(doc, "N"));
    trial.system.content_bits = integer(doc, "F");
    trial.system.cache_contents = number(doc, "M");
    trial.system.power_w = number(doc, "P");
    trial.system.bandwidth_hz = number(doc, "B");
    trial.system.subcarriers = static_cast<int>(integer(doc, "H"));

    if (doc.contains("B_u")) {
        trial.system.subcarrier_bw_hz = number(doc, "B_u");
    } else {
        trial.system.subcarrier_bw_hz = trial.system.bandwidth_hz / trial.system.subcarriers;
        defaulted("B_u", format_double(trial.system.subcarrier_bw_hz) + " (B/H)");
    }
    if (doc.contains("T_u")) {
        trial.system.slot_seconds = number(doc, "T_u");
    } else {
        trial.system.slot_seconds = 1e-3;
        defaulted("T_u", "0.001");
    }

    if (doc.contains("scheme")) {
        const std::string scheme = text(doc, "scheme");
        if (scheme == "coded")
            trial.scheme = Scheme::Coded;
        else if (scheme == "baseline")
            trial.scheme = Scheme::Baseline;
        else
            fail("scheme", "must be 'coded' or 'baseline'");
    } else {
        defaulted("scheme", "coded");
    }
    if (doc.contains("mode")) {
        const std::string mode = text(doc, "mode");
        if (mode == "td")
            trial.mode = Mode::TimeDivision;
        else if (mode == "fd")
            trial.mode = Mode::FrequencyDivision;
        else
            fail("mode", "must be 'td' or 'fd'");
    } else {
        defaulted("mode", "td");
    }
    if (doc.contains("sizes_source")) {
        const std::string source = text(doc, "sizes_source");
        if (source == "analytic")
            trial.sizes_source = SizesSource::Analytic;
        else if (source == "bitlevel")
            trial.sizes_source = SizesSource::BitLevel;
        else
            fail("sizes_source", "must be 'analytic' or 'bitlevel'");
    } else {
        defaulted("sizes_source", "analytic");
    }

    if (doc.contains("seed")) {
        const std::int64_t seed = integer(doc, "seed");
        if (seed < 0) fail("seed", "must be nonnegative");
        trial.seed = static_cast<std::uint64_t>(seed);
    } else {
        defaulted("seed", "1");
    }
    if (doc.contains("trials")) {
        trial.trials = static_cast<int>(integer(doc, "trials"));
    } else {
        defaulted("trials", "1");
    }

    if (doc.contains("radius_m")) {
        trial.fading.cell_radius_m = number(doc, "radius_m");
    } else {
        defaulted("radius_m", "5000");
    }
    if (doc.contains("pathloss_exponent")) {
        trial.fading.pathloss_exponent = number(doc, "pathloss_exponent");
    } else {
        defaulted("pathloss_exponent", "2");
    }
    if (doc.contains("rice_factor")) {
        trial.fading.rice_factor = number(doc, "rice_factor");
    } else {
        defaulted("rice_factor", "2");
    }
    if (doc.contains("min_distance_m")) {
        trial.fading.min_distance_m = number(doc, "min_distance_m");
    } else {
        defaulted("min_distance_m", "1");
    }
    if (doc.contains("noise_psd")) {
        trial.base_psd = number(doc, "noise_psd");
    } else {
        trial.base_psd = 2.0;
        defaulted("noise_psd", "2 (n/2 = 1)");
    }
    if (doc.contains("fd_tol")) {
        trial.fd_tol = number(doc, "fd_tol");
    } else {
        defaulted("fd_tol", "1e-06");
    }
    if (doc.contains("distinct_requests")) {
        if (!doc.at("distinct_requests").is_boolean())
            fail("distinct_requests", "must be a boolean");
        trial.distinct_requests = doc.at("distinct_requests").get<bool>();
    }

    if (doc.contains("sweep")) {
        const Json& sweep_doc = doc.at("sweep");
        if (!sweep_doc.is_object()) fail("sweep", "must be an object");
        for (const auto& item : sweep_doc.items())
            if (item.key() != "parameter" && item.key() != "grid")
                fail("sweep." + item.key(), "unknown key");
        if (!sweep_doc.contains("parameter") || !sweep_doc.contains("grid"))
            fail("sweep", "needs 'parameter' and 'grid'");
        config.sweep_parameter =
            sweep_parameter_from_string(text(sweep_doc, "parameter"));
        if (!sweep_doc.at("grid").is_array() || sweep_doc.at("grid").empty())
            fail("sweep.grid", "must be a nonempty array of numbers");
        for (const Json& entry : sweep_doc.at("grid")) {
            if (!entry.is_number()) fail("sweep.grid", "must contain only numbers");
            config.sweep_grid.push_back(entry.get<double>());
        }
    }
    if (doc.contains("output")) config.output_path = text(doc, "output");
    if (doc.contains("verbosity"))
        config.verbosity = static_cast<int>(integer(doc, "verbosity"));

    trial.validate();
    return config;
}

std::string serialize_config(const RunConfig& config) {
    const TrialSpec& trial = config.trial;
    Json doc;
    doc["K"] = trial.system.num_users;
    doc["N"] = trial.system.num_contents;
    doc["F"] = trial.system.content_bits;
    doc["M"] = trial.system.cache_contents;
    doc["P"] = trial.system.power_w;
    doc["B"] = trial.system.bandwidth_hz;
    doc["H"] = trial.system.subcarriers;
    doc["B_u"] = trial.system.subcarrier_bw_hz;
    doc["T_u"] = trial.system.slot_seconds;
    doc["scheme"] = to_string(trial.scheme);
    doc["mode"] = to_string(trial.mode);
    doc["sizes_source"] = to_string(trial.sizes_source);
    doc["seed"] = trial.seed;
    doc["trials"] = trial.trials;
    doc["radius_m"] = trial.fading.cell_radius_m;
    doc["pathloss_exponent"] = trial.fading.pathloss_exponent;
    doc["rice_factor"] = trial.fading.rice_factor;
    doc["min_distance_m"] = trial.fading.min_distance_m;
    doc["noise_psd"] = trial.base_psd;
    doc["fd_tol"] = trial.fd_tol;
    doc["distinct_requests"] = trial.distinct_requests;
    if (config.sweep_parameter) {
        doc["sweep"]["parameter"] = to_string(*config.sweep_parameter);
        doc["sweep"]["grid"] = config.sweep_grid;
    }
    doc["output"] = config.output_path;
    doc["verbosity"] = config.verbosity;
    return doc.dump(2);
}

}  // namespace ccpush
