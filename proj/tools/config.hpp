// Copyright 2026 The ced authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ced/experiments.hpp"
#include "ced/types.hpp"

namespace ced::cli {

using nlohmann::json;

struct CubeSpec {
    int bins = 0;
    int blocks = 1;
    int edge_bin = 0;  // 0: homogeneous profile
    int cut_index = 1;
    int precision = 64;
};

struct ScanCalibration {
    int blocks = 0;          // leading blocks reserved for calibration
    int start_bin_min = 1;   // window start positions used for calibration
    int start_bin_max = 1;
    double pfed = 1e-3;
};

struct RunConfig {
    DetectorConfig detector;
    ClutterScene scene;
    L1Grid grid{1, 1};
    double pfed = 1e-3;
    long trials = 0;  // 0: 100 / pfed
    std::uint64_t master_seed = 0;
    std::vector<double> sweep_cpr_db;
    long sweep_trials = 10000;
    std::optional<CubeSpec> cube;
    std::optional<ScanCalibration> scan_calibration;
};

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return j;
}

inline RunConfig load_config(const std::string& path) {
    const json j = load_json(path);
    RunConfig cfg;
    try {
        const json& det = j.at("detector");
        cfg.detector.family = family_from_string(det.at("family"));
        cfg.detector.structure = structure_from_string(det.at("structure"));

        const json& scene = j.at("scene");
        cfg.scene.channels = scene.at("channels");
        cfg.scene.sigma_n2 = scene.value("noise_power", 1.0);
        cfg.scene.cnr_db = scene.at("cnr_db");
        cfg.scene.cpr_db = scene.value("cpr_db", 0.0);
        cfg.scene.theta0_deg = scene.at("theta0_deg").get<std::vector<double>>();
        cfg.scene.theta1_deg = scene.value("theta1_deg", cfg.scene.theta0_deg);
        cfg.scene.theta2_deg = scene.value("theta2_deg", cfg.scene.theta0_deg);

        const json& window = j.at("window");
        cfg.scene.window_length = window.at("length");
        cfg.scene.true_l1 = scene.value("true_l1", 0);

        if (window.contains("grid")) {
            cfg.grid = L1Grid(window.at("grid").at("min"),
                              window.at("grid").at("max"));
        } else {
            cfg.grid = L1Grid::omega(cfg.scene.channels, cfg.scene.window_length);
        }
        if (cfg.scene.true_l1 == 0) cfg.scene.true_l1 = cfg.grid.min();

        const json& ranks = j.at("ranks");
        if (ranks.contains("estimate")) {
            const json& est = ranks.at("estimate");
            cfg.detector.ranks.reset();
            cfg.detector.mos_rule.kind =
                mos_kind_from_string(est.value("rule", "bic"));
            cfg.detector.mos_rule.gic_a = est.value("gic_a", 4.0);
            cfg.detector.search_max = est.value("search_max", -1);
        } else {
            cfg.detector.ranks =
                RankTriple{ranks.at("r0"), ranks.at("r1"), ranks.at("r2")};
        }

        cfg.pfed = j.value("pfed", 1e-3);
        cfg.trials = j.value("trials", 0L);
        cfg.master_seed = j.value("master_seed", std::uint64_t{0});

        if (j.contains("sweep")) {
            const json& sweep = j.at("sweep");
            cfg.sweep_cpr_db = sweep.at("cpr_db").get<std::vector<double>>();
            cfg.sweep_trials = sweep.value("trials_per_point", 10000L);
        }
        if (j.contains("cube")) {
            const json& cube = j.at("cube");
            CubeSpec spec;
            spec.bins = cube.at("bins");
            spec.blocks = cube.value("blocks", 1);
            spec.edge_bin = cube.value("edge_bin", 0);
            spec.cut_index = cube.value("cut_index", 1);
            spec.precision = cube.value("precision", 64);
            cfg.cube = spec;
        }
        if (j.contains("scan") && j.at("scan").contains("calibration")) {
            const json& cal = j.at("scan").at("calibration");
            ScanCalibration sc;
            sc.blocks = cal.at("blocks");
            sc.start_bin_min = cal.at("start_bins").at(0);
            sc.start_bin_max = cal.at("start_bins").at(1);
            sc.pfed = cal.value("pfed", cfg.pfed);
            cfg.scan_calibration = sc;
        }
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }

    cfg.scene.validate();
    cfg.detector.validate(cfg.scene.channels, cfg.scene.window_length);
    if (cfg.grid.min() < 1 || cfg.grid.max() >= cfg.scene.window_length) {
        throw ConfigError("grid must lie strictly inside the window");
    }
    return cfg;
}

inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

/// Canonical description of everything a threshold depends on.  A sweep or
/// scan refuses thresholds whose fingerprint disagrees with its own config.
inline std::string detector_fingerprint(const RunConfig& cfg) {
    std::string fp;
    fp += "family=" + std::string(to_string(cfg.detector.family));
    fp += ";structure=" + std::string(to_string(cfg.detector.structure));
    if (cfg.detector.ranks) {
        fp += ";ranks=" + std::to_string(cfg.detector.ranks->r0) + "," +
              std::to_string(cfg.detector.ranks->r1) + "," +
              std::to_string(cfg.detector.ranks->r2);
    } else {
        fp += ";ranks=estimate:" + std::string(to_string(cfg.detector.mos_rule.kind));
        if (cfg.detector.mos_rule.kind == MosKind::Gic) {
            fp += ":" + format_double(cfg.detector.mos_rule.gic_a);
        }
        fp += ":max" + std::to_string(cfg.detector.search_max);
    }
    fp += ";n=" + std::to_string(cfg.scene.channels);
    fp += ";l=" + std::to_string(cfg.scene.window_length);
    fp += ";grid=" + std::to_string(cfg.grid.min()) + ":" +
          std::to_string(cfg.grid.max());
    fp += ";noise=" + format_double(cfg.scene.sigma_n2);
    fp += ";cnr_db=" + format_double(cfg.scene.cnr_db);
    fp += ";theta0=";
    for (std::size_t i = 0; i < cfg.scene.theta0_deg.size(); ++i) {
        if (i) fp += ",";
        fp += format_double(cfg.scene.theta0_deg[i]);
    }
    return fp;
}

struct ThresholdFile {
    double eta = 0.0;
    double pfed = 0.0;
    long trials = 0;
    std::uint64_t seed = 0;
    std::string fingerprint;
};

inline void save_threshold(const std::string& path, const ThresholdFile& t) {
    json j;
    j["eta"] = t.eta;
    j["pfed"] = t.pfed;
    j["trials"] = t.trials;
    j["seed"] = t.seed;
    j["fingerprint"] = t.fingerprint;
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot open threshold file for writing: " + path);
    out << j.dump(2) << "\n";
}

inline ThresholdFile load_threshold(const std::string& path) {
    const json j = load_json(path);
    ThresholdFile t;
    try {
        t.eta = j.at("eta");
        t.pfed = j.at("pfed");
        t.trials = j.at("trials");
        t.seed = j.at("seed");
        t.fingerprint = j.at("fingerprint");
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return t;
}

}  // namespace ced::cli
