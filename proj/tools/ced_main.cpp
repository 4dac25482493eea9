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

// Command-line front end: threshold calibration, detection/localization
// sweeps, synthetic cube generation, profile scanning and rank estimation.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "ced/cube.hpp"
#include "ced/experiments.hpp"
#include "ced/rank.hpp"
#include "ced/scan.hpp"
#include "config.hpp"

namespace {

using namespace ced;
using cli::RunConfig;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct CommonArgs {
    std::string config_path;
    std::string output_path;
    std::string threshold_path;
    std::string input_path;
    std::string format = "csv";
    std::optional<std::uint64_t> seed;
    int threads = 1;
};

RunConfig load(const CommonArgs& args) {
    RunConfig cfg = cli::load_config(args.config_path);
    if (args.seed) cfg.master_seed = *args.seed;
    return cfg;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot open output file: " + path);
    return out;
}

double checked_threshold(const CommonArgs& args, const RunConfig& cfg) {
    const cli::ThresholdFile t = cli::load_threshold(args.threshold_path);
    const std::string expected = cli::detector_fingerprint(cfg);
    if (t.fingerprint != expected) {
        throw ConfigError("threshold fingerprint mismatch:\n  file:   " +
                          t.fingerprint + "\n  config: " + expected);
    }
    return t.eta;
}

CalibrationSpec calibration_spec(const RunConfig& cfg, int threads) {
    CalibrationSpec spec;
    spec.pfed = cfg.pfed;
    spec.trials = cfg.trials;
    spec.scene = cfg.scene;
    spec.scene.cpr_db = 0.0;  // calibration runs under H0
    spec.detector = cfg.detector;
    spec.grid = cfg.grid;
    spec.master_seed = cfg.master_seed;
    spec.threads = threads;
    return spec;
}

int cmd_calibrate(const CommonArgs& args) {
    const RunConfig cfg = load(args);
    const CalibrationSpec spec = calibration_spec(cfg, args.threads);
    const double eta = calibrate_threshold(spec);

    cli::ThresholdFile t;
    t.eta = eta;
    t.pfed = spec.pfed;
    t.trials = spec.effective_trials();
    t.seed = spec.master_seed;
    t.fingerprint = cli::detector_fingerprint(cfg);
    cli::save_threshold(args.output_path, t);
    std::printf("eta %.12g (pfed %.3g, %ld trials)\n", eta, spec.pfed,
                spec.effective_trials());
    return kExitOk;
}

void write_sweep(const SweepResult& sweep, const std::string& format,
                 const std::string& path) {
    std::ofstream out = open_output(path);
    if (format == "csv") {
        out << "cpr_db,ped,rmse,detections,trials\n";
        for (std::size_t i = 0; i < sweep.cpr_db.size(); ++i) {
            char line[160];
            if (std::isnan(sweep.rmse[i])) {
                std::snprintf(line, sizeof(line), "%.10g,%.10g,,%ld,%ld\n",
                              sweep.cpr_db[i], sweep.ped[i],
                              sweep.detections[i], sweep.trials_per_point);
            } else {
                std::snprintf(line, sizeof(line), "%.10g,%.10g,%.10g,%ld,%ld\n",
                              sweep.cpr_db[i], sweep.ped[i], sweep.rmse[i],
                              sweep.detections[i], sweep.trials_per_point);
            }
            out << line;
        }
        return;
    }
    json points = json::array();
    for (std::size_t i = 0; i < sweep.cpr_db.size(); ++i) {
        json p;
        p["cpr_db"] = sweep.cpr_db[i];
        p["ped"] = sweep.ped[i];
        if (std::isnan(sweep.rmse[i])) {
            p["rmse"] = nullptr;
        } else {
            p["rmse"] = sweep.rmse[i];
        }
        p["detections"] = sweep.detections[i];
        p["trials"] = sweep.trials_per_point;
        points.push_back(p);
    }
    json j;
    j["eta"] = sweep.eta;
    j["points"] = points;
    out << j.dump(2) << "\n";
}

int cmd_sweep(const CommonArgs& args, bool uniform_l1) {
    const RunConfig cfg = load(args);
    if (cfg.sweep_cpr_db.empty()) {
        throw ConfigError("config has no sweep.cpr_db grid");
    }
    const double eta = checked_threshold(args, cfg);
    const SweepResult sweep =
        uniform_l1
            ? rmse_sweep(cfg.scene, cfg.sweep_cpr_db, cfg.detector, cfg.grid,
                         eta, cfg.sweep_trials, cfg.master_seed, args.threads)
            : ped_sweep(cfg.scene, cfg.sweep_cpr_db, cfg.scene.true_l1,
                        cfg.detector, cfg.grid, eta, cfg.sweep_trials,
                        cfg.master_seed, args.threads);
    write_sweep(sweep, args.format, args.output_path);
    return kExitOk;
}

int cmd_generate(const CommonArgs& args) {
    const RunConfig cfg = load(args);
    if (!cfg.cube) throw ConfigError("config has no cube section");
    const cli::CubeSpec& spec = *cfg.cube;
    if (spec.bins < 2 * cfg.scene.window_length + 1) {
        throw ConfigError("cube too short: need bins > 2 L");
    }
    if (spec.edge_bin < 0 || spec.edge_bin >= spec.bins) {
        throw ConfigError("edge bin outside the profile");
    }
    if (spec.precision != 32 && spec.precision != 64) {
        throw ConfigError("cube precision must be 32 or 64");
    }

    DataCube cube;
    cube.precision = static_cast<std::uint8_t>(spec.precision);
    const Eigen::MatrixXcd f_h0 = covariance_factor(cfg.scene.covariance(0));
    const Eigen::MatrixXcd f1 = covariance_factor(cfg.scene.covariance(1));
    const Eigen::MatrixXcd f2 = covariance_factor(cfg.scene.covariance(2));
    for (int b = 0; b < spec.blocks; ++b) {
        const DataWindow w =
            spec.edge_bin == 0
                ? sample_edge_window_prefactored(f_h0, f_h0, spec.bins,
                                                 spec.bins, cfg.master_seed, b)
                : sample_edge_window_prefactored(f1, f2, spec.edge_bin,
                                                 spec.bins, cfg.master_seed, b);
        cube.blocks.push_back(w.data());
    }
    quantize_to_precision(cube);
    write_cube(args.output_path, cube);
    std::printf("wrote %d block(s) of %d bins x %d channels to %s\n",
                spec.blocks, spec.bins, cfg.scene.channels,
                args.output_path.c_str());
    return kExitOk;
}

json report_to_json(const EdgeReport& r) {
    json j;
    j["block"] = r.block;
    j["direction"] = to_string(r.direction);
    j["window_start"] = r.window_start;
    j["decision"] = r.decision;
    j["l1hat"] = r.l1hat;
    j["absolute_edge"] = r.absolute_edge;
    j["statistic"] = r.statistic;
    return j;
}

int cmd_scan(const CommonArgs& args) {
    const RunConfig cfg = load(args);
    const DataCube cube = read_cube(args.input_path);
    if (cube.channels() != cfg.scene.channels) {
        throw DataError("cube channel count does not match the config");
    }
    const int L = cfg.scene.window_length;

    if (!args.threshold_path.empty() && cfg.scan_calibration) {
        throw ConfigError(
            "give either a threshold file or scan.calibration, not both");
    }

    double eta = 0.0;
    int first_block = 0;
    if (cfg.scan_calibration) {
        // Thresholds from the leading blocks: every window position whose
        // start lies in [start_bins] contributes one statistic per block.
        const cli::ScanCalibration& cal = *cfg.scan_calibration;
        if (cal.blocks < 1 ||
            cal.blocks >= static_cast<int>(cube.blocks.size())) {
            throw ConfigError("calibration split needs 1 <= blocks < total");
        }
        if (cal.start_bin_min < 1 ||
            cal.start_bin_max + L - 1 > cube.bins() ||
            cal.start_bin_min > cal.start_bin_max) {
            throw ConfigError("calibration start bins out of range");
        }
        std::vector<double> stats;
        for (int b = 0; b < cal.blocks; ++b) {
            for (int s = cal.start_bin_min; s <= cal.start_bin_max; ++s) {
                const DataWindow w(cube.blocks[b].middleCols(s - 1, L));
                stats.push_back(
                    run_detector(cfg.detector, w, cfg.grid, 0.0).statistic);
            }
        }
        eta = threshold_from_statistics(std::move(stats), cal.pfed);
        first_block = cal.blocks;
    } else if (!args.threshold_path.empty()) {
        eta = checked_threshold(args, cfg);
    } else {
        throw ConfigError("scan needs --threshold or scan.calibration");
    }

    RangeProfile profile;
    profile.cut_index = cfg.cube ? cfg.cube->cut_index : 1;
    for (std::size_t b = first_block; b < cube.blocks.size(); ++b) {
        profile.blocks.push_back(cube.blocks[b]);
    }
    const auto results = scan_profile(profile, L, cfg.detector, cfg.grid, eta);

    std::ofstream out = open_output(args.output_path);
    json fused = json::array();
    for (const BlockScanResult& block : results) {
        for (const EdgeReport& r : block.reports) {
            // Report original block indices even after a calibration split.
            EdgeReport shifted = r;
            shifted.block += first_block;
            out << report_to_json(shifted).dump() << "\n";
        }
        json f;
        f["block"] = block.block + first_block;
        f["forward"] =
            block.fused_forward ? json(*block.fused_forward) : json(nullptr);
        f["backward"] =
            block.fused_backward ? json(*block.fused_backward) : json(nullptr);
        fused.push_back(f);
    }
    json summary;
    summary["eta"] = eta;
    summary["fused"] = fused;
    out << summary.dump() << "\n";
    return kExitOk;
}

int cmd_rank_est(const CommonArgs& args) {
    const RunConfig cfg = load(args);
    DataWindow w = [&] {
        if (!args.input_path.empty()) {
            const DataCube cube = read_cube(args.input_path);
            if (cube.channels() != cfg.scene.channels) {
                throw DataError("cube channel count does not match the config");
            }
            const int L = cfg.scene.window_length;
            if (cube.bins() < L) throw DataError("cube narrower than the window");
            return DataWindow(cube.blocks.at(0).middleCols(0, L));
        }
        return sample_window(cfg.scene, Hypothesis::H1, cfg.master_seed, 0);
    }();

    MosRule rule = cfg.detector.ranks ? MosRule{} : cfg.detector.mos_rule;
    const RankEstimate est = estimate_ranks_h1(
        w, cfg.detector.structure, cfg.grid, rule, cfg.detector.search_max);

    json j;
    j["r0hat"] = est.r0hat;
    j["r1hat"] = est.r1hat;
    j["r2hat"] = est.r2hat;
    if (est.l1hat) {
        j["l1hat"] = *est.l1hat;
    } else {
        j["l1hat"] = nullptr;
    }
    j["statistic"] = est.statistic;
    j["rule"] = to_string(rule.kind);
    std::ofstream out = open_output(args.output_path);
    out << j.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Clutter-edge detection: GLRT detectors for structured clutter "
        "covariances, Monte Carlo calibration, sweeps and profile scans"};
    app.require_subcommand(1);

    CommonArgs args;

    const auto add_common = [&](CLI::App* cmd, bool needs_output) {
        cmd->add_option("--config", args.config_path, "run configuration (JSON)")
            ->required();
        auto* out = cmd->add_option("--output", args.output_path, "output file");
        if (needs_output) out->required();
        cmd->add_option("--seed", args.seed, "override master seed");
        cmd->add_option("--threads", args.threads, "worker threads");
    };

    auto* calibrate =
        app.add_subcommand("calibrate", "calibrate a detection threshold");
    add_common(calibrate, true);

    auto* sweep = app.add_subcommand("sweep", "P_ED versus CPR at fixed L1");
    add_common(sweep, true);
    sweep->add_option("--threshold", args.threshold_path, "threshold file")
        ->required();
    sweep->add_option("--format", args.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* rmse =
        app.add_subcommand("rmse", "RMS localization error versus CPR, "
                                   "uniform L1");
    add_common(rmse, true);
    rmse->add_option("--threshold", args.threshold_path, "threshold file")
        ->required();
    rmse->add_option("--format", args.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* generate =
        app.add_subcommand("generate", "write a synthetic data cube");
    add_common(generate, true);

    auto* scan = app.add_subcommand("scan", "scan a data cube for clutter edges");
    add_common(scan, true);
    scan->add_option("--input", args.input_path, "data cube")->required();
    scan->add_option("--threshold", args.threshold_path, "threshold file");

    auto* rank_est =
        app.add_subcommand("rank-est", "estimate covariance ranks");
    add_common(rank_est, true);
    rank_est->add_option("--input", args.input_path, "data cube (optional)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (calibrate->parsed()) return cmd_calibrate(args);
        if (sweep->parsed()) return cmd_sweep(args, false);
        if (rmse->parsed()) return cmd_sweep(args, true);
        if (generate->parsed()) return cmd_generate(args);
        if (scan->parsed()) return cmd_scan(args);
        if (rank_est->parsed()) return cmd_rank_est(args);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return kExitNumeric;
    }
    return kExitConfig;
}
