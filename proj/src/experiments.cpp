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

#include "ced/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "ced/rng.hpp"

namespace ced {

namespace {

// Sweep point p, trial t -> substream index.  Trials stay below 2^32.
std::uint64_t sweep_stream(int point, long trial) {
    return (static_cast<std::uint64_t>(point) << 32) |
           static_cast<std::uint64_t>(trial);
}

// Runs body(t) for t in [0, trials) across the requested threads.  Each
// trial's work depends only on its index, so scheduling cannot change
// results.
void for_each_trial(long trials, int threads,
                    const std::function<void(long)>& body) {
    if (threads <= 1) {
        for (long t = 0; t < trials; ++t) body(t);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const long chunk = (trials + threads - 1) / threads;
    for (int k = 0; k < threads; ++k) {
        const long begin = k * chunk;
        const long end = std::min(trials, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] {
            for (long t = begin; t < end; ++t) body(t);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

const char* to_string(DetectorFamily f) {
    return f == DetectorFamily::Ced ? "ced" : "ccd";
}

DetectorFamily family_from_string(const std::string& name) {
    if (name == "ced") return DetectorFamily::Ced;
    if (name == "ccd") return DetectorFamily::Ccd;
    throw ConfigError("unknown detector family: " + name);
}

void DetectorConfig::validate(int channels, int window_length) const {
    if (family == DetectorFamily::Ced) {
        if (ranks) {
            if (!ranks->valid_for_channels(channels)) {
                throw ConfigError("ranks must lie in [0, N)");
            }
            if (window_length < ranks->r1 + ranks->r2) {
                throw ConfigError("window too short: need L >= r1 + r2");
            }
        } else {
            mos_rule.validate();
            if (search_max > channels - 1) {
                throw ConfigError("search_max must be <= N-1");
            }
        }
    }
}

DetectionResult run_detector(const DetectorConfig& det, const DataWindow& w,
                             const L1Grid& grid, double eta) {
    if (det.family == DetectorFamily::Ccd) {
        return ccd_statistic(w, det.structure, grid, eta);
    }
    if (det.ranks) {
        return ced_statistic(w, *det.ranks, det.structure, grid, eta);
    }
    return mos_ced_statistic(w, det.structure, grid, det.mos_rule, eta,
                             det.search_max);
}

long CalibrationSpec::effective_trials() const {
    if (trials > 0) return trials;
    return std::lround(100.0 / pfed);
}

void CalibrationSpec::validate() const {
    if (!(pfed > 0.0 && pfed < 0.5)) {
        throw ConfigError("pfed must lie in (0, 0.5)");
    }
    scene.validate();
    detector.validate(scene.channels, scene.window_length);
    if (std::lround(effective_trials() * pfed) < 1) {
        throw ConfigError("too few calibration trials for the target pfed");
    }
}

std::vector<double> calibration_statistics(const CalibrationSpec& spec) {
    spec.validate();
    const long trials = spec.effective_trials();
    const SceneSampler sampler(spec.scene);
    std::vector<double> stats(trials);
    for_each_trial(trials, spec.threads, [&](long t) {
        const DataWindow w = sampler.draw(Hypothesis::H0, spec.master_seed,
                                          static_cast<std::uint64_t>(t));
        stats[t] = run_detector(spec.detector, w, spec.grid, 0.0).statistic;
    });
    return stats;
}

double threshold_from_statistics(std::vector<double> stats, double pfed) {
    const long k = std::lround(static_cast<double>(stats.size()) * pfed);
    if (k < 1 || k > static_cast<long>(stats.size())) {
        throw ConfigError("too few trials for the target pfed");
    }
    std::nth_element(stats.begin(), stats.begin() + (k - 1), stats.end(),
                     std::greater<double>());
    return stats[k - 1];
}

double calibrate_threshold(const CalibrationSpec& spec) {
    return threshold_from_statistics(calibration_statistics(spec), spec.pfed);
}

namespace {

struct TrialOutcome {
    bool detected = false;
    double sq_error = 0.0;
};

SweepResult run_sweep(const ClutterScene& scene_template,
                      const std::vector<double>& cpr_grid_db,
                      const std::optional<int>& fixed_l1,
                      const DetectorConfig& det, const L1Grid& grid, double eta,
                      long trials_per_point, std::uint64_t master_seed,
                      int threads) {
    if (trials_per_point < 1) throw ConfigError("need at least one trial");
    SweepResult result;
    result.trials_per_point = trials_per_point;
    result.eta = eta;

    std::vector<TrialOutcome> outcomes(trials_per_point);
    for (int p = 0; p < static_cast<int>(cpr_grid_db.size()); ++p) {
        ClutterScene scene = scene_template;
        scene.cpr_db = cpr_grid_db[p];
        if (fixed_l1) scene.true_l1 = *fixed_l1;
        scene.validate();
        det.validate(scene.channels, scene.window_length);
        const SceneSampler sampler(scene);

        for_each_trial(trials_per_point, threads, [&](long t) {
            const std::uint64_t stream = sweep_stream(p, t);
            int true_l1 = scene.true_l1;
            if (!fixed_l1) {
                // Discrete-uniform change point over the grid, drawn from a
                // substream disjoint from the sampling stream.
                PhiloxRng rng(master_seed ^ 0x9E3779B97F4A7C15ull, stream);
                true_l1 =
                    grid.min() + static_cast<int>(rng.next_below(grid.size()));
            }
            const DataWindow w =
                sampler.draw_with_l1(true_l1, master_seed, stream);
            const DetectionResult r = run_detector(det, w, grid, eta);
            TrialOutcome out;
            out.detected = r.decision;
            if (r.decision && r.l1hat) {
                const double err = *r.l1hat - true_l1;
                out.sq_error = err * err;
            }
            outcomes[t] = out;
        });

        long detections = 0;
        double sq_sum = 0.0;
        for (const TrialOutcome& out : outcomes) {
            if (out.detected) {
                ++detections;
                sq_sum += out.sq_error;
            }
        }
        result.cpr_db.push_back(cpr_grid_db[p]);
        result.detections.push_back(detections);
        result.ped.push_back(static_cast<double>(detections) / trials_per_point);
        result.rmse.push_back(
            detections > 0 ? std::sqrt(sq_sum / detections)
                           : std::numeric_limits<double>::quiet_NaN());
    }
    return result;
}

}  // namespace

SweepResult ped_sweep(const ClutterScene& scene_template,
                      const std::vector<double>& cpr_grid_db, int true_l1,
                      const DetectorConfig& det, const L1Grid& grid, double eta,
                      long trials_per_point, std::uint64_t master_seed,
                      int threads) {
    return run_sweep(scene_template, cpr_grid_db, true_l1, det, grid, eta,
                     trials_per_point, master_seed, threads);
}

SweepResult rmse_sweep(const ClutterScene& scene_template,
                       const std::vector<double>& cpr_grid_db,
                       const DetectorConfig& det, const L1Grid& grid,
                       double eta, long trials_per_point,
                       std::uint64_t master_seed, int threads) {
    return run_sweep(scene_template, cpr_grid_db, std::nullopt, det, grid, eta,
                     trials_per_point, master_seed, threads);
}

double structure_change_ped(const Eigen::MatrixXcd& m1,
                            const Eigen::MatrixXcd& m2, double sigma_n2,
                            int window_length, int true_l1,
                            const DetectorConfig& det, const L1Grid& grid,
                            double eta, long trials, std::uint64_t master_seed,
                            int threads) {
    if (trials < 1) throw ConfigError("need at least one trial");
    const int n = static_cast<int>(m1.rows());
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd f1 = covariance_factor(sigma_n2 * eye + m1);
    const Eigen::MatrixXcd f2 = covariance_factor(sigma_n2 * eye + m2);

    std::vector<char> detected(trials, 0);
    for_each_trial(trials, threads, [&](long t) {
        const DataWindow w = sample_edge_window_prefactored(
            f1, f2, true_l1, window_length, master_seed,
            static_cast<std::uint64_t>(t));
        detected[t] = run_detector(det, w, grid, eta).decision ? 1 : 0;
    });
    long count = 0;
    for (const char d : detected) count += d;
    return static_cast<double>(count) / static_cast<double>(trials);
}

Eigen::MatrixXcd random_hermitian_psd(int channels, int rank, double trace,
                                      std::uint64_t seed) {
    if (rank < 1 || rank > channels) {
        throw std::invalid_argument("need 1 <= rank <= N");
    }
    PhiloxRng rng(seed, 0);
    Eigen::MatrixXcd a(channels, rank);
    for (int j = 0; j < rank; ++j) {
        for (int i = 0; i < channels; ++i) a(i, j) = rng.next_cnormal();
    }
    Eigen::MatrixXcd m = a * a.adjoint();
    const double tr = m.real().trace();
    if (!(tr > 0.0)) throw NumericError("degenerate random factor");
    return (trace / tr) * m;
}

}  // namespace ced
