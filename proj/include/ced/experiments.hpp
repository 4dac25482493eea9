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

#include <cstdint>
#include <string>
#include <vector>

#include "ced/covmodel.hpp"
#include "ced/detectors.hpp"
#include "ced/rank.hpp"
#include "ced/types.hpp"

namespace ced {

enum class DetectorFamily { Ced, Ccd };

const char* to_string(DetectorFamily f);
DetectorFamily family_from_string(const std::string& name);

/// One detector variant: family x structure, with known ranks or a MOS rule
/// (the latter applies to the CED family only; the CCD is rank-free).
struct DetectorConfig {
    DetectorFamily family = DetectorFamily::Ced;
    Structure structure = Structure::Hermitian;
    std::optional<RankTriple> ranks;  // nullopt: estimate via MOS
    MosRule mos_rule;
    int search_max = -1;  // -1: N-2 default

    void validate(int channels, int window_length) const;
};

DetectionResult run_detector(const DetectorConfig& det, const DataWindow& w,
                             const L1Grid& grid, double eta);

/// Monte Carlo threshold calibration at a target false-edge probability.
struct CalibrationSpec {
    double pfed = 1e-3;
    long trials = 0;  // 0: default 100 / pfed
    ClutterScene scene;
    DetectorConfig detector;
    L1Grid grid{1, 1};
    std::uint64_t master_seed = 0;
    int threads = 1;

    long effective_trials() const;
    void validate() const;
};

/// Detector statistic on `trials` independent H0 windows, trial-ordered.
/// Trial t draws from substream (master_seed, t) regardless of threading.
std::vector<double> calibration_statistics(const CalibrationSpec& spec);

/// k-th largest statistic with k = round(trials * pfed); ties resolve toward
/// the larger statistic (conservative false-edge rate under a strict
/// `statistic > eta` decision).
double threshold_from_statistics(std::vector<double> stats, double pfed);

double calibrate_threshold(const CalibrationSpec& spec);

/// One point per CPR value.  rmse is NaN where no trial detected.
struct SweepResult {
    std::vector<double> cpr_db;
    std::vector<double> ped;
    std::vector<double> rmse;
    std::vector<long> detections;
    long trials_per_point = 0;
    double eta = 0.0;
};

/// P_ED and RMS localization error versus CPR at a fixed true change point.
/// Trial t of point p draws from substream (master_seed, p * 2^32 + t), so
/// runs over different detectors with one seed are paired.
SweepResult ped_sweep(const ClutterScene& scene_template,
                      const std::vector<double>& cpr_grid_db, int true_l1,
                      const DetectorConfig& det, const L1Grid& grid, double eta,
                      long trials_per_point, std::uint64_t master_seed,
                      int threads = 1);

/// As ped_sweep, but the true change point of each trial is uniform over the
/// grid; RMS error is computed over detecting trials only.
SweepResult rmse_sweep(const ClutterScene& scene_template,
                       const std::vector<double>& cpr_grid_db,
                       const DetectorConfig& det, const L1Grid& grid,
                       double eta, long trials_per_point,
                       std::uint64_t master_seed, int threads = 1);

/// Empirical P_ED for a window whose two regions have explicit clutter
/// components m1 and m2 (covariance sigma_n^2 I + m_i).  Used to probe
/// detection of a covariance *structure* change.
double structure_change_ped(const Eigen::MatrixXcd& m1,
                            const Eigen::MatrixXcd& m2, double sigma_n2,
                            int window_length, int true_l1,
                            const DetectorConfig& det, const L1Grid& grid,
                            double eta, long trials, std::uint64_t master_seed,
                            int threads = 1);

/// Random Hermitian PSD matrix of the given rank with the requested trace
/// (outer product of a seeded Gaussian factor).
Eigen::MatrixXcd random_hermitian_psd(int channels, int rank, double trace,
                                      std::uint64_t seed);

}  // namespace ced
