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

#include "ced/detectors.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "ced/covmodel.hpp"
#include "ced/likelihood.hpp"

namespace ced {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DetectionResult finalize(std::vector<std::pair<int, double>> per_l1,
                         double eta) {
    DetectionResult result;
    double best = -kInf;
    std::optional<int> best_l1;
    for (const auto& [l1, cand] : per_l1) {
        if (cand > best) {
            best = cand;
            best_l1 = l1;
        }
    }
    if (best == -kInf) {
        result.statistic = 0.0;  // every candidate degenerate
        result.l1hat.reset();
    } else {
        result.statistic = best;
        result.l1hat = best_l1;
    }
    result.threshold = eta;
    result.decision = result.statistic > eta;
    result.per_l1 = std::move(per_l1);
    return result;
}

// Strict eigenvalue gate; vacuous for a zero-rank segment.  Spectra are
// descending, so the boundary eigenvalue decides.
bool gate_passes(const EigenSpectrum& spec1, const EigenSpectrum& spec2, int r1,
                 int r2, int l1, int l2, double noise) {
    if (r1 > 0 && !(spec1.gamma(r1 - 1) / l1 > noise)) return false;
    if (r2 > 0 && !(spec2.gamma(r2 - 1) / l2 > noise)) return false;
    return true;
}

// log det of a PSD scatter matrix via LDLT; false when numerically singular.
bool logdet_psd(const Eigen::MatrixXcd& m, Structure structure, double* out) {
    double acc = 0.0;
    if (is_real_structure(structure)) {
        Eigen::LDLT<Eigen::MatrixXd> ldlt(m.real());
        if (ldlt.info() != Eigen::Success) return false;
        const Eigen::VectorXd d = ldlt.vectorD();
        for (int i = 0; i < d.size(); ++i) {
            if (!(d(i) > 0.0)) return false;
            acc += std::log(d(i));
        }
    } else {
        Eigen::LDLT<Eigen::MatrixXcd> ldlt(m);
        if (ldlt.info() != Eigen::Success) return false;
        const Eigen::VectorXd d = ldlt.vectorD().real();
        for (int i = 0; i < d.size(); ++i) {
            if (!(d(i) > 0.0)) return false;
            acc += std::log(d(i));
        }
    }
    *out = acc;
    return true;
}

void check_grid_bounds(const L1Grid& grid, int length) {
    if (grid.min() < 1 || grid.max() > length - 1) {
        throw std::invalid_argument("change-point grid exceeds the window");
    }
}

}  // namespace

DetectionResult ced_statistic(const DataWindow& w, const RankTriple& ranks,
                              Structure structure, const L1Grid& grid,
                              double eta) {
    const int n = w.channels();
    const int L = w.length();
    if (!ranks.valid_for_channels(n)) {
        throw std::invalid_argument("ranks must lie in [0, N)");
    }
    if (L < ranks.r1 + ranks.r2) {
        throw std::invalid_argument("window too short: need L >= r1 + r2");
    }
    check_grid_bounds(grid, L);

    const auto prefix = scatter_prefixes(w);
    const auto project = [&](const Eigen::MatrixXcd& s, int count) {
        return ScatterMatrix{project_structure(s, structure), structure, count};
    };

    // l0 once over the whole window; a degenerate full-window likelihood
    // poisons every candidate.
    double l0 = -kInf;
    bool l0_ok = false;
    try {
        const LikelihoodValue v =
            h0_loglik(eigdecompose(project(prefix[L], L)), ranks.r0, L, n);
        l0 = v.value;
        l0_ok = std::isfinite(l0);
    } catch (const NumericError&) {
    }

    std::vector<std::pair<int, double>> per_l1;
    per_l1.reserve(grid.size());
    for (int l1 = grid.min(); l1 <= grid.max(); ++l1) {
        const int l2 = L - l1;
        double cand = -kInf;
        if (l0_ok) {
            try {
                const EigenSpectrum spec1 = eigdecompose(project(prefix[l1], l1));
                const EigenSpectrum spec2 =
                    eigdecompose(project(prefix[L] - prefix[l1], l2));
                const LikelihoodValue v =
                    h1_loglik(spec1, spec2, ranks.r1, ranks.r2, l1, l2, n);
                if (std::isfinite(v.value) &&
                    gate_passes(spec1, spec2, ranks.r1, ranks.r2, l1, l2,
                                v.noise_estimate)) {
                    cand = v.value - l0;
                } else {
                    cand = 0.0;  // gate failed: this point contributes zero
                }
            } catch (const NumericError&) {
                cand = -kInf;
            }
        }
        per_l1.emplace_back(l1, cand);
    }
    return finalize(std::move(per_l1), eta);
}

DetectionResult ccd_statistic(const DataWindow& w, Structure structure,
                              const L1Grid& grid, double eta) {
    const int n = w.channels();
    const int L = w.length();
    if (!(grid.min() > n && L - grid.max() > n)) {
        throw std::invalid_argument(
            "CCD grid requires l1min > N and L - l1max > N");
    }
    check_grid_bounds(grid, L);

    const auto prefix = scatter_prefixes(w);
    const double log_l = std::log(static_cast<double>(L));

    double ld0 = 0.0;
    const bool full_ok =
        logdet_psd(project_structure(prefix[L], structure), structure, &ld0);

    std::vector<std::pair<int, double>> per_l1;
    per_l1.reserve(grid.size());
    for (int l1 = grid.min(); l1 <= grid.max(); ++l1) {
        const int l2 = L - l1;
        double cand = -kInf;
        double ld1 = 0.0, ld2 = 0.0;
        if (full_ok &&
            logdet_psd(project_structure(prefix[l1], structure), structure,
                       &ld1) &&
            logdet_psd(project_structure(prefix[L] - prefix[l1], structure),
                       structure, &ld2)) {
            // log of det(S0/L)^L / (det(S1/L1)^L1 det(S2/L2)^L2)
            cand = L * (ld0 - n * log_l) -
                   l1 * (ld1 - n * std::log(static_cast<double>(l1))) -
                   l2 * (ld2 - n * std::log(static_cast<double>(l2)));
        }
        per_l1.emplace_back(l1, cand);
    }
    return finalize(std::move(per_l1), eta);
}

}  // namespace ced
