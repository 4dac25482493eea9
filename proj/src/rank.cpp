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

#include "ced/rank.hpp"

#include <cmath>
#include <limits>

#include "ced/covmodel.hpp"
#include "ced/likelihood.hpp"

namespace ced {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int default_search_max(int search_max, int channels) {
    if (search_max < 0) return channels - 2;
    return search_max;
}

}  // namespace

double MosRule::q(int length) const {
    switch (kind) {
        case MosKind::Aic: return 2.0;
        case MosKind::Bic: return std::log(static_cast<double>(length));
        case MosKind::Gic: return 1.0 + gic_a;
    }
    throw std::invalid_argument("unknown MOS rule");
}

void MosRule::validate() const {
    if (kind == MosKind::Gic && !(gic_a > 1.0)) {
        throw ConfigError("GIC requires a > 1");
    }
}

const char* to_string(MosKind k) {
    switch (k) {
        case MosKind::Aic: return "aic";
        case MosKind::Bic: return "bic";
        case MosKind::Gic: return "gic";
    }
    return "unknown";
}

MosKind mos_kind_from_string(const std::string& name) {
    if (name == "aic") return MosKind::Aic;
    if (name == "bic") return MosKind::Bic;
    if (name == "gic") return MosKind::Gic;
    throw ConfigError("unknown MOS rule: " + name);
}

int parameter_count_h0(int r0, int channels) {
    return r0 * (2 * channels - r0) + 1;
}

int parameter_count_h1(int r1, int r2, int channels) {
    return 1 + r1 * (2 * channels - r1) + r2 * (2 * channels - r2);
}

int estimate_r0(const EigenSpectrum& spec, int length, int channels,
                const MosRule& rule, int search_max) {
    rule.validate();
    if (search_max < 0 || search_max > channels - 1) {
        throw std::invalid_argument("need 0 <= search_max <= N-1");
    }
    const double q = rule.q(length);
    int best_rank = 0;
    double best_score = kInf;
    for (int r0 = 0; r0 <= search_max; ++r0) {
        const LikelihoodValue v = h0_loglik(spec, r0, length, channels);
        if (!std::isfinite(v.value)) continue;
        const double score = -2.0 * v.value + q * parameter_count_h0(r0, channels);
        if (score < best_score) {
            best_score = score;
            best_rank = r0;
        }
    }
    return best_rank;
}

RankEstimate estimate_ranks_h1(const DataWindow& w, Structure structure,
                               const L1Grid& grid, const MosRule& rule,
                               int search_max) {
    rule.validate();
    const int n = w.channels();
    const int L = w.length();
    const int rmax = default_search_max(search_max, n);
    if (rmax < 0 || rmax > n - 1) {
        throw std::invalid_argument("need 0 <= search_max <= N-1");
    }
    if (grid.min() < 1 || grid.max() > L - 1) {
        throw std::invalid_argument("change-point grid exceeds the window");
    }
    const double q = rule.q(L);

    // Same incremental split scatters as the known-rank detector, so its
    // candidate values are reproduced exactly when the estimated ranks agree.
    const auto prefix = scatter_prefixes(w);
    const auto project = [&](const Eigen::MatrixXcd& s, int count) {
        return ScatterMatrix{project_structure(s, structure), structure, count};
    };

    const EigenSpectrum spec0 = eigdecompose(project(prefix[L], L));
    const int r0hat = estimate_r0(spec0, L, n, rule, rmax);

    double l0 = -kInf;
    try {
        l0 = h0_loglik(spec0, r0hat, L, n).value;
    } catch (const NumericError&) {
    }

    RankEstimate est;
    est.r0hat = r0hat;
    double best_cand = -kInf;
    for (int l1 = grid.min(); l1 <= grid.max(); ++l1) {
        const int l2 = L - l1;
        const EigenSpectrum spec1 = eigdecompose(project(prefix[l1], l1));
        const EigenSpectrum spec2 =
            eigdecompose(project(prefix[L] - prefix[l1], l2));

        // Penalized 2-D search; pairs whose admissible change-point window
        // excludes this L1 are skipped.
        double best_score = kInf;
        int r1_sel = -1, r2_sel = -1;
        for (int r1 = 0; r1 <= rmax; ++r1) {
            for (int r2 = 0; r2 <= rmax; ++r2) {
                const int margin = std::max(r1, r2);
                if (l1 < margin + 1 || l1 > L - margin - 1) continue;
                if (L < r1 + r2) continue;
                double value;
                try {
                    value = h1_loglik(spec1, spec2, r1, r2, l1, l2, n).value;
                } catch (const NumericError&) {
                    continue;
                }
                if (!std::isfinite(value)) continue;
                const double score =
                    -2.0 * value + q * parameter_count_h1(r1, r2, n);
                if (score < best_score) {
                    best_score = score;
                    r1_sel = r1;
                    r2_sel = r2;
                }
            }
        }
        if (r1_sel < 0) continue;  // no admissible pair at this split

        // Gated GLRT candidate at (r0hat, r1_sel, r2_sel).
        double cand = -kInf;
        if (std::isfinite(l0)) {
            try {
                const LikelihoodValue v =
                    h1_loglik(spec1, spec2, r1_sel, r2_sel, l1, l2, n);
                const bool gate =
                    (r1_sel == 0 ||
                     spec1.gamma(r1_sel - 1) / l1 > v.noise_estimate) &&
                    (r2_sel == 0 ||
                     spec2.gamma(r2_sel - 1) / l2 > v.noise_estimate);
                cand = (std::isfinite(v.value) && gate) ? v.value - l0 : 0.0;
            } catch (const NumericError&) {
            }
        }
        est.score_per_l1.push_back({l1, r1_sel, r2_sel, cand});
        if (cand > best_cand) {
            best_cand = cand;
            est.l1hat = l1;
            est.r1hat = r1_sel;
            est.r2hat = r2_sel;
        }
    }
    est.statistic = (best_cand == -kInf) ? 0.0 : best_cand;
    if (best_cand == -kInf) est.l1hat.reset();
    return est;
}

DetectionResult mos_ced_statistic(const DataWindow& w, Structure structure,
                                  const L1Grid& grid, const MosRule& rule,
                                  double eta, int search_max,
                                  RankEstimate* ranks_out) {
    const RankEstimate est = estimate_ranks_h1(w, structure, grid, rule,
                                               search_max);
    DetectionResult result;
    result.statistic = est.statistic;
    result.l1hat = est.l1hat;
    result.threshold = eta;
    result.decision = result.statistic > eta;
    result.per_l1.reserve(est.score_per_l1.size());
    for (const auto& p : est.score_per_l1) {
        result.per_l1.emplace_back(p.l1, p.candidate);
    }
    if (ranks_out != nullptr) *ranks_out = est;
    return result;
}

}  // namespace ced
