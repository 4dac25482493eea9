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

#include "ced/types.hpp"

namespace ced {

enum class MosKind { Aic, Bic, Gic };

/// Model-order-selection penalty weight q: 2 (AIC), log L (BIC-like),
/// 1 + a with a > 1 (GIC).
struct MosRule {
    MosKind kind = MosKind::Bic;
    double gic_a = 4.0;

    double q(int length) const;
    void validate() const;
};

const char* to_string(MosKind k);
MosKind mos_kind_from_string(const std::string& name);

/// Unknown-parameter count p(r0) = r0 (2N - r0) + 1 of the homogeneous model
/// (general Hermitian covariance).
int parameter_count_h0(int r0, int channels);

/// Two-segment count zeta(r1, r2) = 1 + sum_i r_i (2N - r_i).
int parameter_count_h1(int r1, int r2, int channels);

/// argmin over r0 in {0..search_max} of -2 l0(r0) + q p(r0); smallest r0 on
/// ties.  Ranks whose likelihood is degenerate (-inf) are skipped.
int estimate_r0(const EigenSpectrum& spec, int length, int channels,
                const MosRule& rule, int search_max);

struct RankEstimate {
    int r0hat = 0;
    int r1hat = 0;
    int r2hat = 0;
    std::optional<int> l1hat;
    double statistic = 0.0;  // gated CED candidate at the selected L1

    struct PerL1 {
        int l1 = 0;
        int r1 = 0;
        int r2 = 0;
        double candidate = 0.0;
    };
    std::vector<PerL1> score_per_l1;
};

/// Rank estimation for unknown r: per grid point, minimizes
/// -2 l1(r1, r2, L1) + q zeta(r1, r2) over pairs in {0..search_max}^2
/// (lexicographically smallest on ties), then selects the L1 maximizing the
/// gated CED candidate evaluated at (r0hat, r1hat_L1, r2hat_L1).  Grid points
/// outside the admissible window of a hypothesized pair are skipped for that
/// pair.  search_max = -1 means the N-2 default.
RankEstimate estimate_ranks_h1(const DataWindow& w, Structure structure,
                               const L1Grid& grid, const MosRule& rule,
                               int search_max = -1);

/// Detection with MOS-estimated ranks: thresholds the statistic of
/// estimate_ranks_h1 against eta.
DetectionResult mos_ced_statistic(const DataWindow& w, Structure structure,
                                  const L1Grid& grid, const MosRule& rule,
                                  double eta, int search_max = -1,
                                  RankEstimate* ranks_out = nullptr);

}  // namespace ced
