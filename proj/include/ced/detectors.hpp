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

/// Gated log-GLRT clutter edge detector (H-/P-/S-/C-CED by structure).
///
/// For each L1 in the grid, the candidate is l1(r1, r2, L1) - l0(r0) when the
/// eigenvalue gate passes (gamma_1i/L1 and gamma_2i/L2 strictly above the
/// pooled noise estimate for all modeled i), and 0 otherwise.  The statistic
/// is the grid maximum, l1hat the smallest maximizer.  Degenerate likelihoods
/// become -inf candidates; if every candidate is -inf the statistic is 0 and
/// l1hat absent.
DetectionResult ced_statistic(const DataWindow& w, const RankTriple& ranks,
                              Structure structure, const L1Grid& grid,
                              double eta);

/// Covariance change detector: grid maximum of
///   log det(S_h0/L)^L - log det(S_h1/L1)^L1 - log det(S_h2/L2)^L2,
/// the log covariance-equality GLRT (H-/P-/S-/C-CCD by structure).  Requires
/// grid.min > N and L - grid.max > N so segment scatters are full rank almost
/// surely; singular segments yield -inf candidates.
DetectionResult ccd_statistic(const DataWindow& w, Structure structure,
                              const L1Grid& grid, double eta);

}  // namespace ced
