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

/// Descending eigenvalues of a (Hermitian or real symmetric) scatter matrix.
/// Negative values within -1e-10 * gamma_1 are clamped to zero; anything
/// more negative raises NumericError.
EigenSpectrum eigdecompose(const ScatterMatrix& s);

/// Maximized log-likelihood of an L-column window under a homogeneous
/// rank-r0 low-rank-plus-scaled-identity covariance:
///   l0(r0) = C - LN - L * [ sum_{i<=r0} log(gamma_i / L)
///                           + (N - r0) log sigma0^2 ],
///   sigma0^2 = sum_{i>r0} gamma_i / (L (N - r0)),  C = -LN log pi.
/// Returns value = -inf when a modeled eigenvalue is exactly zero;
/// throws NumericError when sigma0^2 <= 0.
LikelihoodValue h0_loglik(const EigenSpectrum& spec, int r0, int length,
                          int channels);

/// Maximized two-segment log-likelihood with segment lengths l1, l2 and
/// ranks r1, r2, sharing one noise power across segments:
///   sigma1^2 = (sum_{i>r1} gamma_1i + sum_{i>r2} gamma_2i)
///              / (l1 (N - r1) + l2 (N - r2)).
/// The returned noise_estimate feeds the detector gate
/// gamma_1i / l1 > sigma1^2 (i <= r1) and gamma_2i / l2 > sigma1^2 (i <= r2).
LikelihoodValue h1_loglik(const EigenSpectrum& spec1, const EigenSpectrum& spec2,
                          int r1, int r2, int l1, int l2, int channels);

}  // namespace ced
