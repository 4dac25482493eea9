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

// Brute-force maximization of the exact Gaussian log-likelihoods, used as an
// independent oracle for the closed-form eigenvalue expressions.  The clutter
// component is parameterized in the scatter eigenbasis with clamped
// coordinates, the noise power by grid refinement, and every candidate is
// scored through plain matrix algebra (log-determinant and explicit solves),
// never through the closed forms under test.

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

namespace ced::testing {

/// log f of an L-sample segment with scatter s under covariance
/// sigma2 I + m, straight from the density.
inline double exact_segment_loglik(const Eigen::MatrixXcd& s, int samples,
                                   double sigma2, const Eigen::MatrixXcd& m) {
    const int n = static_cast<int>(s.rows());
    const Eigen::MatrixXcd cov =
        sigma2 * Eigen::MatrixXcd::Identity(n, n) + m;
    const Eigen::LDLT<Eigen::MatrixXcd> ldlt(cov);
    double logdet = 0.0;
    const Eigen::VectorXd d = ldlt.vectorD().real();
    for (int i = 0; i < n; ++i) {
        if (!(d(i) > 0.0)) return -std::numeric_limits<double>::infinity();
        logdet += std::log(d(i));
    }
    const double tr = ldlt.solve(s).real().trace();
    return -samples * n * std::log(M_PI) - samples * logdet - tr;
}

struct SegmentBasis {
    Eigen::MatrixXcd vectors;   // eigenvectors of the scatter
    Eigen::VectorXd values;     // descending eigenvalues
};

inline SegmentBasis scatter_basis(const Eigen::MatrixXcd& s) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s);
    SegmentBasis basis;
    basis.vectors = es.eigenvectors().rowwise().reverse();
    basis.values = es.eigenvalues().reverse();
    return basis;
}

/// Best rank-r clutter component for a fixed noise power: top-r scatter
/// directions with coordinates max(gamma_i / samples - sigma2, 0).
inline Eigen::MatrixXcd best_clutter_for_sigma(const SegmentBasis& basis,
                                               int rank, int samples,
                                               double sigma2) {
    const int n = static_cast<int>(basis.values.size());
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < rank; ++i) {
        d(i) = std::max(basis.values(i) / samples - sigma2, 0.0);
    }
    return basis.vectors * d.asDiagonal() * basis.vectors.adjoint();
}

/// Grid-refined maximization over the noise power of a 1-D profile
/// likelihood.  `eval` maps sigma2 to the profiled log-likelihood.
template <typename Eval>
double refine_over_sigma(double lo, double hi, const Eval& eval) {
    double best = -std::numeric_limits<double>::infinity();
    constexpr int kPoints = 120;
    constexpr int kRounds = 12;
    for (int round = 0; round < kRounds; ++round) {
        int best_idx = 0;
        for (int i = 0; i <= kPoints; ++i) {
            const double sigma2 = lo + (hi - lo) * i / kPoints;
            if (!(sigma2 > 0.0)) continue;
            const double value = eval(sigma2);
            if (value > best) {
                best = value;
                best_idx = i;
            }
        }
        const double step = (hi - lo) / kPoints;
        const double center = lo + step * best_idx;
        lo = std::max(center - 2.0 * step, step * 1e-6);
        hi = center + 2.0 * step;
    }
    return best;
}

/// Brute-force maximum of the homogeneous-window log-likelihood over the
/// noise power and a rank-r0 PSD clutter component in the scatter eigenbasis.
inline double oracle_h0_max(const Eigen::MatrixXcd& s_h0, int r0, int samples) {
    const SegmentBasis basis = scatter_basis(s_h0);
    const int n = static_cast<int>(s_h0.rows());
    const double top = basis.values(0) / samples;
    const double mean = basis.values.sum() / (samples * n);
    return refine_over_sigma(mean * 1e-9, 1.25 * top + mean, [&](double sigma2) {
        const Eigen::MatrixXcd m =
            best_clutter_for_sigma(basis, r0, samples, sigma2);
        return exact_segment_loglik(s_h0, samples, sigma2, m);
    });
}

/// Brute-force maximum of the two-segment log-likelihood over the shared
/// noise power and per-segment rank-constrained clutter components.
inline double oracle_h1_max(const Eigen::MatrixXcd& s_h1,
                            const Eigen::MatrixXcd& s_h2, int r1, int r2,
                            int l1, int l2) {
    const SegmentBasis basis1 = scatter_basis(s_h1);
    const SegmentBasis basis2 = scatter_basis(s_h2);
    const int n = static_cast<int>(s_h1.rows());
    const double top =
        std::max(basis1.values(0) / l1, basis2.values(0) / l2);
    const double mean =
        (basis1.values.sum() + basis2.values.sum()) / ((l1 + l2) * n);
    return refine_over_sigma(mean * 1e-9, 1.25 * top + mean, [&](double sigma2) {
        const Eigen::MatrixXcd m1 = best_clutter_for_sigma(basis1, r1, l1, sigma2);
        const Eigen::MatrixXcd m2 = best_clutter_for_sigma(basis2, r2, l2, sigma2);
        // The per-segment -L_i N log(pi) constants add up to the joint C.
        return exact_segment_loglik(s_h1, l1, sigma2, m1) +
               exact_segment_loglik(s_h2, l2, sigma2, m2);
    });
}

}  // namespace ced::testing
