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

#include "ced/likelihood.hpp"

#include <cmath>
#include <limits>

namespace ced {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEigClampTol = 1e-10;

EigenSpectrum spectrum_from_eigenvalues(Eigen::VectorXd ascending,
                                        int sample_count) {
    Eigen::VectorXd gamma = ascending.reverse();
    const double top = std::max(gamma(0), 0.0);
    for (int i = 0; i < gamma.size(); ++i) {
        if (gamma(i) < -kEigClampTol * top) {
            throw NumericError("scatter matrix is not positive semi-definite");
        }
        gamma(i) = std::max(gamma(i), 0.0);
    }
    return {std::move(gamma), sample_count};
}

// sum of log(gamma_i / denom) over the r leading eigenvalues; -inf when a
// modeled eigenvalue is exactly zero.
double leading_log_sum(const Eigen::VectorXd& gamma, int r, double denom) {
    double acc = 0.0;
    for (int i = 0; i < r; ++i) {
        if (gamma(i) <= 0.0) return -kInf;
        acc += std::log(gamma(i) / denom);
    }
    return acc;
}

}  // namespace

EigenSpectrum eigdecompose(const ScatterMatrix& s) {
    if (s.mat.rows() != s.mat.cols() || s.mat.rows() < 1) {
        throw std::invalid_argument("scatter matrix must be square");
    }
    if (is_real_structure(s.structure)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.mat.real(),
                                                          Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) {
            throw NumericError("eigensolver failed to converge");
        }
        return spectrum_from_eigenvalues(es.eigenvalues(), s.sample_count);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s.mat,
                                                       Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw NumericError("eigensolver failed to converge");
    }
    return spectrum_from_eigenvalues(es.eigenvalues(), s.sample_count);
}

LikelihoodValue h0_loglik(const EigenSpectrum& spec, int r0, int length,
                          int channels) {
    const int n = channels;
    const int L = length;
    if (r0 < 0 || r0 >= n) throw std::invalid_argument("need 0 <= r0 < N");
    if (spec.gamma.size() != n) {
        throw std::invalid_argument("spectrum size does not match channel count");
    }
    if (L < 1) throw std::invalid_argument("need L >= 1");

    const double tail = spec.gamma.tail(n - r0).sum();
    const double noise = tail / (static_cast<double>(L) * (n - r0));

    // A zero modeled eigenvalue is the sentinel case (the detector gate
    // already discards it); a zero noise estimate with positive modeled
    // eigenvalues is unrecoverable.
    const double modeled = leading_log_sum(spec.gamma, r0, L);
    if (modeled == -kInf) return {-kInf, noise};
    if (!(noise > 0.0)) {
        throw NumericError("degenerate data: zero noise-power estimate");
    }

    const double c = -static_cast<double>(L) * n * std::log(M_PI);
    const double value =
        c - static_cast<double>(L) * n -
        L * (modeled + (n - r0) * std::log(noise));
    return {value, noise};
}

LikelihoodValue h1_loglik(const EigenSpectrum& spec1, const EigenSpectrum& spec2,
                          int r1, int r2, int l1, int l2, int channels) {
    const int n = channels;
    if (r1 < 0 || r1 >= n || r2 < 0 || r2 >= n) {
        throw std::invalid_argument("need 0 <= r1, r2 < N");
    }
    if (l1 < 1 || l2 < 1) throw std::invalid_argument("need L1, L2 >= 1");
    if (spec1.gamma.size() != n || spec2.gamma.size() != n) {
        throw std::invalid_argument("spectrum size does not match channel count");
    }

    const double weight = static_cast<double>(l1) * (n - r1) +
                          static_cast<double>(l2) * (n - r2);
    const double tail =
        spec1.gamma.tail(n - r1).sum() + spec2.gamma.tail(n - r2).sum();
    const double noise = tail / weight;

    const double modeled1 = leading_log_sum(spec1.gamma, r1, l1);
    const double modeled2 = leading_log_sum(spec2.gamma, r2, l2);
    if (modeled1 == -kInf || modeled2 == -kInf) return {-kInf, noise};
    if (!(noise > 0.0)) {
        throw NumericError("degenerate data: zero noise-power estimate");
    }

    const int L = l1 + l2;
    const double c = -static_cast<double>(L) * n * std::log(M_PI);
    const double value = c - static_cast<double>(L) * n -
                         weight * std::log(noise) - l1 * modeled1 - l2 * modeled2;
    return {value, noise};
}

}  // namespace ced
