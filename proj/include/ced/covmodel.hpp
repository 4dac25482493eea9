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
#include <span>
#include <vector>

#include "ced/types.hpp"

namespace ced {

/// Structure projection of a raw Hermitian scatter matrix:
///   Hermitian        -> S
///   Persymmetric     -> (S + J S* J) / 2
///   Symmetric        -> Re{S}
///   Centrosymmetric  -> (Re{S} + J Re{S} J) / 2
/// All four are trace- and PSD-preserving linear maps.
Eigen::MatrixXcd project_structure(const Eigen::MatrixXcd& s, Structure structure);

/// Structured scatter over columns [begin, end) of the window:
/// project(sum z_l z_l^H), summed in column order.
ScatterMatrix structured_scatter(const DataWindow& w, int begin, int end,
                                 Structure structure);

/// Scatter over the whole window.
inline ScatterMatrix structured_scatter(const DataWindow& w, Structure structure) {
    return structured_scatter(w, 0, w.length(), structure);
}

/// prefix[l] = unprojected scatter of the first l columns, summed in column
/// order.  prefix[l1] and prefix[L] - prefix[l1] give the split scatters the
/// detectors evaluate at every candidate change point.
std::vector<Eigen::MatrixXcd> scatter_prefixes(const DataWindow& w);

/// Spatial steering vector for a uniform linear array: element m is
/// exp{j pi (m - (N-1)/2) sin theta}, m = 0..N-1.  Unit-modulus entries,
/// conjugate-symmetric (J v* = v).
Eigen::VectorXcd steering_vector(double theta_deg, int channels);

/// Rank-|angles| clutter covariance  sigma_c^2 * sum_k v(theta_k) v(theta_k)^H.
Eigen::MatrixXcd clutter_covariance(std::span<const double> angles_deg,
                                    double clutter_power, int channels);

enum class Hypothesis { H0, H1 };

/// Synthetic scene: thermal noise plus low-rank clutter on each side of an
/// optional edge.  Region powers follow
///   sigma_c0^2 = sigma_n^2 * 10^(CNR/10),  sigma_c1^2 = sigma_c0^2,
///   sigma_c2^2 = sigma_c1^2 * 10^(CPR/10).
struct ClutterScene {
    int channels = 0;       // N
    int window_length = 0;  // L
    double sigma_n2 = 1.0;
    double cnr_db = 0.0;
    double cpr_db = 0.0;
    std::vector<double> theta0_deg;
    std::vector<double> theta1_deg;
    std::vector<double> theta2_deg;
    int true_l1 = 0;  // change point under H1

    double clutter_power0() const;
    double clutter_power1() const { return clutter_power0(); }
    double clutter_power2() const;

    /// M_i for region i in {0, 1, 2}.
    Eigen::MatrixXcd clutter_component(int region) const;
    /// sigma_n^2 I + M_i.
    Eigen::MatrixXcd covariance(int region) const;

    void validate() const;
};

/// Square-root factor A with A A^H = cov, via eigendecomposition (robust to
/// the rank-deficient clutter component).
Eigen::MatrixXcd covariance_factor(const Eigen::MatrixXcd& cov);

/// Draws `length` iid CN(0, cov) columns from substream (seed, stream).
DataWindow sample_gaussian_window(const Eigen::MatrixXcd& cov, int length,
                                  std::uint64_t seed, std::uint64_t stream = 0);

/// Columns 1..l1 ~ CN(0, cov1), columns l1+1..L ~ CN(0, cov2), drawn from a
/// single substream in column order.
DataWindow sample_edge_window(const Eigen::MatrixXcd& cov1,
                              const Eigen::MatrixXcd& cov2, int l1, int length,
                              std::uint64_t seed, std::uint64_t stream = 0);

/// As sample_edge_window, with precomputed square-root factors (a a^H = cov).
DataWindow sample_edge_window_prefactored(const Eigen::MatrixXcd& factor1,
                                          const Eigen::MatrixXcd& factor2,
                                          int l1, int length,
                                          std::uint64_t seed,
                                          std::uint64_t stream = 0);

/// Precomputed covariance factors for a scene; draw() is bit-identical to
/// sample_window() on the same arguments.
class SceneSampler {
public:
    explicit SceneSampler(const ClutterScene& scene);

    DataWindow draw(Hypothesis hyp, std::uint64_t seed,
                    std::uint64_t stream = 0) const;
    /// H1 draw with an explicit change point (overrides scene.true_l1).
    DataWindow draw_with_l1(int l1, std::uint64_t seed,
                            std::uint64_t stream = 0) const;

    int channels() const { return channels_; }
    int length() const { return length_; }

private:
    int channels_;
    int length_;
    int true_l1_;
    Eigen::MatrixXcd factor0_, factor1_, factor2_;
};

/// One training window under the given hypothesis.  Identical
/// (scene, hypothesis, seed, stream) give bit-identical output.
DataWindow sample_window(const ClutterScene& scene, Hypothesis hyp,
                         std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace ced
