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

#include "ced/covmodel.hpp"

#include <cmath>
#include <utility>

#include "ced/rng.hpp"

namespace ced {

namespace {

// J A J with J the anti-identity: reverse both index orders.
template <typename Derived>
auto double_flip(const Eigen::MatrixBase<Derived>& a) {
    return a.rowwise().reverse().colwise().reverse().eval();
}

}  // namespace

Eigen::MatrixXcd project_structure(const Eigen::MatrixXcd& s, Structure structure) {
    switch (structure) {
        case Structure::Hermitian:
            return s;
        case Structure::Persymmetric:
            return 0.5 * (s + double_flip(s.conjugate()));
        case Structure::Symmetric:
            return s.real().cast<Complex>();
        case Structure::Centrosymmetric: {
            const Eigen::MatrixXd re = s.real();
            return (0.5 * (re + double_flip(re))).cast<Complex>();
        }
    }
    throw std::invalid_argument("unknown structure");
}

ScatterMatrix structured_scatter(const DataWindow& w, int begin, int end,
                                 Structure structure) {
    if (begin < 0 || end > w.length() || begin >= end) {
        throw std::invalid_argument("empty or out-of-range scatter column range");
    }
    const int n = w.channels();
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n, n);
    for (int l = begin; l < end; ++l) {
        s.noalias() += w.data().col(l) * w.data().col(l).adjoint();
    }
    return {project_structure(s, structure), structure, end - begin};
}

std::vector<Eigen::MatrixXcd> scatter_prefixes(const DataWindow& w) {
    const int n = w.channels();
    const int length = w.length();
    std::vector<Eigen::MatrixXcd> prefix(length + 1);
    prefix[0] = Eigen::MatrixXcd::Zero(n, n);
    for (int l = 0; l < length; ++l) {
        prefix[l + 1] = prefix[l];
        prefix[l + 1].noalias() += w.data().col(l) * w.data().col(l).adjoint();
    }
    return prefix;
}

Eigen::VectorXcd steering_vector(double theta_deg, int channels) {
    if (channels < 2) {
        throw std::invalid_argument("steering vector requires N >= 2");
    }
    const double sin_theta = std::sin(theta_deg * M_PI / 180.0);
    Eigen::VectorXcd v(channels);
    for (int m = 0; m < channels; ++m) {
        const double phase = M_PI * (m - 0.5 * (channels - 1)) * sin_theta;
        v(m) = Complex{std::cos(phase), std::sin(phase)};
    }
    return v;
}

Eigen::MatrixXcd clutter_covariance(std::span<const double> angles_deg,
                                    double clutter_power, int channels) {
    if (angles_deg.empty() || static_cast<int>(angles_deg.size()) >= channels) {
        throw std::invalid_argument("need 1 <= |angles| < N");
    }
    if (clutter_power < 0.0) {
        throw std::invalid_argument("clutter power must be nonnegative");
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(channels, channels);
    for (const double theta : angles_deg) {
        const Eigen::VectorXcd v = steering_vector(theta, channels);
        m.noalias() += v * v.adjoint();
    }
    return clutter_power * m;
}

double ClutterScene::clutter_power0() const {
    return sigma_n2 * std::pow(10.0, cnr_db / 10.0);
}

double ClutterScene::clutter_power2() const {
    return clutter_power1() * std::pow(10.0, cpr_db / 10.0);
}

Eigen::MatrixXcd ClutterScene::clutter_component(int region) const {
    switch (region) {
        case 0: return clutter_covariance(theta0_deg, clutter_power0(), channels);
        case 1: return clutter_covariance(theta1_deg, clutter_power1(), channels);
        case 2: return clutter_covariance(theta2_deg, clutter_power2(), channels);
        default: throw std::invalid_argument("region must be 0, 1 or 2");
    }
}

Eigen::MatrixXcd ClutterScene::covariance(int region) const {
    return sigma_n2 * Eigen::MatrixXcd::Identity(channels, channels) +
           clutter_component(region);
}

void ClutterScene::validate() const {
    if (channels < 2) throw ConfigError("scene requires N >= 2");
    if (window_length < 2) throw ConfigError("scene requires L >= 2");
    if (!(sigma_n2 > 0.0)) throw ConfigError("noise power must be positive");
    for (const auto* angles : {&theta0_deg, &theta1_deg, &theta2_deg}) {
        if (angles->empty() || static_cast<int>(angles->size()) >= channels) {
            throw ConfigError("each angle set needs 1 <= |theta| < N");
        }
    }
    if (true_l1 < 1 || true_l1 >= window_length) {
        throw ConfigError("true change point must lie strictly inside the window");
    }
}

Eigen::MatrixXcd covariance_factor(const Eigen::MatrixXcd& cov) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cov);
    if (es.info() != Eigen::Success) {
        throw NumericError("covariance eigendecomposition failed");
    }
    Eigen::VectorXd ev = es.eigenvalues();
    const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    for (int i = 0; i < ev.size(); ++i) {
        if (ev(i) < -1e-10 * scale) {
            throw NumericError("covariance is not positive semi-definite");
        }
        ev(i) = std::max(ev(i), 0.0);
    }
    return es.eigenvectors() * ev.cwiseSqrt().asDiagonal();
}

namespace {

DataWindow sample_from_factors(const Eigen::MatrixXcd& f1,
                               const Eigen::MatrixXcd& f2, int l1, int length,
                               std::uint64_t seed, std::uint64_t stream) {
    const int n = static_cast<int>(f1.rows());
    PhiloxRng rng(seed, stream);
    Eigen::MatrixXcd z(n, length);
    Eigen::VectorXcd w(n);
    for (int l = 0; l < length; ++l) {
        for (int i = 0; i < n; ++i) w(i) = rng.next_cnormal();
        z.col(l).noalias() = ((l < l1) ? f1 : f2) * w;
    }
    return DataWindow(std::move(z));
}

}  // namespace

DataWindow sample_gaussian_window(const Eigen::MatrixXcd& cov, int length,
                                  std::uint64_t seed, std::uint64_t stream) {
    const Eigen::MatrixXcd f = covariance_factor(cov);
    return sample_from_factors(f, f, length, length, seed, stream);
}

DataWindow sample_edge_window(const Eigen::MatrixXcd& cov1,
                              const Eigen::MatrixXcd& cov2, int l1, int length,
                              std::uint64_t seed, std::uint64_t stream) {
    if (l1 < 1 || l1 >= length) {
        throw std::invalid_argument("change point must lie strictly inside the window");
    }
    return sample_from_factors(covariance_factor(cov1), covariance_factor(cov2),
                               l1, length, seed, stream);
}

DataWindow sample_edge_window_prefactored(const Eigen::MatrixXcd& factor1,
                                          const Eigen::MatrixXcd& factor2,
                                          int l1, int length,
                                          std::uint64_t seed,
                                          std::uint64_t stream) {
    if (l1 < 1 || l1 > length) {
        throw std::invalid_argument("change point out of range");
    }
    return sample_from_factors(factor1, factor2, l1, length, seed, stream);
}

SceneSampler::SceneSampler(const ClutterScene& scene)
    : channels_(scene.channels),
      length_(scene.window_length),
      true_l1_(scene.true_l1) {
    scene.validate();
    factor0_ = covariance_factor(scene.covariance(0));
    factor1_ = covariance_factor(scene.covariance(1));
    factor2_ = covariance_factor(scene.covariance(2));
}

DataWindow SceneSampler::draw(Hypothesis hyp, std::uint64_t seed,
                              std::uint64_t stream) const {
    if (hyp == Hypothesis::H0) {
        return sample_from_factors(factor0_, factor0_, length_, length_, seed,
                                   stream);
    }
    return draw_with_l1(true_l1_, seed, stream);
}

DataWindow SceneSampler::draw_with_l1(int l1, std::uint64_t seed,
                                      std::uint64_t stream) const {
    if (l1 < 1 || l1 >= length_) {
        throw std::invalid_argument("change point must lie strictly inside the window");
    }
    return sample_from_factors(factor1_, factor2_, l1, length_, seed, stream);
}

DataWindow sample_window(const ClutterScene& scene, Hypothesis hyp,
                         std::uint64_t seed, std::uint64_t stream) {
    return SceneSampler(scene).draw(hyp, seed, stream);
}

}  // namespace ced
