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

#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>

#include "ced/covmodel.hpp"
#include "test_support.hpp"

using namespace ced;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using testing::random_psd;
using testing::random_window;

namespace {

constexpr std::array<Structure, 4> kAllStructures = {
    Structure::Hermitian, Structure::Persymmetric, Structure::Symmetric,
    Structure::Centrosymmetric};

const std::vector<double> kPaperAngles = {-20.0, -10.0, 10.0, 20.0};

ClutterScene paper_scene(double cpr_db) {
    ClutterScene scene;
    scene.channels = 9;
    scene.window_length = 27;
    scene.sigma_n2 = 1.0;
    scene.cnr_db = 25.0;
    scene.cpr_db = cpr_db;
    scene.theta0_deg = kPaperAngles;
    scene.theta1_deg = kPaperAngles;
    scene.theta2_deg = kPaperAngles;
    scene.true_l1 = 11;
    return scene;
}

MatrixXcd anti_transpose_conj(const MatrixXcd& a) {
    return a.conjugate().rowwise().reverse().colwise().reverse();
}

}  // namespace

TEST_CASE("steering vector basics") {
    SUBCASE("boresight gives all ones") {
        for (int n : {2, 3, 5, 8, 9}) {
            const VectorXcd v = steering_vector(0.0, n);
            CHECK((v - VectorXcd::Ones(n)).norm() == doctest::Approx(0.0));
        }
    }
    SUBCASE("N=3 at 30 degrees") {
        const VectorXcd v = steering_vector(30.0, 3);
        CHECK(std::abs(v(0) - Complex{0, -1}) < 1e-12);
        CHECK(std::abs(v(1) - Complex{1, 0}) < 1e-12);
        CHECK(std::abs(v(2) - Complex{0, 1}) < 1e-12);
    }
    SUBCASE("unit modulus and conjugate symmetry") {
        for (int n : {2, 4, 7, 9}) {
            for (double theta : {-63.0, -7.5, 12.0, 41.0}) {
                const VectorXcd v = steering_vector(theta, n);
                CHECK(v.squaredNorm() == doctest::Approx(n).epsilon(1e-12));
                // J v* = v
                const VectorXcd flipped = v.conjugate().reverse();
                CHECK((flipped - v).norm() < 1e-12);
            }
        }
    }
}

TEST_CASE("clutter covariance construction") {
    SUBCASE("four distinct angles give rank 4 at N=9") {
        const MatrixXcd m = clutter_covariance(kPaperAngles, 2.0, 9);
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m);
        int rank = 0;
        const double top = es.eigenvalues().maxCoeff();
        for (int i = 0; i < 9; ++i) {
            if (es.eigenvalues()(i) > 1e-8 * top) ++rank;
        }
        CHECK(rank == 4);
    }
    SUBCASE("single angle is the scaled steering outer product") {
        const double power = 3.5;
        const std::vector<double> angles = {17.0};
        const MatrixXcd m = clutter_covariance(angles, power, 5);
        const VectorXcd v = steering_vector(17.0, 5);
        CHECK((m - power * v * v.adjoint()).norm() < 1e-12);
    }
    SUBCASE("angle set symmetric about zero gives a real centrosymmetric matrix") {
        const MatrixXcd m = clutter_covariance(kPaperAngles, 1.0, 9);
        CHECK(m.imag().norm() < 1e-10 * m.real().norm());
        const MatrixXd re = m.real();
        const MatrixXd flipped = re.rowwise().reverse().colwise().reverse();
        CHECK((re - flipped).norm() < 1e-10 * re.norm());
    }
    SUBCASE("preconditions") {
        const std::vector<double> too_many = {1, 2, 3};
        CHECK_THROWS_AS(clutter_covariance(too_many, 1.0, 3),
                        std::invalid_argument);
        CHECK_THROWS_AS(clutter_covariance(std::vector<double>{}, 1.0, 3),
                        std::invalid_argument);
        CHECK_THROWS_AS(clutter_covariance(std::vector<double>{4.0}, -1.0, 3),
                        std::invalid_argument);
    }
}

TEST_CASE("structured scatter matches hand-computed examples") {
    MatrixXcd z(2, 2);
    z.col(0) << Complex{1, 0}, Complex{0, 1};
    z.col(1) << Complex{0, 0}, Complex{0, 0};
    // Only column 0 in range; N=2 requires L>=2, so pad with a zero column.
    const DataWindow w(z);

    SUBCASE("hermitian rank-1 outer product") {
        const ScatterMatrix s = structured_scatter(w, 0, 1, Structure::Hermitian);
        CHECK(s.sample_count == 1);
        CHECK(std::abs(s.mat(0, 0) - Complex{1, 0}) < 1e-15);
        CHECK(std::abs(s.mat(0, 1) - Complex{0, -1}) < 1e-15);
        CHECK(std::abs(s.mat(1, 0) - Complex{0, 1}) < 1e-15);
        CHECK(std::abs(s.mat(1, 1) - Complex{1, 0}) < 1e-15);
    }
    SUBCASE("symmetric projection takes the real part") {
        const ScatterMatrix s = structured_scatter(w, 0, 1, Structure::Symmetric);
        CHECK((s.mat - MatrixXcd::Identity(2, 2)).norm() < 1e-15);
    }
    SUBCASE("empty range rejected") {
        CHECK_THROWS_AS(structured_scatter(w, 1, 1, Structure::Hermitian),
                        std::invalid_argument);
    }
}

TEST_CASE("persymmetric projection on a fixed matrix") {
    MatrixXcd s(2, 2);
    s << Complex{2, 0}, Complex{1, 1}, Complex{1, -1}, Complex{4, 0};
    const MatrixXcd p = project_structure(s, Structure::Persymmetric);
    MatrixXcd expected(2, 2);
    expected << Complex{3, 0}, Complex{1, 1}, Complex{1, -1}, Complex{3, 0};
    CHECK((p - expected).norm() < 1e-14);
}

TEST_CASE("projection properties on random scatters") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const int n = 4 + static_cast<int>(seed % 3);
        const MatrixXcd s = random_psd(n, n + 2, 100 + seed);
        for (const Structure structure : kAllStructures) {
            const MatrixXcd p = project_structure(s, structure);
            CAPTURE(to_string(structure));

            // Idempotence.
            CHECK((project_structure(p, structure) - p).norm() <=
                  1e-12 * p.norm());

            // Trace preservation.
            CHECK(p.real().trace() ==
                  doctest::Approx(s.real().trace()).epsilon(1e-12));
            CHECK(std::abs(p.imag().trace()) < 1e-12 * s.real().trace());

            // PSD preservation.
            const ScatterMatrix sm{p, structure, n + 2};
            Eigen::SelfAdjointEigenSolver<MatrixXcd> es(p);
            CHECK(es.eigenvalues().minCoeff() >= -1e-10 * p.norm());

            // Structural invariants.
            CHECK((p - p.adjoint()).norm() < 1e-12 * p.norm());
            if (structure == Structure::Persymmetric) {
                CHECK((anti_transpose_conj(p) - p).norm() < 1e-12 * p.norm());
            }
            if (is_real_structure(structure)) {
                CHECK(p.imag().norm() < 1e-14 * p.real().norm());
            }
            if (structure == Structure::Centrosymmetric) {
                const MatrixXd re = p.real();
                const MatrixXd flipped =
                    re.rowwise().reverse().colwise().reverse();
                CHECK((re - flipped).norm() < 1e-12 * re.norm());
            }
        }
    }
}

TEST_CASE("trace identity against structured positive-definite matrices") {
    // Tr[A^-1 S] must equal Tr[A^-1 S_h] whenever A has the matching
    // structure.
    const int n = 5;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const MatrixXcd s = random_psd(n, n + 3, 200 + seed);
        for (const Structure structure : kAllStructures) {
            const MatrixXcd base = random_psd(n, n, 300 + seed);
            const MatrixXcd a = project_structure(base, structure) +
                                0.5 * MatrixXcd::Identity(n, n);
            const MatrixXcd sh = project_structure(s, structure);
            const Complex lhs = (a.inverse() * s).trace();
            const Complex rhs = (a.inverse() * sh).trace();
            CAPTURE(to_string(structure));
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(lhs));
        }
    }
}

TEST_CASE("window sampling") {
    SUBCASE("identical seed reproduces bit-identical data") {
        const ClutterScene scene = paper_scene(10.0);
        const DataWindow a = sample_window(scene, Hypothesis::H1, 99, 3);
        const DataWindow b = sample_window(scene, Hypothesis::H1, 99, 3);
        CHECK((a.data().array() == b.data().array()).all());
        const DataWindow c = sample_window(scene, Hypothesis::H1, 99, 4);
        CHECK_FALSE((a.data().array() == c.data().array()).all());
    }

    SUBCASE("zero clutter reduces to white noise") {
        ClutterScene scene = paper_scene(0.0);
        scene.channels = 4;
        scene.theta0_deg = {5.0};
        scene.theta1_deg = scene.theta0_deg;
        scene.theta2_deg = scene.theta0_deg;
        scene.window_length = 20000;
        scene.cnr_db = -300.0;  // clutter power underflows to zero
        scene.true_l1 = 10;
        const DataWindow w = sample_window(scene, Hypothesis::H0, 5);
        const MatrixXcd cov = w.data() * w.data().adjoint() / w.length();
        CHECK((cov - MatrixXcd::Identity(4, 4)).norm() <
              0.05 * std::sqrt(4.0));
    }

    SUBCASE("paper scene shows four dominant eigenvalues") {
        ClutterScene scene = paper_scene(0.0);
        scene.window_length = 4000;
        const DataWindow w = sample_window(scene, Hypothesis::H0, 7);
        const MatrixXcd cov = w.data() * w.data().adjoint() / w.length();
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(cov);
        const Eigen::VectorXd ev = es.eigenvalues().reverse();
        // CNR 25 dB split across 4 directions: clutter eigenvalues are a
        // few hundred against unit noise.
        CHECK(ev(3) > 50.0);
        CHECK(ev(4) < 3.0);
    }

    SUBCASE("sample covariance converges with window length") {
        ClutterScene scene = paper_scene(0.0);
        scene.channels = 5;
        scene.theta0_deg = {-15.0, 15.0};
        scene.theta1_deg = scene.theta0_deg;
        scene.theta2_deg = scene.theta0_deg;
        scene.cnr_db = 10.0;
        scene.true_l1 = 2;
        const MatrixXcd truth = scene.covariance(0);

        auto error_at = [&](int length) {
            scene.window_length = length;
            const DataWindow w = sample_window(scene, Hypothesis::H0, 11);
            const ScatterMatrix s =
                structured_scatter(w, Structure::Hermitian);
            return (s.mat / length - truth).norm() / truth.norm();
        };
        const double coarse = error_at(100);
        const double fine = error_at(10000);
        CHECK(fine < coarse);
        CHECK(fine < 0.05);
    }

    SUBCASE("invalid scenes are rejected") {
        ClutterScene scene = paper_scene(0.0);
        scene.sigma_n2 = 0.0;
        CHECK_THROWS_AS(scene.validate(), ConfigError);
        scene = paper_scene(0.0);
        scene.true_l1 = 27;
        CHECK_THROWS_AS(scene.validate(), ConfigError);
        scene = paper_scene(0.0);
        scene.theta1_deg.resize(9, 1.0);
        CHECK_THROWS_AS(scene.validate(), ConfigError);
    }
}

TEST_CASE("scene power bookkeeping") {
    const ClutterScene scene = paper_scene(15.0);
    CHECK(scene.clutter_power0() ==
          doctest::Approx(std::pow(10.0, 2.5)).epsilon(1e-12));
    CHECK(scene.clutter_power1() == scene.clutter_power0());
    CHECK(scene.clutter_power2() ==
          doctest::Approx(scene.clutter_power1() * std::pow(10.0, 1.5))
              .epsilon(1e-12));
}
