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

#include <cmath>
#include <limits>

#include "ced/covmodel.hpp"
#include "ced/likelihood.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

using namespace ced;
using Eigen::MatrixXcd;
using Eigen::VectorXd;
using testing::random_psd;
using testing::random_window;

namespace {

EigenSpectrum spectrum(std::initializer_list<double> values, int samples) {
    VectorXd g(static_cast<int>(values.size()));
    int i = 0;
    for (double v : values) g(i++) = v;
    return {g, samples};
}

}  // namespace

TEST_CASE("eigdecompose") {
    SUBCASE("identity has unit spectrum") {
        const ScatterMatrix s{MatrixXcd::Identity(4, 4), Structure::Hermitian, 4};
        const EigenSpectrum spec = eigdecompose(s);
        CHECK((spec.gamma - VectorXd::Ones(4)).norm() < 1e-12);
    }
    SUBCASE("rank-1 outer product") {
        const Eigen::VectorXcd v = steering_vector(25.0, 6);
        const ScatterMatrix s{v * v.adjoint(), Structure::Hermitian, 1};
        const EigenSpectrum spec = eigdecompose(s);
        CHECK(spec.gamma(0) == doctest::Approx(6.0).epsilon(1e-12));
        for (int i = 1; i < 6; ++i) CHECK(spec.gamma(i) <= 1e-12);
    }
    SUBCASE("matches characteristic polynomial roots on a random PSD matrix") {
        const MatrixXcd s = random_psd(4, 6, 77);
        const EigenSpectrum spec =
            eigdecompose({s, Structure::Hermitian, 6});
        // Companion-matrix oracle: roots of det(S - x I).
        Eigen::VectorXcd roots =
            Eigen::MatrixXcd(s).eigenvalues();  // general (non-selfadjoint) path
        VectorXd sorted = roots.real();
        std::sort(sorted.data(), sorted.data() + 4, std::greater<double>());
        for (int i = 0; i < 4; ++i) {
            CHECK(spec.gamma(i) ==
                  doctest::Approx(sorted(i)).epsilon(1e-10));
        }
    }
    SUBCASE("descending order and clamping") {
        const MatrixXcd s = random_psd(5, 2, 78);  // rank deficient
        const EigenSpectrum spec =
            eigdecompose({s, Structure::Hermitian, 2});
        for (int i = 1; i < 5; ++i) CHECK(spec.gamma(i - 1) >= spec.gamma(i));
        CHECK(spec.gamma(4) >= 0.0);
        CHECK(spec.gamma(3) >= 0.0);
    }
}

TEST_CASE("h0 log-likelihood closed form") {
    SUBCASE("flat spectrum: all log terms vanish") {
        const EigenSpectrum spec = spectrum({4, 4}, 4);  // gamma_i = L, N=2
        const LikelihoodValue v = h0_loglik(spec, 0, 4, 2);
        CHECK(v.noise_estimate == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(v.value ==
              doctest::Approx(-8.0 * std::log(M_PI) - 8.0).epsilon(1e-14));
    }
    SUBCASE("worked example gamma = {4, 2, 1}, r0 = 1, L = 5, N = 3") {
        const EigenSpectrum spec = spectrum({4, 2, 1}, 5);
        const LikelihoodValue v = h0_loglik(spec, 1, 5, 3);
        CHECK(v.noise_estimate == doctest::Approx(0.3).epsilon(1e-14));
        const double c = -15.0 * std::log(M_PI);
        const double expected =
            c - 15.0 - 5.0 * (std::log(0.8) + 2.0 * std::log(0.3));
        CHECK(v.value == doctest::Approx(expected).epsilon(1e-14));
        // Independent numeric maximization of the exact likelihood.
        MatrixXcd s = MatrixXcd::Zero(3, 3);
        s(0, 0) = 4.0;
        s(1, 1) = 2.0;
        s(2, 2) = 1.0;
        const double oracle = testing::oracle_h0_max(s, 1, 5);
        CHECK(v.value == doctest::Approx(oracle).epsilon(1e-8));
    }
    SUBCASE("scaling the data shifts the value by -LN log c^2") {
        const DataWindow w = random_window(3, 7, 500);
        const ScatterMatrix s = structured_scatter(w, Structure::Hermitian);
        const double base = h0_loglik(eigdecompose(s), 2, 7, 3).value;
        const double c = 10.0;
        ScatterMatrix scaled{s.mat * (c * c), s.structure, s.sample_count};
        const double shifted = h0_loglik(eigdecompose(scaled), 2, 7, 3).value;
        CHECK(shifted ==
              doctest::Approx(base - 7.0 * 3.0 * std::log(c * c)).epsilon(1e-10));
    }
    SUBCASE("zero modeled eigenvalue gives the -inf sentinel") {
        const EigenSpectrum spec = spectrum({2, 0, 0, 0}, 4);
        // r0 = 2 models the zero eigenvalue; the descending order then forces
        // a zero tail as well, so the sentinel wins over the error path.
        const LikelihoodValue v = h0_loglik(spec, 2, 4, 4);
        CHECK(v.value == -std::numeric_limits<double>::infinity());
        CHECK(v.noise_estimate == 0.0);
    }
    SUBCASE("all-zero tail raises") {
        const EigenSpectrum spec = spectrum({2, 1, 0, 0}, 4);
        CHECK_THROWS_AS(h0_loglik(spec, 2, 4, 4), NumericError);
    }
}

TEST_CASE("h1 log-likelihood closed form") {
    SUBCASE("rank-free case reduces to a pooled-trace expression") {
        const DataWindow w = random_window(4, 10, 501);
        const ScatterMatrix s1 = structured_scatter(w, 0, 6, Structure::Hermitian);
        const ScatterMatrix s2 = structured_scatter(w, 6, 10, Structure::Hermitian);
        const LikelihoodValue v =
            h1_loglik(eigdecompose(s1), eigdecompose(s2), 0, 0, 6, 4, 4);
        const double trace_sum = (s1.mat + s2.mat).real().trace();
        const int L = 10, n = 4;
        const double expected = -L * n * std::log(M_PI) - L * n -
                                L * n * std::log(trace_sum / (L * n));
        CHECK(v.value == doctest::Approx(expected).epsilon(1e-12));
    }
    SUBCASE("proportional split reproduces the homogeneous likelihood") {
        const DataWindow w = random_window(3, 8, 502);
        const ScatterMatrix s = structured_scatter(w, Structure::Hermitian);
        const int l1 = 5, l2 = 3, L = 8;
        ScatterMatrix part1{s.mat * (double(l1) / L), s.structure, l1};
        ScatterMatrix part2{s.mat * (double(l2) / L), s.structure, l2};
        for (int r = 0; r < 3; ++r) {
            const double split =
                h1_loglik(eigdecompose(part1), eigdecompose(part2), r, r, l1,
                          l2, 3)
                    .value;
            const double whole = h0_loglik(eigdecompose(s), r, L, 3).value;
            CHECK(split == doctest::Approx(whole).epsilon(1e-10));
        }
    }
    SUBCASE("scale law matches the homogeneous one") {
        const DataWindow w = random_window(3, 9, 503);
        const auto s1 = structured_scatter(w, 0, 4, Structure::Hermitian);
        const auto s2 = structured_scatter(w, 4, 9, Structure::Hermitian);
        const double base =
            h1_loglik(eigdecompose(s1), eigdecompose(s2), 1, 2, 4, 5, 3).value;
        const double c2 = 1e4;
        ScatterMatrix t1{s1.mat * c2, s1.structure, s1.sample_count};
        ScatterMatrix t2{s2.mat * c2, s2.structure, s2.sample_count};
        const double scaled =
            h1_loglik(eigdecompose(t1), eigdecompose(t2), 1, 2, 4, 5, 3).value;
        CHECK(scaled ==
              doctest::Approx(base - 9.0 * 3.0 * std::log(c2)).epsilon(1e-10));
    }
    SUBCASE("noise estimate feeds the gate") {
        const DataWindow w = random_window(4, 12, 504);
        const auto s1 = structured_scatter(w, 0, 6, Structure::Hermitian);
        const auto s2 = structured_scatter(w, 6, 12, Structure::Hermitian);
        const EigenSpectrum spec1 = eigdecompose(s1);
        const EigenSpectrum spec2 = eigdecompose(s2);
        const LikelihoodValue v = h1_loglik(spec1, spec2, 1, 1, 6, 6, 4);
        const double expected_noise =
            (spec1.gamma.tail(3).sum() + spec2.gamma.tail(3).sum()) /
            (6.0 * 3 + 6.0 * 3);
        CHECK(v.noise_estimate ==
              doctest::Approx(expected_noise).epsilon(1e-12));
    }
}

TEST_CASE("nesting: adding a modeled eigenvalue helps while it clears the noise floor") {
    for (std::uint64_t seed = 600; seed < 606; ++seed) {
        const DataWindow w = random_window(5, 12, seed);
        const EigenSpectrum spec =
            eigdecompose(structured_scatter(w, Structure::Hermitian));
        for (int r0 = 0; r0 + 1 < 5; ++r0) {
            const LikelihoodValue lo = h0_loglik(spec, r0, 12, 5);
            const LikelihoodValue hi = h0_loglik(spec, r0 + 1, 12, 5);
            if (spec.gamma(r0) / 12.0 > hi.noise_estimate) {
                CHECK(hi.value >= lo.value - 1e-10);
            }
        }
    }
}

TEST_CASE("closed forms match the brute-force oracle on small problems") {
    int cases = 0;
    for (std::uint64_t seed = 700; seed < 706; ++seed) {
        const int n = 3 + static_cast<int>(seed % 2);
        const int L = 8;
        const DataWindow w = random_window(n, L, seed);
        const ScatterMatrix s = structured_scatter(w, Structure::Hermitian);
        const EigenSpectrum spec = eigdecompose(s);
        for (int r0 = 0; r0 < n - 1; ++r0) {
            const double closed = h0_loglik(spec, r0, L, n).value;
            const double oracle = testing::oracle_h0_max(s.mat, r0, L);
            CHECK(closed ==
                  doctest::Approx(oracle).epsilon(1e-6));
            ++cases;
        }
    }
    CHECK(cases >= 12);
}
