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

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ced {

using Complex = std::complex<double>;

/// Errors raised while interpreting a run configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Errors raised by malformed or inconsistent input data (files, cubes).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Errors raised by numerically degenerate inputs (non-PSD matrices,
/// zero noise estimates, eigensolver failures).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Assumed structure of the clutter covariance component M.  Selects the
/// scatter-matrix projection applied before eigen-analysis and names the
/// detector variant (H-/P-/S-/C-CED and the matching CCDs).
enum class Structure {
    Hermitian,       // generic complex Hermitian, no projection
    Persymmetric,    // J M* J = M (centrohermitian)
    Symmetric,       // real symmetric
    Centrosymmetric  // real symmetric and J M J = M
};

/// Symmetric and centrosymmetric scatter matrices are real-valued.
constexpr bool is_real_structure(Structure s) {
    return s == Structure::Symmetric || s == Structure::Centrosymmetric;
}

const char* to_string(Structure s);
Structure structure_from_string(const std::string& name);

/// An N x L window of training snapshots; columns are per-range-bin
/// complex data vectors.
class DataWindow {
public:
    /// Takes ownership of the matrix.  Requires N >= 2, L >= 2 and finite
    /// entries.
    explicit DataWindow(Eigen::MatrixXcd z);

    int channels() const { return static_cast<int>(z_.rows()); }  // N
    int length() const { return static_cast<int>(z_.cols()); }    // L
    const Eigen::MatrixXcd& data() const { return z_; }

private:
    Eigen::MatrixXcd z_;
};

/// Assumed ranks of the clutter covariance under H0 (r0) and in the two
/// H1 regions (r1, r2).
struct RankTriple {
    int r0 = 0;
    int r1 = 0;
    int r2 = 0;

    int max_split_rank() const { return std::max(r1, r2); }

    /// All ranks in [0, N).
    bool valid_for_channels(int n) const {
        return r0 >= 0 && r1 >= 0 && r2 >= 0 && r0 < n && r1 < n && r2 < n;
    }
};

/// A scatter matrix (sum of snapshot outer products over a column range),
/// possibly structure-projected.  Real-structure matrices carry a zero
/// imaginary part.
struct ScatterMatrix {
    Eigen::MatrixXcd mat;
    Structure structure = Structure::Hermitian;
    int sample_count = 0;
};

/// Descending eigenvalues of a scatter matrix.
struct EigenSpectrum {
    Eigen::VectorXd gamma;  // gamma(0) >= gamma(1) >= ... >= 0
    int sample_count = 0;
};

/// A maximized log-likelihood and the matching noise-power estimate.
/// `value` is -inf when a modeled eigenvalue is exactly zero (the gating
/// condition discards such points downstream).
struct LikelihoodValue {
    double value = 0.0;
    double noise_estimate = 0.0;
};

/// Contiguous candidate change points {l1min, ..., l1max}.  Values are
/// segment-1 lengths, i.e. the split Z = [z_1..z_L1 | z_L1+1..z_L].
class L1Grid {
public:
    L1Grid(int l1min, int l1max);

    /// Detector-native grid: {max(r1,r2)+1, ..., L-max(r1,r2)-1}.
    static L1Grid ced_default(int window_length, const RankTriple& r);

    /// Shared comparison grid {N+1, ..., L-N-1}; keeps both segment
    /// scatters full rank almost surely, as the CCD requires.
    static L1Grid omega(int channels, int window_length);

    int min() const { return l1min_; }
    int max() const { return l1max_; }
    int size() const { return l1max_ - l1min_ + 1; }
    bool contains(int l1) const { return l1 >= l1min_ && l1 <= l1max_; }

private:
    int l1min_;
    int l1max_;
};

/// Outcome of one detector evaluation on one window.
struct DetectionResult {
    double statistic = 0.0;
    std::optional<int> l1hat;  // argmax over the grid, smallest on ties
    bool decision = false;     // statistic > threshold
    double threshold = 0.0;
    std::vector<std::pair<int, double>> per_l1;  // (L1, candidate) diagnostics
};

}  // namespace ced
