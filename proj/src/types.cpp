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

#include "ced/types.hpp"

#include <cmath>

namespace ced {

const char* to_string(Structure s) {
    switch (s) {
        case Structure::Hermitian: return "hermitian";
        case Structure::Persymmetric: return "persymmetric";
        case Structure::Symmetric: return "symmetric";
        case Structure::Centrosymmetric: return "centrosymmetric";
    }
    return "unknown";
}

Structure structure_from_string(const std::string& name) {
    if (name == "hermitian") return Structure::Hermitian;
    if (name == "persymmetric") return Structure::Persymmetric;
    if (name == "symmetric") return Structure::Symmetric;
    if (name == "centrosymmetric") return Structure::Centrosymmetric;
    throw ConfigError("unknown structure: " + name);
}

DataWindow::DataWindow(Eigen::MatrixXcd z) : z_(std::move(z)) {
    if (z_.rows() < 2 || z_.cols() < 2) {
        throw std::invalid_argument("data window requires N >= 2 and L >= 2");
    }
    if (!z_.allFinite()) {
        throw std::invalid_argument("data window contains non-finite samples");
    }
}

L1Grid::L1Grid(int l1min, int l1max) : l1min_(l1min), l1max_(l1max) {
    if (l1min < 1 || l1max < l1min) {
        throw std::invalid_argument("empty or invalid change-point grid");
    }
}

L1Grid L1Grid::ced_default(int window_length, const RankTriple& r) {
    const int margin = r.max_split_rank();
    return L1Grid(margin + 1, window_length - margin - 1);
}

L1Grid L1Grid::omega(int channels, int window_length) {
    return L1Grid(channels + 1, window_length - channels - 1);
}

}  // namespace ced
