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

#include "ced/rng.hpp"
#include "ced/types.hpp"

namespace ced::testing {

/// Random N x L window of iid CN(0, 1) entries.
inline DataWindow random_window(int n, int l, std::uint64_t seed,
                                std::uint64_t stream = 0) {
    PhiloxRng rng(seed, stream);
    Eigen::MatrixXcd z(n, l);
    for (int c = 0; c < l; ++c) {
        for (int r = 0; r < n; ++r) z(r, c) = rng.next_cnormal();
    }
    return DataWindow(std::move(z));
}

/// Random Hermitian PSD matrix G G^H from an N x m Gaussian factor.
inline Eigen::MatrixXcd random_psd(int n, int m, std::uint64_t seed) {
    PhiloxRng rng(seed, 0);
    Eigen::MatrixXcd g(n, m);
    for (int c = 0; c < m; ++c) {
        for (int r = 0; r < n; ++r) g(r, c) = rng.next_cnormal();
    }
    return g * g.adjoint();
}

/// Haar-ish random unitary via QR of a Gaussian matrix.
inline Eigen::MatrixXcd random_unitary(int n, std::uint64_t seed) {
    PhiloxRng rng(seed, 1);
    Eigen::MatrixXcd g(n, n);
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) g(r, c) = rng.next_cnormal();
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    return qr.householderQ();
}

}  // namespace ced::testing
