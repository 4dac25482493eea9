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
#include <string>
#include <vector>

#include "ced/types.hpp"

namespace ced {

// Binary data-cube container for multichannel range profiles.
//
//   header: magic "CEDC" | version u16 | N u16 | K u32 | blocks u32 |
//           precision u8 (32 or 64), all little-endian
//   payload: blocks x K x N complex samples, interleaved (re, im)
//            little-endian IEEE floats, bin-by-bin within each block.
struct DataCube {
    std::uint16_t version = 1;
    std::uint8_t precision = 64;            // bits per float component
    std::vector<Eigen::MatrixXcd> blocks;   // each N x K

    int channels() const;
    int bins() const;
    void validate() const;
};

inline constexpr char kCubeMagic[4] = {'C', 'E', 'D', 'C'};
inline constexpr std::size_t kCubeHeaderBytes = 17;

void write_cube(const std::string& path, const DataCube& cube);
DataCube read_cube(const std::string& path);

/// Rounds every sample to the cube's storage precision, making a
/// write-then-read round trip the identity on the in-memory value.
void quantize_to_precision(DataCube& cube);

}  // namespace ced
