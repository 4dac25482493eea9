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

#include <span>
#include <vector>

#include "ced/experiments.hpp"
#include "ced/types.hpp"

namespace ced {

/// A full range profile: one or more independent N x K blocks (one snapshot
/// column per range bin) around a cell under test.  Bins are 1-based in all
/// reported coordinates.
struct RangeProfile {
    std::vector<Eigen::MatrixXcd> blocks;
    int cut_index = 1;

    int channels() const;
    int bins() const;  // K
    void validate() const;
};

enum class ScanDirection { Forward, Backward };

const char* to_string(ScanDirection d);

/// Result of one detector evaluation at one window position of one block.
struct EdgeReport {
    ScanDirection direction = ScanDirection::Forward;
    int block = 0;         // 0-based block index
    int window_start = 0;  // first bin covered (1-based)
    bool decision = false;
    int l1hat = 0;          // window-local change point (segment-1 length)
    int absolute_edge = 0;  // window_start + l1hat - 1 (last bin of region 1)
    double statistic = 0.0;
};

struct BlockScanResult {
    int block = 0;
    std::vector<EdgeReport> reports;
    std::optional<int> fused_forward;
    std::optional<int> fused_backward;
};

/// Mode of absolute_edge over declaring reports; ties break toward the
/// smaller bin.  Empty when nothing declared.
std::optional<int> fuse_edges(std::span<const EdgeReport> reports);

/// Slides an L-bin window away from the CUT in both directions, runs the
/// detector at every position of every block, and fuses declaring positions
/// per direction.  Report order is fixed by (block, direction, position).
std::vector<BlockScanResult> scan_profile(const RangeProfile& profile,
                                          int window_length,
                                          const DetectorConfig& det,
                                          const L1Grid& grid, double eta);

}  // namespace ced
