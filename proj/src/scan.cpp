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

#include "ced/scan.hpp"

#include <map>

namespace ced {

int RangeProfile::channels() const {
    return blocks.empty() ? 0 : static_cast<int>(blocks.front().rows());
}

int RangeProfile::bins() const {
    return blocks.empty() ? 0 : static_cast<int>(blocks.front().cols());
}

void RangeProfile::validate() const {
    if (blocks.empty()) throw DataError("range profile has no blocks");
    const int n = channels();
    const int k = bins();
    for (const auto& b : blocks) {
        if (b.rows() != n || b.cols() != k) {
            throw DataError("range-profile blocks have inconsistent shape");
        }
    }
    if (cut_index < 1 || cut_index > k) {
        throw DataError("cell under test lies outside the profile");
    }
}

const char* to_string(ScanDirection d) {
    return d == ScanDirection::Forward ? "forward" : "backward";
}

std::optional<int> fuse_edges(std::span<const EdgeReport> reports) {
    std::map<int, int> votes;  // ordered: smallest bin wins ties
    for (const EdgeReport& r : reports) {
        if (r.decision) ++votes[r.absolute_edge];
    }
    std::optional<int> best;
    int best_count = 0;
    for (const auto& [bin, count] : votes) {
        if (count > best_count) {
            best_count = count;
            best = bin;
        }
    }
    return best;
}

std::vector<BlockScanResult> scan_profile(const RangeProfile& profile,
                                          int window_length,
                                          const DetectorConfig& det,
                                          const L1Grid& grid, double eta) {
    profile.validate();
    const int k = profile.bins();
    const int L = window_length;
    if (L < 2 || 2 * L >= k) {
        throw DataError("profile too short for the sliding window: need L < K/2");
    }
    det.validate(profile.channels(), L);

    // Window start positions, 1-based.  The forward window moves up from the
    // bin after the CUT; the backward window moves down from the bin before.
    std::vector<std::pair<ScanDirection, int>> positions;
    for (int s = profile.cut_index + 1; s + L - 1 <= k; ++s) {
        positions.emplace_back(ScanDirection::Forward, s);
    }
    for (int s = profile.cut_index - L; s >= 1; --s) {
        positions.emplace_back(ScanDirection::Backward, s);
    }

    std::vector<BlockScanResult> out;
    out.reserve(profile.blocks.size());
    for (int b = 0; b < static_cast<int>(profile.blocks.size()); ++b) {
        BlockScanResult block_result;
        block_result.block = b;
        for (const auto& [dir, start] : positions) {
            const DataWindow w(profile.blocks[b].middleCols(start - 1, L));
            const DetectionResult r = run_detector(det, w, grid, eta);
            EdgeReport report;
            report.direction = dir;
            report.block = b;
            report.window_start = start;
            report.decision = r.decision;
            report.statistic = r.statistic;
            report.l1hat = r.l1hat.value_or(0);
            report.absolute_edge = r.l1hat ? start + *r.l1hat - 1 : 0;
            block_result.reports.push_back(report);
        }
        const auto is_dir = [&](ScanDirection d) {
            std::vector<EdgeReport> sel;
            for (const auto& r : block_result.reports) {
                if (r.direction == d) sel.push_back(r);
            }
            return sel;
        };
        const auto fwd = is_dir(ScanDirection::Forward);
        const auto bwd = is_dir(ScanDirection::Backward);
        block_result.fused_forward = fuse_edges(fwd);
        block_result.fused_backward = fuse_edges(bwd);
        out.push_back(std::move(block_result));
    }
    return out;
}

}  // namespace ced
