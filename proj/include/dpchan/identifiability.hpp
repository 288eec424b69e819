// SPDX-License-Identifier: Apache-2.0
//
// dpchan: parameter estimation for dual-polarized double-directional MIMO channels
// Copyright (C) 2026 The dpchan authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef DPCHAN_IDENTIFIABILITY_HPP
#define DPCHAN_IDENTIFIABILITY_HPP

#include "dpchan/channel.hpp"

#include <span>
#include <string>
#include <vector>

namespace dpchan
{
    // Per-dimension smoothing split with P_d + Q_d = M_d + 1.
    struct FoldingPlan
    {
        int pr = 1, px = 1, py = 1;
        int qr = 1, qx = 1, qy = 1;
        int f = 0; // path count certified by the plan

        int rows() const { return pr * px * py; }
        int cols() const { return qr * qx * qy; }
        ArrayGeometry geometry() const { return {pr + qr - 1, px + qx - 1, py + qy - 1}; }

        // Rows left after dropping one slice along each dimension: (P_r-1)P_xP_y, P_r(P_x-1)P_y, P_rP_x(P_y-1).
        std::array<int, 3> shift_counts() const;
        int snapshot_cols() const { return 8 * cols(); }

        friend bool operator==(const FoldingPlan &, const FoldingPlan &) = default;
    };

    FoldingPlan make_plan(const ArrayGeometry &geometry, int pr, int px, int py);

    struct BoundReport
    {
        ArrayGeometry geometry;
        int kruskal_max_k = 1;
        int imdf_max_k = 0;
        FoldingPlan best_plan;
    };

    // min(M_r,K) + min(M_x,K) + min(M_y,K) + min(4,K) >= 2K + 3; K = 1 is accepted unconditionally.
    bool kruskal_check(const ArrayGeometry &geometry, int k);
    int kruskal_max_paths(const ArrayGeometry &geometry);

    // Exhaustive search for the largest F with
    //   max((P_r-1)P_xP_y, P_r(P_x-1)P_y, P_rP_x(P_y-1)) >= F  and  8 Q_rQ_xQ_y >= F.
    // Ties go to the larger 8QQQ - F slack, then the lexicographically smallest (P_r, P_x, P_y).
    BoundReport imdf_max_paths(const ArrayGeometry &geometry);

    // Plan usable by the subspace estimator for K paths: every dimension with M_d >= 2 needs its own
    // shift count >= K, and 8 Q_rQ_xQ_y >= K. Maximizes the smallest margin. Throws InfeasibleError.
    FoldingPlan choose_folding(const ArrayGeometry &geometry, int k);

    // True if `plan` satisfies the estimation constraints of choose_folding for K paths.
    bool plan_supports(const FoldingPlan &plan, int k);

    struct BoundScanRow
    {
        int mt = 0;
        int mx = 0;
        int my = 0;
        int imdf_max_k = 0;
        double ratio = 0.0;
    };

    // M_r = 1, each M_t split as the most square M_x x M_y with M_x <= M_y.
    std::vector<BoundScanRow> single_antenna_bound_scan(std::span<const int> mt_list);

    std::string format_bound_report(const BoundReport &report, bool key_value);
} // namespace dpchan

#endif
