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

#include "dpchan/identifiability.hpp"
#include "dpchan/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dpchan
{
    std::array<int, 3> FoldingPlan::shift_counts() const
    {
        return {(pr - 1) * px * py, pr * (px - 1) * py, pr * px * (py - 1)};
    }

    FoldingPlan make_plan(const ArrayGeometry &geometry, int pr, int px, int py)
    {
        geometry.validate();
        if (pr < 1 || pr > geometry.mr || px < 1 || px > geometry.mx || py < 1 || py > geometry.my)
            throw DimensionError("make_plan: each P_d must lie in [1, M_d].");
        FoldingPlan p;
        p.pr = pr;
        p.px = px;
        p.py = py;
        p.qr = geometry.mr + 1 - pr;
        p.qx = geometry.mx + 1 - px;
        p.qy = geometry.my + 1 - py;
        const auto s = p.shift_counts();
        p.f = std::min(*std::max_element(s.begin(), s.end()), 8 * p.cols());
        return p;
    }

    bool kruskal_check(const ArrayGeometry &geometry, int k)
    {
        if (k < 1)
            throw std::invalid_argument("kruskal_check: K must be >= 1.");
        if (k == 1)
            return true;
        const int lhs = std::min(geometry.mr, k) + std::min(geometry.mx, k) + std::min(geometry.my, k) +
                        std::min(num_pol_blocks, k);
        return lhs >= 2 * k + 3;
    }

    int kruskal_max_paths(const ArrayGeometry &geometry)
    {
        geometry.validate();
        // the left side never exceeds M_r + M_x + M_y + 4, so larger K always fail
        const int limit = geometry.mr + geometry.mx + geometry.my + num_pol_blocks;
        int best = 1;
        for (int k = 2; k <= limit; ++k)
            if (kruskal_check(geometry, k))
                best = k;
        return best;
    }

    BoundReport imdf_max_paths(const ArrayGeometry &geometry)
    {
        geometry.validate();
        BoundReport rep;
        rep.geometry = geometry;
        rep.kruskal_max_k = kruskal_max_paths(geometry);

        bool have = false;
        for (int pr = 1; pr <= geometry.mr; ++pr)
            for (int px = 1; px <= geometry.mx; ++px)
                for (int py = 1; py <= geometry.my; ++py)
                {
                    const FoldingPlan cand = make_plan(geometry, pr, px, py);
                    const int slack = 8 * cand.cols() - cand.f;
                    const int best_slack = 8 * rep.best_plan.cols() - rep.best_plan.f;
                    // loop order is lexicographic, so strict comparisons keep the smallest (P_r,P_x,P_y)
                    if (!have || cand.f > rep.best_plan.f || (cand.f == rep.best_plan.f && slack > best_slack))
                    {
                        rep.best_plan = cand;
                        have = true;
                    }
                }
        rep.imdf_max_k = rep.best_plan.f;
        return rep;
    }

    bool plan_supports(const FoldingPlan &plan, int k)
    {
        const ArrayGeometry g = plan.geometry();
        const auto s = plan.shift_counts();
        const std::array<int, 3> dims{g.mr, g.mx, g.my};
        if (8 * plan.cols() < k)
            return false;
        for (std::size_t d = 0; d < 3; ++d)
            if (dims[d] >= 2 && s[d] < k)
                return false;
        return true;
    }

    FoldingPlan choose_folding(const ArrayGeometry &geometry, int k)
    {
        geometry.validate();
        if (k < 1)
            throw std::invalid_argument("choose_folding: K must be >= 1.");
        const std::array<int, 3> dims{geometry.mr, geometry.mx, geometry.my};

        FoldingPlan best;
        int best_margin = std::numeric_limits<int>::min();
        bool found = false;
        for (int pr = 1; pr <= geometry.mr; ++pr)
            for (int px = 1; px <= geometry.mx; ++px)
                for (int py = 1; py <= geometry.my; ++py)
                {
                    const FoldingPlan cand = make_plan(geometry, pr, px, py);
                    if (!plan_supports(cand, k))
                        continue;
                    const auto s = cand.shift_counts();
                    int margin = 8 * cand.cols() - k;
                    for (std::size_t d = 0; d < 3; ++d)
                        if (dims[d] >= 2)
                            margin = std::min(margin, s[d] - k);
                    if (!found || margin > best_margin)
                    {
                        best = cand;
                        best_margin = margin;
                        found = true;
                    }
                }
        if (!found)
        {
            const BoundReport rep = imdf_max_paths(geometry);
            throw InfeasibleError("choose_folding: no folding plan supports K=" + std::to_string(k) + " for geometry (" +
                                  std::to_string(geometry.mr) + "," + std::to_string(geometry.mx) + "," +
                                  std::to_string(geometry.my) + "); identifiability bound is " +
                                  std::to_string(rep.imdf_max_k) + ".");
        }
        return best;
    }

    std::vector<BoundScanRow> single_antenna_bound_scan(std::span<const int> mt_list)
    {
        std::vector<BoundScanRow> rows;
        rows.reserve(mt_list.size());
        for (int mt : mt_list)
        {
            if (mt < 1)
                throw std::invalid_argument("single_antenna_bound_scan: M_t must be >= 1.");
            int mx = static_cast<int>(std::floor(std::sqrt(static_cast<double>(mt))));
            while (mt % mx != 0)
                --mx;
            const ArrayGeometry g{1, mx, mt / mx};
            BoundScanRow row;
            row.mt = mt;
            row.mx = g.mx;
            row.my = g.my;
            row.imdf_max_k = imdf_max_paths(g).imdf_max_k;
            row.ratio = static_cast<double>(row.imdf_max_k) / mt;
            rows.push_back(row);
        }
        return rows;
    }

    std::string format_bound_report(const BoundReport &report, bool key_value)
    {
        const ArrayGeometry &g = report.geometry;
        const FoldingPlan &p = report.best_plan;
        std::ostringstream os;
        os << "geometry        M_r=" << g.mr << "  M_x=" << g.mx << "  M_y=" << g.my << "  M_t=" << g.mt() << '\n'
           << "kruskal_max_K   " << report.kruskal_max_k << '\n'
           << "imdf_max_K      " << report.imdf_max_k << '\n'
           << "best_plan       P=(" << p.pr << "," << p.px << "," << p.py << ")  Q=(" << p.qr << "," << p.qx << ","
           << p.qy << ")  F=" << p.f << '\n';
        if (key_value)
        {
            os << "mr=" << g.mr << '\n'
               << "mx=" << g.mx << '\n'
               << "my=" << g.my << '\n'
               << "kruskal_max_K=" << report.kruskal_max_k << '\n'
               << "imdf_max_K=" << report.imdf_max_k << '\n'
               << "P_r=" << p.pr << '\n'
               << "P_x=" << p.px << '\n'
               << "P_y=" << p.py << '\n'
               << "Q_r=" << p.qr << '\n'
               << "Q_x=" << p.qx << '\n'
               << "Q_y=" << p.qy << '\n'
               << "F=" << p.f << '\n';
        }
        return os.str();
    }
} // namespace dpchan
