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

#include "dpchan/estimate.hpp"
#include "dpchan/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dpchan
{
    double safe_atan2(double y, double x)
    {
        if (y == 0.0 && x == 0.0)
            return 0.0;
        return std::atan2(y, x);
    }

    CMatrix refine_pathloss(const StackedChannel &stacked, const AngleSet &angles)
    {
        const ArrayGeometry &g = stacked.geometry;
        if (stacked.matrix.rows() != g.mr * g.mt() || stacked.matrix.cols() != num_pol_blocks)
            throw DimensionError("refine_pathloss: stacked matrix does not match geometry.");
        const Index k = angles.k();
        if (k == 0)
            return CMatrix(num_pol_blocks, 0);

        const CMatrix a = stacked_manifold(steering_matrices(angles.theta, angles.phi, angles.vartheta, g));
        if (a.rows() < k || numerical_rank(a) < k)
            throw RankDeficiencyError("refine_pathloss: rebuilt steering manifold has rank below K=" +
                                      std::to_string(k) + "; reduce K or check for coincident angle estimates.");
        return ls_solve(a, stacked.matrix).transpose();
    }

    ParamEstimate finalize_estimate(const StackedChannel &stacked, const AngleSet &angles)
    {
        ParamEstimate est;
        est.theta = angles.theta;
        est.phi = angles.phi;
        est.vartheta = angles.vartheta;
        est.b = refine_pathloss(stacked, angles);
        est.h = assemble_channel(est.params(), stacked.geometry);
        const CMatrix fit = stack_channel(est.h, stacked.geometry).matrix;
        const double ref = stacked.matrix.norm();
        est.diagnostics.residual = ref > 0.0 ? (stacked.matrix - fit).norm() / ref : 0.0;
        est.diagnostics.theta_defined = angles.theta_defined;
        est.diagnostics.phi_clipped = angles.phi_clipped;
        return est;
    }

    AngleSet frequencies_to_angles(const std::vector<double> &wr, const std::vector<double> &wx,
                                   const std::vector<double> &wy, const ArrayGeometry &geometry)
    {
        constexpr double pi = std::numbers::pi;
        if (wr.size() != wx.size() || wr.size() != wy.size())
            throw DimensionError("frequencies_to_angles: frequency vectors have different lengths.");
        AngleSet out;
        out.theta_defined = geometry.mr >= 2;
        for (std::size_t k = 0; k < wr.size(); ++k)
        {
            const double sr = std::clamp(wr[k] / pi, -1.0, 1.0);
            out.theta.push_back(out.theta_defined ? std::asin(sr) : 0.0);
            const double u = -wx[k] / pi;
            const double v = -wy[k] / pi;
            double s = std::hypot(u, v);
            if (s > 1.0)
            {
                s = 1.0;
                out.phi_clipped = true;
            }
            out.phi.push_back(std::asin(s));
            out.vartheta.push_back(safe_atan2(v, u));
        }
        return out;
    }
} // namespace dpchan
