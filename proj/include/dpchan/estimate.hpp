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

#ifndef DPCHAN_ESTIMATE_HPP
#define DPCHAN_ESTIMATE_HPP

#include "dpchan/channel.hpp"

#include <string>
#include <vector>

namespace dpchan
{
    struct AngleSet
    {
        std::vector<double> theta;
        std::vector<double> phi;
        std::vector<double> vartheta;
        bool theta_defined = true; // false when M_r = 1; theta is then reported as 0
        bool phi_clipped = false;  // some sin(phi) estimate exceeded 1 and was clipped

        Index k() const { return static_cast<Index>(theta.size()); }
    };

    struct Diagnostics
    {
        double residual = 0.0; // ||stacked - fit||_F / ||stacked||_F after the path-loss refit
        int iterations = 0;
        bool converged = true;
        bool monotone = true;
        bool theta_defined = true;
        bool phi_clipped = false;
        bool weak_subspace_gap = false;
        int placeholder_paths = 0;
        std::vector<std::string> notes;
    };

    struct ParamEstimate
    {
        std::vector<double> theta;
        std::vector<double> phi;
        std::vector<double> vartheta;
        CMatrix b; // 4 x K
        CMatrix h; // 2M_r x 2M_t reconstruction
        Diagnostics diagnostics;

        Index k() const { return static_cast<Index>(theta.size()); }
        PathParams params() const { return {theta, phi, vartheta, b}; }
    };

    // Least-squares path losses for fixed angles: argmin_B ||stacked - (V_y* (.) V_x* (.) V_r) B^T||_F.
    // Throws RankDeficiencyError when the rebuilt manifold loses column rank.
    CMatrix refine_pathloss(const StackedChannel &stacked, const AngleSet &angles);

    // Refit B for `angles`, rebuild H and fill the shared ParamEstimate fields.
    ParamEstimate finalize_estimate(const StackedChannel &stacked, const AngleSet &angles);

    // Angles from the spatial frequencies of the snapshot tensors, whose x/y generators are conjugated:
    //   sin(theta) = w_r/pi, sin(phi)cos(vartheta) = -w_x/pi, sin(phi)sin(vartheta) = -w_y/pi.
    AngleSet frequencies_to_angles(const std::vector<double> &wr, const std::vector<double> &wx,
                                   const std::vector<double> &wy, const ArrayGeometry &geometry);

    // atan2 with atan2(0, 0) := 0 for either sign of zero.
    double safe_atan2(double y, double x);
} // namespace dpchan

#endif
