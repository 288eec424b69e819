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

#ifndef DPCHAN_METRICS_HPP
#define DPCHAN_METRICS_HPP

#include "dpchan/channel.hpp"
#include "dpchan/estimate.hpp"

#include <vector>

namespace dpchan
{
    // ||h_hat - h||_F^2 / ||h||_F^2; throws for zero h or mismatched shapes.
    double nmse(const CMatrix &h_hat, const CMatrix &h);

    struct AngleMatch
    {
        std::vector<Index> assignment; // truth path k -> estimated path index
        double theta_rmse = 0.0;       // NaN when the estimate has no defined DOA (M_r = 1)
        double phi_rmse = 0.0;
        double vartheta_rmse = 0.0;
        int unmatched_estimates = 0; // surplus estimated paths left out of the RMSE
    };

    // Minimum total squared angle difference over all injective truth -> estimate assignments.
    AngleMatch match_angles(const PathParams &truth, const ParamEstimate &est);
} // namespace dpchan

#endif
