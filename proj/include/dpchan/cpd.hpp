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

#ifndef DPCHAN_CPD_HPP
#define DPCHAN_CPD_HPP

#include "dpchan/channel.hpp"
#include "dpchan/estimate.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dpchan
{
    struct CpdOptions
    {
        int max_iters = 500;
        double tol = 1e-10; // stop when the relative objective decrease falls below this
        int restarts = 5;
        std::uint64_t seed = 0;
        bool record_trace = false; // keep the per-sweep objective of the returned restart
    };

    // Factors of the 4-way model  stacked ~ (conj(V_y) (.) conj(V_x) (.) V_r) B^T.
    // V_x and V_y are stored unconjugated, so they estimate the transmit steering matrices directly.
    struct CpdFactors
    {
        CMatrix vr; // M_r x K, unit first entries
        CMatrix vx; // M_x x K, unit first entries
        CMatrix vy; // M_y x K, unit first entries
        CMatrix b;  // 4 x K, carries all column scale
        double fit_residual = 0.0; // ||stacked - model||_F / ||stacked||_F
        int iterations = 0;        // sweeps of the returned restart
        bool converged = true;
        bool monotone = true; // objective never increased, over every sweep of every restart
        int best_restart = 0;
        std::vector<double> objective_trace; // filled when CpdOptions::record_trace is set
        std::vector<std::string> notes;

        Index k() const { return b.cols(); }
    };

    // Alternating least squares with random complex Gaussian restarts; returns the lowest-residual restart.
    CpdFactors cpd_als(const StackedChannel &stacked, Index k, const CpdOptions &opts = {});

    // Closed-form angles from the phase of sum_m conj(v[m]) v[m+1] of each factor column.
    AngleSet extract_angles(const CpdFactors &factors);

    // stack -> ALS -> angle extraction -> path-loss refit -> rebuilt channel.
    ParamEstimate estimate_channel_parafac(const CMatrix &h_ls, const ArrayGeometry &geometry, Index k,
                                           const CpdOptions &opts = {});
} // namespace dpchan

#endif
