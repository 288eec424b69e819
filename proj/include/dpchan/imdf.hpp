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

#ifndef DPCHAN_IMDF_HPP
#define DPCHAN_IMDF_HPP

#include "dpchan/channel.hpp"
#include "dpchan/estimate.hpp"
#include "dpchan/identifiability.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace dpchan
{
    // Paired spatial frequencies in (-pi, pi]; index k is the same path in all three dimensions.
    struct FrequencyTriples
    {
        std::vector<double> wr;
        std::vector<double> wx;
        std::vector<double> wy;
        bool weak_subspace_gap = false; // sigma_K / sigma_{K+1} < 10
        bool pairing_degenerate = false;

        Index k() const { return static_cast<Index>(wr.size()); }
    };

    inline constexpr std::uint64_t default_pairing_seed = 0x1d3f5a7c9b2e4f61ULL;

    // Smoothed Hankel-block matrix of one snapshot tensor:
    //   out(row(p_r,p_x,p_y), col(q_r,q_x,q_y)) = t(p_r+q_r, p_x+q_x, p_y+q_y)   (0-based),
    // both multi-indices linearized r fastest, then x, then y.
    CMatrix fold_snapshot(const Tensor3 &t, const FoldingPlan &plan);

    // J_P conj(folded) J_Q with per-dimension exchange matrices (a full index reversal on each side).
    CMatrix forward_backward(const CMatrix &folded, const FoldingPlan &plan);

    // [F(VV) F(VH) F(HV) F(HH) FB(F(VV)) FB(F(VH)) FB(F(HV)) FB(F(HH))], P x 8Q.
    CMatrix stack_fb(const std::array<Tensor3, num_pol_blocks> &snapshots, const FoldingPlan &plan);

    // Shift-invariance frequency estimation on the K-dimensional left signal subspace, with the three
    // rotation operators paired through the eigenvectors of a random real combination.
    FrequencyTriples imdf_3d(const CMatrix &stacked_fb, const FoldingPlan &plan, Index k,
                             std::uint64_t pairing_seed = default_pairing_seed);

    // Full pipeline: snapshot tensors -> fold/FB stack -> frequencies -> angles -> path-loss refit.
    ParamEstimate estimate_channel_imdf(const CMatrix &h_ls, const ArrayGeometry &geometry, Index k,
                                        std::uint64_t pairing_seed = default_pairing_seed);
} // namespace dpchan

#endif
