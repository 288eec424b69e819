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

#ifndef DPCHAN_BASELINES_HPP
#define DPCHAN_BASELINES_HPP

#include "dpchan/channel.hpp"
#include "dpchan/estimate.hpp"

#include <array>
#include <vector>

namespace dpchan
{
    struct GridSpec
    {
        int fft_size = 128;    // DFT points per dimension (singleton dimensions are not padded)
        bool coherent = false; // average the four snapshots before the DFT instead of summing powers

        void validate(const ArrayGeometry &geometry) const;
    };

    // Real, nonnegative 3-D spectrum; entry (k_r, k_x, k_y) at k_r + n_r (k_x + n_x k_y).
    struct Spectrum3
    {
        std::array<int, 3> size{0, 0, 0};
        std::vector<double> power;

        double operator()(int kr, int kx, int ky) const
        {
            return power[static_cast<std::size_t>(kr + size[0] * (kx + size[1] * ky))];
        }
    };

    // Sum over the four snapshots of |zero-padded 3-D DFT|^2 (or |DFT of their mean|^2 when coherent).
    Spectrum3 combined_spectrum(const std::array<Tensor3, num_pol_blocks> &snapshots, const GridSpec &grid);

    struct PeakBin
    {
        int kr = 0, kx = 0, ky = 0;
        double power = 0.0;
    };

    // Up to K strongest local maxima (cyclic 3x3x3 neighborhood), each at least 2 bins away from
    // every earlier pick in some dimension.
    std::vector<PeakBin> pick_peaks(const Spectrum3 &spectrum, Index k);

    // Grid-search proxy for dictionary-based sparse recovery: peaks of the combined spectrum give the
    // angles, then B is refit by least squares. Missing peaks become zero-gain placeholder paths.
    ParamEstimate fft_peak_pick(const CMatrix &h_ls, const ArrayGeometry &geometry, Index k,
                                const GridSpec &grid = {});

    // Non-parametric baseline: the LS channel itself.
    ParamEstimate ls_baseline(const CMatrix &h_ls, const ArrayGeometry &geometry);
} // namespace dpchan

#endif
