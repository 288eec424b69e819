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

#include "dpchan/baselines.hpp"
#include "dpchan/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dpchan
{
    namespace
    {
        constexpr double pi = std::numbers::pi;

        // n x m matrix W(k, l) = exp(-j 2 pi k l / n)
        CMatrix dft_matrix(int n, int m)
        {
            CMatrix w(n, m);
            for (int l = 0; l < m; ++l)
                for (int k = 0; k < n; ++k)
                    w(k, l) = std::polar(1.0, -2.0 * pi * static_cast<double>((k * l) % n) / n);
            return w;
        }

        // Zero-padded 3-D DFT of `t`, computed one dimension at a time; column-major n_r x n_x x n_y.
        CMatrix dft3(const Tensor3 &t, const std::array<CMatrix, 3> &w)
        {
            const Index mr = t.dim(0), mx = t.dim(1), my = t.dim(2);
            const Index nr = w[0].rows(), nx = w[1].rows();
            const CMatrix g1 = w[0] * Eigen::Map<const CMatrix>(t.data().data(), mr, mx * my); // nr x (mx my)
            CMatrix g2(nr * nx, my);
            for (Index y = 0; y < my; ++y)
            {
                const CMatrix blk = g1.middleCols(y * mx, mx) * w[1].transpose(); // nr x nx
                g2.col(y) = Eigen::Map<const CVector>(blk.data(), nr * nx);
            }
            return g2 * w[2].transpose(); // (nr nx) x ny
        }

        int wrap(int k, int n)
        {
            k %= n;
            return k < 0 ? k + n : k;
        }

        // Cyclic distance in bins.
        int bin_distance(int a, int b, int n)
        {
            const int d = std::abs(a - b) % n;
            return std::min(d, n - d);
        }

        double bin_frequency(int k, int n)
        {
            double w = 2.0 * pi * k / n;
            if (w > pi)
                w -= 2.0 * pi;
            return w;
        }
    } // namespace

    void GridSpec::validate(const ArrayGeometry &geometry) const
    {
        if (fft_size < std::max({geometry.mr, geometry.mx, geometry.my}))
            throw std::invalid_argument("GridSpec: fft_size " + std::to_string(fft_size) +
                                        " is below the largest array dimension.");
    }

    Spectrum3 combined_spectrum(const std::array<Tensor3, num_pol_blocks> &snapshots, const GridSpec &grid)
    {
        const auto dims = snapshots[0].dims();
        const ArrayGeometry g{static_cast<int>(dims[0]), static_cast<int>(dims[1]), static_cast<int>(dims[2])};
        grid.validate(g);

        Spectrum3 spec;
        std::array<CMatrix, 3> w;
        for (int d = 0; d < 3; ++d)
        {
            const int m = static_cast<int>(dims[static_cast<std::size_t>(d)]);
            spec.size[static_cast<std::size_t>(d)] = m > 1 ? grid.fft_size : 1;
            w[static_cast<std::size_t>(d)] = dft_matrix(spec.size[static_cast<std::size_t>(d)], m);
        }
        const std::size_t total = static_cast<std::size_t>(spec.size[0]) * spec.size[1] * spec.size[2];
        spec.power.assign(total, 0.0);

        auto accumulate = [&](const Tensor3 &t) {
            const CMatrix f = dft3(t, w);
            const cd *src = f.data();
            for (std::size_t i = 0; i < total; ++i)
                spec.power[i] += std::norm(src[i]);
        };

        if (grid.coherent)
        {
            Tensor3 mean(dims[0], dims[1], dims[2]);
            for (const Tensor3 &t : snapshots)
                mean.data() += t.data() / static_cast<double>(num_pol_blocks);
            accumulate(mean);
        }
        else
        {
            for (const Tensor3 &t : snapshots)
                accumulate(t);
        }
        return spec;
    }

    std::vector<PeakBin> pick_peaks(const Spectrum3 &spectrum, Index k)
    {
        const auto [nr, nx, ny] = spectrum.size;
        std::vector<PeakBin> candidates;
        for (int ky = 0; ky < ny; ++ky)
            for (int kx = 0; kx < nx; ++kx)
                for (int kr = 0; kr < nr; ++kr)
                {
                    const double v = spectrum(kr, kx, ky);
                    if (!(v > 0.0))
                        continue;
                    bool is_max = true;
                    for (int dy = -1; dy <= 1 && is_max; ++dy)
                        for (int dx = -1; dx <= 1 && is_max; ++dx)
                            for (int dr = -1; dr <= 1 && is_max; ++dr)
                            {
                                if (dr == 0 && dx == 0 && dy == 0)
                                    continue;
                                if (spectrum(wrap(kr + dr, nr), wrap(kx + dx, nx), wrap(ky + dy, ny)) > v)
                                    is_max = false;
                            }
                    if (is_max)
                        candidates.push_back({kr, kx, ky, v});
                }

        std::stable_sort(candidates.begin(), candidates.end(),
                         [](const PeakBin &a, const PeakBin &b) { return a.power > b.power; });

        std::vector<PeakBin> picked;
        for (const PeakBin &c : candidates)
        {
            if (static_cast<Index>(picked.size()) >= k)
                break;
            const bool excluded = std::any_of(picked.begin(), picked.end(), [&](const PeakBin &p) {
                return bin_distance(c.kr, p.kr, nr) <= 1 && bin_distance(c.kx, p.kx, nx) <= 1 &&
                       bin_distance(c.ky, p.ky, ny) <= 1;
            });
            if (!excluded)
                picked.push_back(c);
        }
        return picked;
    }

    ParamEstimate fft_peak_pick(const CMatrix &h_ls, const ArrayGeometry &geometry, Index k, const GridSpec &grid)
    {
        if (k < 1)
            throw std::invalid_argument("fft_peak_pick: K must be >= 1.");
        const StackedChannel stacked = stack_channel(h_ls, geometry);
        const Spectrum3 spec = combined_spectrum(snapshot_tensors(stacked), grid);
        const std::vector<PeakBin> peaks = pick_peaks(spec, k);

        std::vector<double> wr, wx, wy;
        for (const PeakBin &p : peaks)
        {
            wr.push_back(bin_frequency(p.kr, spec.size[0]));
            wx.push_back(bin_frequency(p.kx, spec.size[1]));
            wy.push_back(bin_frequency(p.ky, spec.size[2]));
        }
        ParamEstimate est = finalize_estimate(stacked, frequencies_to_angles(wr, wx, wy, geometry));

        const Index found = est.k();
        if (found < k)
        {
            const auto uk = static_cast<std::size_t>(k);
            est.theta.resize(uk, 0.0);
            est.phi.resize(uk, 0.0);
            est.vartheta.resize(uk, 0.0);
            est.b.conservativeResize(num_pol_blocks, k);
            est.b.rightCols(k - found).setZero();
            est.diagnostics.placeholder_paths = static_cast<int>(k - found);
            est.diagnostics.notes.push_back("only " + std::to_string(found) + " separable spectral peaks for K=" +
                                            std::to_string(k) + "; remaining paths are zero-gain placeholders");
        }
        return est;
    }

    ParamEstimate ls_baseline(const CMatrix &h_ls, const ArrayGeometry &geometry)
    {
        geometry.validate();
        if (h_ls.rows() != 2 * geometry.mr || h_ls.cols() != 2 * geometry.mt())
            throw DimensionError("ls_baseline: channel shape does not match geometry.");
        ParamEstimate est;
        est.b = CMatrix(num_pol_blocks, 0);
        est.h = h_ls;
        est.diagnostics.theta_defined = false;
        return est;
    }
} // namespace dpchan
