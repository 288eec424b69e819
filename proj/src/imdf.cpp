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

#include "dpchan/imdf.hpp"
#include "dpchan/errors.hpp"
#include "dpchan/rng.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace dpchan
{
    namespace
    {
        // Row indices of the folded matrix whose coordinate along `dim` is < P_dim - 1 (first == true)
        // or >= 1 (first == false). Both lists enumerate rows in the same order.
        std::vector<Index> shifted_rows(const FoldingPlan &plan, int dim, bool first)
        {
            const std::array<int, 3> p{plan.pr, plan.px, plan.py};
            std::vector<Index> rows;
            for (int iy = 0; iy < p[2]; ++iy)
                for (int ix = 0; ix < p[1]; ++ix)
                    for (int ir = 0; ir < p[0]; ++ir)
                    {
                        const std::array<int, 3> c{ir, ix, iy};
                        const int lo = first ? 0 : 1;
                        const int hi = first ? p[dim] - 2 : p[dim] - 1;
                        if (c[dim] < lo || c[dim] > hi)
                            continue;
                        rows.push_back(ir + p[0] * (ix + p[1] * iy));
                    }
            return rows;
        }

        CMatrix select_rows(const CMatrix &a, const std::vector<Index> &rows)
        {
            CMatrix out(static_cast<Index>(rows.size()), a.cols());
            for (std::size_t i = 0; i < rows.size(); ++i)
                out.row(static_cast<Index>(i)) = a.row(rows[i]);
            return out;
        }

        double min_eigen_gap(const CVector &ev)
        {
            double gap = std::numeric_limits<double>::infinity();
            for (Index i = 0; i < ev.size(); ++i)
                for (Index j = i + 1; j < ev.size(); ++j)
                    gap = std::min(gap, std::abs(ev[i] - ev[j]));
            return gap;
        }
    } // namespace

    CMatrix fold_snapshot(const Tensor3 &t, const FoldingPlan &plan)
    {
        const ArrayGeometry g = plan.geometry();
        if (t.dim(0) != g.mr || t.dim(1) != g.mx || t.dim(2) != g.my)
            throw DimensionError("fold_snapshot: tensor dimensions do not match the folding plan.");
        CMatrix out(plan.rows(), plan.cols());
        for (int qy = 0; qy < plan.qy; ++qy)
            for (int qx = 0; qx < plan.qx; ++qx)
                for (int qr = 0; qr < plan.qr; ++qr)
                {
                    const Index col = qr + plan.qr * (qx + plan.qx * qy);
                    for (int py = 0; py < plan.py; ++py)
                        for (int px = 0; px < plan.px; ++px)
                            for (int pr = 0; pr < plan.pr; ++pr)
                                out(pr + plan.pr * (px + plan.px * py), col) = t(pr + qr, px + qx, py + qy);
                }
        return out;
    }

    CMatrix forward_backward(const CMatrix &folded, const FoldingPlan &plan)
    {
        if (folded.rows() != plan.rows() || folded.cols() != plan.cols())
            throw DimensionError("forward_backward: matrix shape does not match the folding plan.");
        // Reversing every mixed-radix digit equals reversing the linear index.
        return folded.conjugate().colwise().reverse().rowwise().reverse();
    }

    CMatrix stack_fb(const std::array<Tensor3, num_pol_blocks> &snapshots, const FoldingPlan &plan)
    {
        const Index q = plan.cols();
        CMatrix out(plan.rows(), 2 * num_pol_blocks * q);
        for (int j = 0; j < num_pol_blocks; ++j)
        {
            const CMatrix f = fold_snapshot(snapshots[static_cast<std::size_t>(j)], plan);
            out.middleCols(j * q, q) = f;
            out.middleCols((num_pol_blocks + j) * q, q) = forward_backward(f, plan);
        }
        return out;
    }

    FrequencyTriples imdf_3d(const CMatrix &stacked_fb, const FoldingPlan &plan, Index k, std::uint64_t pairing_seed)
    {
        if (stacked_fb.rows() != plan.rows() || stacked_fb.cols() != plan.snapshot_cols())
            throw DimensionError("imdf_3d: stacked matrix shape does not match the folding plan.");
        if (k < 1)
            throw std::invalid_argument("imdf_3d: K must be >= 1.");
        if (!all_finite(stacked_fb))
            throw NumericError("imdf_3d: input contains NaN or Inf.");

        FrequencyTriples out;
        const Subspace sub = signal_subspace(stacked_fb, k);
        const CMatrix &us = sub.basis;
        if (sub.singular_values.size() > k)
        {
            const double sk = sub.singular_values[k - 1];
            const double sk1 = sub.singular_values[k];
            out.weak_subspace_gap = sk < 10.0 * sk1;
        }

        const ArrayGeometry g = plan.geometry();
        const std::array<int, 3> m{g.mr, g.mx, g.my};
        const std::array<int, 3> p{plan.pr, plan.px, plan.py};
        std::array<CMatrix, 3> psi;
        std::array<bool, 3> active{false, false, false};
        for (int d = 0; d < 3; ++d)
        {
            if (m[d] < 2)
                continue;
            if (p[d] < 2)
                throw RankDeficiencyError("imdf_3d: plan leaves no shift along dimension " + std::to_string(d) +
                                          "; choose a plan with P_d >= 2.");
            const CMatrix u1 = select_rows(us, shifted_rows(plan, d, true));
            const CMatrix u2 = select_rows(us, shifted_rows(plan, d, false));
            if (u1.rows() < k || numerical_rank(u1) < k)
                throw RankDeficiencyError("imdf_3d: selection operator along dimension " + std::to_string(d) +
                                          " has rank below K=" + std::to_string(k) + "; use a different folding plan.");
            psi[d] = ls_solve(u1, u2);
            active[d] = true;
        }

        std::vector<double> *w[3] = {&out.wr, &out.wx, &out.wy};
        bool any = active[0] || active[1] || active[2];
        if (!any)
        {
            for (int d = 0; d < 3; ++d)
                w[d]->assign(static_cast<std::size_t>(k), 0.0);
            return out;
        }

        Rng rng = make_rng(pairing_seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        Eigen::ComplexEigenSolver<CMatrix> eig;
        constexpr int max_draws = 6; // first draw plus up to 5 redraws
        for (int draw = 0; draw < max_draws; ++draw)
        {
            CMatrix combo = CMatrix::Zero(k, k);
            for (int d = 0; d < 3; ++d)
            {
                const double c = gauss(rng);
                if (active[d])
                    combo += c * psi[d];
            }
            eig.compute(combo);
            if (k == 1 || min_eigen_gap(eig.eigenvalues()) >= 1e-8)
                break;
            if (draw == max_draws - 1)
                out.pairing_degenerate = true;
        }

        const CMatrix &t = eig.eigenvectors();
        const Eigen::PartialPivLU<CMatrix> lu(t);
        for (int d = 0; d < 3; ++d)
        {
            w[d]->resize(static_cast<std::size_t>(k), 0.0);
            if (!active[d])
                continue;
            const CMatrix rot = lu.solve(psi[d] * t);
            for (Index i = 0; i < k; ++i)
                (*w[d])[static_cast<std::size_t>(i)] = std::arg(rot(i, i));
        }
        return out;
    }

    ParamEstimate estimate_channel_imdf(const CMatrix &h_ls, const ArrayGeometry &geometry, Index k,
                                        std::uint64_t pairing_seed)
    {
        const StackedChannel stacked = stack_channel(h_ls, geometry);
        const FoldingPlan plan = choose_folding(geometry, static_cast<int>(k));
        const CMatrix fb = stack_fb(snapshot_tensors(stacked), plan);
        const FrequencyTriples freq = imdf_3d(fb, plan, k, pairing_seed);
        ParamEstimate est = finalize_estimate(stacked, frequencies_to_angles(freq.wr, freq.wx, freq.wy, geometry));
        est.diagnostics.weak_subspace_gap = freq.weak_subspace_gap;
        if (freq.weak_subspace_gap)
            est.diagnostics.notes.push_back("weak signal-subspace gap (sigma_K/sigma_K+1 < 10)");
        if (freq.pairing_degenerate)
            est.diagnostics.notes.push_back("pairing combination kept a near-repeated eigenvalue");
        if (est.diagnostics.phi_clipped)
            est.diagnostics.notes.push_back("sin(phi) estimate clipped to 1");
        return est;
    }
} // namespace dpchan
