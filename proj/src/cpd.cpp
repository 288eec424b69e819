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

#include "dpchan/cpd.hpp"
#include "dpchan/errors.hpp"
#include "dpchan/identifiability.hpp"
#include "dpchan/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace dpchan
{
    namespace
    {
        constexpr int num_modes = 4;
        using Factors = std::array<CMatrix, num_modes>;

        // Mode-n unfoldings of the 4-way tensor held column-major in `y`.
        // Columns linearize the remaining modes with the earliest one fastest.
        std::array<CMatrix, num_modes> unfoldings(const CMatrix &y, const std::array<Index, num_modes> &dims)
        {
            std::array<CMatrix, num_modes> out;
            const Index total = y.size();
            for (int n = 0; n < num_modes; ++n)
                out[n].resize(dims[n], total / dims[n]);
            std::array<Index, num_modes> idx{0, 0, 0, 0};
            for (Index lin = 0; lin < total; ++lin)
            {
                Index rem = lin;
                for (int n = 0; n < num_modes; ++n)
                {
                    idx[n] = rem % dims[n];
                    rem /= dims[n];
                }
                for (int n = 0; n < num_modes; ++n)
                {
                    Index col = 0, stride = 1;
                    for (int m = 0; m < num_modes; ++m)
                    {
                        if (m == n)
                            continue;
                        col += idx[m] * stride;
                        stride *= dims[m];
                    }
                    out[n](idx[n], col) = y.data()[lin];
                }
            }
            return out;
        }

        // Khatri-Rao product of every factor except `skip`, in descending mode order.
        CMatrix others_khatri_rao(const Factors &a, int skip)
        {
            std::vector<CMatrix> chain;
            for (int m = num_modes - 1; m >= 0; --m)
                if (m != skip)
                    chain.push_back(a[m]);
            return khatri_rao(chain);
        }

        CMatrix random_factor(Index rows, Index k, Rng &rng)
        {
            std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
            CMatrix f(rows, k);
            for (Index c = 0; c < k; ++c)
                for (Index r = 0; r < rows; ++r)
                {
                    const double re = gauss(rng);
                    const double im = gauss(rng);
                    f(r, c) = cd(re, im);
                }
            return f;
        }

        struct RunResult
        {
            Factors a;
            double objective = 0.0;
            int iterations = 0;
            bool converged = false;
            bool monotone = true;
            std::vector<double> trace;
        };

        RunResult als_run(const std::array<CMatrix, num_modes> &unf, const std::array<Index, num_modes> &dims,
                          Index k, const CpdOptions &opts, Rng &rng)
        {
            RunResult run;
            for (int n = 0; n < num_modes; ++n)
                run.a[n] = random_factor(dims[n], k, rng);

            const CMatrix &y_t = unf[num_modes - 1]; // 4 x I, equals stacked^T
            const double energy = y_t.squaredNorm();
            const double floor = energy * 1e-30;
            auto objective = [&](const Factors &a) {
                return (y_t - a[num_modes - 1] * others_khatri_rao(a, num_modes - 1).transpose()).squaredNorm();
            };

            double prev = objective(run.a);
            if (opts.record_trace)
                run.trace.push_back(prev);

            for (int it = 1; it <= opts.max_iters; ++it)
            {
                for (int n = 0; n < num_modes; ++n)
                {
                    const CMatrix z = others_khatri_rao(run.a, n);
                    CMatrix gram = CMatrix::Ones(k, k);
                    for (int m = 0; m < num_modes; ++m)
                        if (m != n)
                            gram = gram.cwiseProduct(run.a[m].adjoint() * run.a[m]);
                    // A_n conj(G) = T_(n) conj(Z)  <=>  G A_n^T = (T_(n) conj(Z))^T
                    const CMatrix rhs = (unf[n] * z.conjugate()).transpose();
                    run.a[n] = ls_solve(gram, rhs).transpose();

                    if (n < num_modes - 1)
                    {
                        for (Index c = 0; c < k; ++c)
                        {
                            const double nrm = run.a[n].col(c).norm();
                            if (nrm > 0.0)
                            {
                                run.a[n].col(c) /= nrm;
                                run.a[num_modes - 1].col(c) *= nrm;
                            }
                        }
                    }
                }

                const double cur = objective(run.a);
                if (opts.record_trace)
                    run.trace.push_back(cur);
                if (cur > prev + 1e-12 * prev + 1e-24 * energy)
                    run.monotone = false;
                run.iterations = it;
                if (cur <= floor || prev - cur <= opts.tol * prev)
                {
                    run.converged = true;
                    prev = cur;
                    break;
                }
                prev = cur;
            }
            run.objective = prev;
            return run;
        }

        // Phase of sum_m conj(v[m]) v[m+1]; 0 for a single-element vector.
        double phase_step(const CVector &v)
        {
            const Index m = v.size();
            if (m < 2)
                return 0.0;
            const cd s = v.head(m - 1).dot(v.tail(m - 1)); // Eigen's dot conjugates the left operand
            return std::arg(s);
        }
    } // namespace

    CpdFactors cpd_als(const StackedChannel &stacked, Index k, const CpdOptions &opts)
    {
        const ArrayGeometry &g = stacked.geometry;
        g.validate();
        if (k < 1)
            throw std::invalid_argument("cpd_als: K must be >= 1.");
        if (stacked.matrix.rows() != g.mr * g.mt() || stacked.matrix.cols() != num_pol_blocks)
            throw DimensionError("cpd_als: stacked matrix does not match geometry.");
        if (!all_finite(stacked.matrix))
            throw NumericError("cpd_als: input contains NaN or Inf.");
        if (opts.restarts < 1 || opts.max_iters < 1)
            throw std::invalid_argument("cpd_als: restarts and max_iters must be >= 1.");

        CpdFactors out;
        if (k > 1 && !kruskal_check(g, static_cast<int>(k)))
            out.notes.push_back("K=" + std::to_string(k) + " exceeds the Kruskal uniqueness bound of this geometry");

        const double energy = stacked.matrix.squaredNorm();
        if (energy == 0.0)
        {
            out.vr = CMatrix::Ones(g.mr, k);
            out.vx = CMatrix::Ones(g.mx, k);
            out.vy = CMatrix::Ones(g.my, k);
            out.b = CMatrix::Zero(num_pol_blocks, k);
            out.fit_residual = 0.0;
            out.iterations = 0;
            return out;
        }

        const std::array<Index, num_modes> dims{g.mr, g.mx, g.my, num_pol_blocks};
        const auto unf = unfoldings(stacked.matrix, dims);

        RunResult best;
        bool have = false;
        for (int r = 0; r < opts.restarts; ++r)
        {
            Rng rng = make_rng(derive_seed(opts.seed, {static_cast<std::uint64_t>(r)}));
            RunResult run = als_run(unf, dims, k, opts, rng);
            out.monotone = out.monotone && run.monotone;
            if (!have || run.objective < best.objective)
            {
                best = std::move(run);
                out.best_restart = r;
                have = true;
            }
        }

        // Unit first entries; the scale moves into B.
        Factors &a = best.a;
        for (int n = 0; n < num_modes - 1; ++n)
            for (Index c = 0; c < k; ++c)
            {
                const cd lead = a[n](0, c);
                if (std::abs(lead) > 0.0)
                {
                    a[n].col(c) /= lead;
                    a[num_modes - 1].col(c) *= lead;
                }
            }

        out.vr = a[0];
        out.vx = a[1].conjugate();
        out.vy = a[2].conjugate();
        out.b = a[3];
        out.fit_residual = std::sqrt(best.objective / energy);
        out.iterations = best.iterations;
        out.converged = best.converged;
        out.objective_trace = std::move(best.trace);
        if (!out.converged)
            out.notes.push_back("ALS reached max_iters without meeting the stopping rule");
        return out;
    }

    AngleSet extract_angles(const CpdFactors &factors)
    {
        constexpr double pi = std::numbers::pi;
        const Index k = factors.k();
        if (factors.vr.cols() != k || factors.vx.cols() != k || factors.vy.cols() != k)
            throw DimensionError("extract_angles: factor column counts differ.");

        AngleSet out;
        out.theta_defined = factors.vr.rows() >= 2;
        for (Index c = 0; c < k; ++c)
        {
            if (factors.vr.col(c).norm() == 0.0 || factors.vx.col(c).norm() == 0.0 || factors.vy.col(c).norm() == 0.0)
                throw NumericError("extract_angles: factor column of path " + std::to_string(c) + " has zero norm.");

            const double dr = phase_step(factors.vr.col(c));
            const double dx = phase_step(factors.vx.col(c));
            const double dy = phase_step(factors.vy.col(c));

            out.theta.push_back(out.theta_defined ? std::asin(std::clamp(dr / pi, -1.0, 1.0)) : 0.0);
            double s = std::hypot(dx, dy) / pi;
            if (s > 1.0)
            {
                s = 1.0;
                out.phi_clipped = true;
            }
            out.phi.push_back(std::asin(s));
            out.vartheta.push_back(safe_atan2(dy, dx));
        }
        return out;
    }

    ParamEstimate estimate_channel_parafac(const CMatrix &h_ls, const ArrayGeometry &geometry, Index k,
                                           const CpdOptions &opts)
    {
        const StackedChannel stacked = stack_channel(h_ls, geometry);
        const CpdFactors factors = cpd_als(stacked, k, opts);
        ParamEstimate est = finalize_estimate(stacked, extract_angles(factors));
        est.diagnostics.iterations = factors.iterations;
        est.diagnostics.converged = factors.converged;
        est.diagnostics.monotone = factors.monotone;
        est.diagnostics.notes = factors.notes;
        if (est.diagnostics.phi_clipped)
            est.diagnostics.notes.push_back("sin(phi) estimate clipped to 1");
        return est;
    }
} // namespace dpchan
