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

#include "dpchan/metrics.hpp"
#include "dpchan/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace dpchan
{
    double nmse(const CMatrix &h_hat, const CMatrix &h)
    {
        if (h_hat.rows() != h.rows() || h_hat.cols() != h.cols())
            throw DimensionError("nmse: shapes differ.");
        const double ref = h.squaredNorm();
        if (ref == 0.0)
            throw std::invalid_argument("nmse: reference channel is zero.");
        return (h_hat - h).squaredNorm() / ref;
    }

    namespace
    {
        // Azimuth difference wrapped to (-pi, pi].
        double azimuth_diff(double a, double b)
        {
            return std::remainder(a - b, 2.0 * std::numbers::pi);
        }

        struct Search
        {
            const std::vector<std::vector<double>> &cost;
            std::vector<Index> current, best;
            std::vector<bool> used;
            double best_cost = std::numeric_limits<double>::infinity();

            void run(std::size_t k, double acc)
            {
                if (acc >= best_cost)
                    return;
                if (k == cost.size())
                {
                    best_cost = acc;
                    best = current;
                    return;
                }
                for (std::size_t j = 0; j < used.size(); ++j)
                {
                    if (used[j])
                        continue;
                    used[j] = true;
                    current[k] = static_cast<Index>(j);
                    run(k + 1, acc + cost[k][j]);
                    used[j] = false;
                }
            }
        };
    } // namespace

    AngleMatch match_angles(const PathParams &truth, const ParamEstimate &est)
    {
        const auto kt = static_cast<std::size_t>(truth.k());
        const auto ke = static_cast<std::size_t>(est.k());
        if (ke < kt)
            throw std::invalid_argument("match_angles: estimate has fewer paths (" + std::to_string(ke) +
                                        ") than the truth (" + std::to_string(kt) + ").");
        const bool use_theta = est.diagnostics.theta_defined;

        std::vector<std::vector<double>> cost(kt, std::vector<double>(ke));
        for (std::size_t i = 0; i < kt; ++i)
            for (std::size_t j = 0; j < ke; ++j)
            {
                const double dt = use_theta ? truth.theta[i] - est.theta[j] : 0.0;
                const double dp = truth.phi[i] - est.phi[j];
                const double dv = azimuth_diff(truth.vartheta[i], est.vartheta[j]);
                cost[i][j] = dt * dt + dp * dp + dv * dv;
            }

        Search s{cost, std::vector<Index>(kt), {}, std::vector<bool>(ke, false)};
        s.run(0, 0.0);

        AngleMatch m;
        m.assignment = s.best;
        m.unmatched_estimates = static_cast<int>(ke - kt);
        double st = 0.0, sp = 0.0, sv = 0.0;
        for (std::size_t i = 0; i < kt; ++i)
        {
            const auto j = static_cast<std::size_t>(m.assignment[i]);
            st += std::pow(truth.theta[i] - est.theta[j], 2);
            sp += std::pow(truth.phi[i] - est.phi[j], 2);
            sv += std::pow(azimuth_diff(truth.vartheta[i], est.vartheta[j]), 2);
        }
        const double n = kt > 0 ? static_cast<double>(kt) : 1.0;
        m.theta_rmse = use_theta ? std::sqrt(st / n) : std::numeric_limits<double>::quiet_NaN();
        m.phi_rmse = std::sqrt(sp / n);
        m.vartheta_rmse = std::sqrt(sv / n);
        return m;
    }
} // namespace dpchan
