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
#include "dpchan/metrics.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace dpchan;
using oracle::pi;

namespace
{
    const ArrayGeometry ref{2, 4, 8};

    CpdFactors factors_from(const PathParams &p, const ArrayGeometry &g)
    {
        const SteeringMatrices sv = steering_matrices(p.theta, p.phi, p.vartheta, g);
        CpdFactors f;
        f.vr = sv.vr;
        f.vx = sv.vx;
        f.vy = sv.vy;
        f.b = p.b;
        return f;
    }

    // Well-separated angles: every pair differs by at least 0.2 rad in some coordinate.
    PathParams separated_params(std::uint64_t seed, int k)
    {
        for (std::uint64_t s = seed;; s += 1000)
        {
            const PathParams p = sample_params(s, k);
            bool ok = true;
            for (int i = 0; i < k && ok; ++i)
                for (int j = 0; j < i && ok; ++j)
                {
                    const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j);
                    ok = std::abs(p.theta[a] - p.theta[b]) > 0.2 || std::abs(p.phi[a] - p.phi[b]) > 0.2 ||
                         std::abs(p.vartheta[a] - p.vartheta[b]) > 0.2;
                }
            if (ok)
                return p;
        }
    }
} // namespace

TEST_CASE("cpd_als on a zero tensor")
{
    const CpdFactors f = cpd_als(stack_channel(CMatrix::Zero(4, 64), ref), 1);
    CHECK(f.b.norm() == 0.0);
    CHECK(f.fit_residual == 0.0);
}

TEST_CASE("cpd_als rejects non-finite input")
{
    CMatrix h = assemble_channel(sample_params(1, 2), ref);
    h(0, 0) = cd(std::numeric_limits<double>::infinity(), 0.0);
    CHECK_THROWS_AS(cpd_als(stack_channel(h, ref), 2), NumericError);
}

TEST_CASE("cpd_als recovers a rank-1 tensor")
{
    const PathParams p = sample_params(3, 1);
    const CpdFactors f = cpd_als(stack_channel(assemble_channel(p, ref), ref), 1);
    CHECK(f.fit_residual <= 1e-10);
    // truth steering vectors also have unit first entries, so no residual scale remains
    const CpdFactors t = factors_from(p, ref);
    CHECK(relative_error(f.vr, t.vr) <= 1e-9);
    CHECK(relative_error(f.vx, t.vx) <= 1e-9);
    CHECK(relative_error(f.vy, t.vy) <= 1e-9);
    CHECK(relative_error(f.b, t.b) <= 1e-9);
}

TEST_CASE("cpd_als recovers K = 3 well-separated paths")
{
    for (std::uint64_t s = 0; s < 5; ++s)
    {
        const PathParams p = separated_params(10 + s, 3);
        CpdOptions o;
        o.seed = s;
        const CpdFactors f = cpd_als(stack_channel(assemble_channel(p, ref), ref), 3, o);
        CHECK(f.fit_residual <= 1e-8);
        ParamEstimate est;
        const AngleSet a = extract_angles(f);
        est.theta = a.theta;
        est.phi = a.phi;
        est.vartheta = a.vartheta;
        const AngleMatch m = match_angles(p, est);
        CHECK(m.theta_rmse <= 1e-6);
        CHECK(m.phi_rmse <= 1e-6);
        CHECK(m.vartheta_rmse <= 1e-6);
    }
}

TEST_CASE("ALS objective is nonincreasing at every sweep")
{
    for (std::uint64_t s = 0; s < 12; ++s)
    {
        const int k = 1 + static_cast<int>(s % 6);
        const CMatrix h = assemble_channel(sample_params(40 + s, k), ref);
        const PilotBlock pilots = generate_pilots(ref, 64);
        const CMatrix h_ls = ls_estimate(simulate_rx(h, pilots, 5.0 * static_cast<double>(s % 4), s), pilots);
        CpdOptions o;
        o.seed = s;
        o.record_trace = true;
        o.max_iters = 200;
        const CpdFactors f = cpd_als(stack_channel(h_ls, ref), k, o);
        CHECK(f.monotone);
        REQUIRE(!f.objective_trace.empty());
        for (std::size_t i = 1; i < f.objective_trace.size(); ++i)
            CHECK(f.objective_trace[i] <= f.objective_trace[i - 1] * (1.0 + 1e-12) + 1e-24);
    }
}

TEST_CASE("extract_angles trivial cases")
{
    CpdFactors f;
    f.vr = CMatrix(2, 1);
    f.vr << 1.0, cd(0.0, 1.0);
    f.vx = CMatrix::Ones(4, 1);
    f.vy = CMatrix::Ones(8, 1);
    f.b = CMatrix::Ones(4, 1);
    const AngleSet a = extract_angles(f);
    CHECK(a.theta[0] == doctest::Approx(pi / 6).epsilon(1e-14));
    CHECK(a.phi[0] == 0.0);
    CHECK(a.vartheta[0] == 0.0);

    f.vx.setZero();
    CHECK_THROWS_AS(extract_angles(f), NumericError);
}

TEST_CASE("extract_angles recovers angles from noiseless factors")
{
    for (std::uint64_t s = 0; s < 50; ++s)
    {
        const PathParams p = sample_params(500 + s, 4);
        const AngleSet a = extract_angles(factors_from(p, ref));
        for (std::size_t i = 0; i < 4; ++i)
        {
            CHECK(std::abs(a.theta[i] - p.theta[i]) <= 1e-9);
            CHECK(std::abs(a.phi[i] - p.phi[i]) <= 1e-9);
            if (p.phi[i] > 1e-6)
                CHECK(std::abs(a.vartheta[i] - p.vartheta[i]) <= 1e-9 / std::sin(p.phi[i]) + 1e-12);
        }
    }
}

TEST_CASE("extract_angles is invariant to column scaling")
{
    std::mt19937_64 rng(77);
    for (std::uint64_t s = 0; s < 20; ++s)
    {
        const PathParams p = sample_params(700 + s, 3);
        CpdFactors f = factors_from(p, ref);
        // perturb so the columns are not exact Vandermonde vectors
        f.vr += 0.05 * oracle::random_matrix(2, 3, rng);
        f.vx += 0.05 * oracle::random_matrix(4, 3, rng);
        f.vy += 0.05 * oracle::random_matrix(8, 3, rng);
        const AngleSet a = extract_angles(f);
        CpdFactors g = f;
        const CMatrix scale = oracle::random_matrix(3, 3, rng);
        for (Index c = 0; c < 3; ++c)
        {
            g.vr.col(c) *= scale(0, c);
            g.vx.col(c) *= scale(1, c);
            g.vy.col(c) *= scale(2, c);
        }
        const AngleSet b = extract_angles(g);
        for (std::size_t i = 0; i < 3; ++i)
        {
            CHECK(std::abs(a.theta[i] - b.theta[i]) <= 1e-12);
            CHECK(std::abs(a.phi[i] - b.phi[i]) <= 1e-12);
            CHECK(std::abs(a.vartheta[i] - b.vartheta[i]) <= 1e-12);
        }
    }
}

TEST_CASE("single receive antenna leaves theta undefined")
{
    const ArrayGeometry g{1, 4, 4};
    const PathParams p = sample_params(9, 2);
    const AngleSet a = extract_angles(factors_from(p, g));
    CHECK_FALSE(a.theta_defined);
    CHECK(a.theta[0] == 0.0);
    CHECK(std::abs(a.phi[0] - p.phi[0]) <= 1e-9);
}

TEST_CASE("refine_pathloss")
{
    const PathParams p = sample_params(12, 4);
    const StackedChannel st = stack_channel(assemble_channel(p, ref), ref);
    AngleSet truth{p.theta, p.phi, p.vartheta};
    CHECK(relative_error(refine_pathloss(st, truth), p.b) <= 1e-10);

    PathParams one{{0.0}, {0.0}, {0.0}, CMatrix::Zero(4, 1)};
    one.b(0, 0) = 1.0;
    const CMatrix b1 = refine_pathloss(stack_channel(assemble_channel(one, ref), ref), {{0.0}, {0.0}, {0.0}});
    CHECK(relative_error(b1, one.b) <= 1e-14);

    AngleSet dup{{0.1, 0.1}, {0.4, 0.4}, {0.2, 0.2}};
    CHECK_THROWS_AS(refine_pathloss(st, dup), RankDeficiencyError);
}

TEST_CASE("refine_pathloss is stable under small angle errors")
{
    const PilotBlock pilots = generate_pilots(ref, 64);
    for (std::uint64_t s = 0; s < 20; ++s)
    {
        const PathParams p = separated_params(900 + s, 3);
        const CMatrix h = assemble_channel(p, ref);
        const CMatrix h_ls = ls_estimate(simulate_rx(h, pilots, 30.0, s), pilots);
        AngleSet a{p.theta, p.phi, p.vartheta};
        for (std::size_t i = 0; i < 3; ++i)
        {
            a.theta[i] += 1e-3;
            a.phi[i] -= 1e-3;
            a.vartheta[i] += 1e-3;
        }
        CHECK(relative_error(refine_pathloss(stack_channel(h_ls, ref), a), p.b) < 5e-2);
    }
}

TEST_CASE("estimate_channel_parafac noiseless")
{
    const PathParams p1 = sample_params(31, 1);
    const ParamEstimate e1 = estimate_channel_parafac(assemble_channel(p1, ref), ref, 1);
    CHECK(std::abs(e1.theta[0] - p1.theta[0]) <= 1e-9);
    CHECK(std::abs(e1.phi[0] - p1.phi[0]) <= 1e-9);
    CHECK(std::abs(e1.vartheta[0] - p1.vartheta[0]) <= 1e-9);
    CHECK(relative_error(e1.b, p1.b) <= 1e-9);

    const PathParams p3 = separated_params(32, 3);
    const CMatrix h3 = assemble_channel(p3, ref);
    CHECK(nmse(estimate_channel_parafac(h3, ref, 3).h, h3) <= 1e-10);
}

TEST_CASE("noiseless recovery up to K = 6 with restarts")
{
    int ok = 0, total = 0;
    for (int k = 4; k <= 6; ++k)
        for (std::uint64_t s = 0; s < 10; ++s)
        {
            const CMatrix h = assemble_channel(sample_params(2000 + 17 * s + static_cast<std::uint64_t>(k), k), ref);
            CpdOptions o;
            o.seed = s;
            ok += nmse(estimate_channel_parafac(h, ref, k, o).h, h) <= 1e-8;
            ++total;
        }
    CHECK(ok >= (95 * total + 99) / 100);
}

TEST_CASE("PARAFAC beats LS at 20 dB")
{
    const PilotBlock pilots = generate_pilots(ref, 64);
    int better = 0;
    for (std::uint64_t s = 0; s < 100; ++s)
    {
        const int k = 1 + static_cast<int>(s % 6);
        const CMatrix h = assemble_channel(sample_params(4000 + s, k), ref);
        const CMatrix h_ls = ls_estimate(simulate_rx(h, pilots, 20.0, 8000 + s), pilots);
        CpdOptions o;
        o.seed = s;
        better += nmse(estimate_channel_parafac(h_ls, ref, k, o).h, h) < nmse(h_ls, h);
    }
    CHECK(better >= 90);
}
