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

#include "dpchan/channel.hpp"
#include "dpchan/errors.hpp"
#include "dpchan/rng.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace dpchan
{
    namespace
    {
        constexpr double pi = std::numbers::pi;

        // Block (row, col) offsets of polarization block j inside the 2M_r x 2M_t channel.
        std::pair<Index, Index> block_offset(int j, const ArrayGeometry &g)
        {
            return {(j / 2) * g.mr, (j % 2) * g.mt()};
        }

        bool angles_coincide(const PathParams &p, Index a, Index b)
        {
            constexpr double tol = 1e-9;
            const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
            return std::abs(p.theta[ua] - p.theta[ub]) < tol && std::abs(p.phi[ua] - p.phi[ub]) < tol &&
                   std::abs(p.vartheta[ua] - p.vartheta[ub]) < tol;
        }
    } // namespace

    void ArrayGeometry::validate() const
    {
        if (mr < 1 || mx < 1 || my < 1)
            throw DimensionError("ArrayGeometry: element counts must be >= 1 (got M_r=" + std::to_string(mr) +
                                 ", M_x=" + std::to_string(mx) + ", M_y=" + std::to_string(my) + ").");
    }

    void PathParams::validate() const
    {
        const Index k = this->k();
        if (static_cast<Index>(phi.size()) != k || static_cast<Index>(vartheta.size()) != k)
            throw DimensionError("PathParams: angle vectors have different lengths.");
        if (b.rows() != num_pol_blocks || b.cols() != k)
            throw DimensionError("PathParams: B must be 4 x K.");
    }

    CVector vandermonde(double spatial_freq, int m)
    {
        CVector v(m);
        for (int i = 0; i < m; ++i)
            v[i] = std::polar(1.0, spatial_freq * i);
        return v;
    }

    CVector steering_ula(double theta, int m)
    {
        return vandermonde(pi * std::sin(theta), m);
    }

    CVector steering_ura(double phi, double vartheta, const ArrayGeometry &geometry)
    {
        const CVector vx = vandermonde(pi * std::sin(phi) * std::cos(vartheta), geometry.mx);
        const CVector vy = vandermonde(pi * std::sin(phi) * std::sin(vartheta), geometry.my);
        return khatri_rao(CMatrix(vy), CMatrix(vx));
    }

    SteeringMatrices steering_matrices(const std::vector<double> &theta, const std::vector<double> &phi,
                                       const std::vector<double> &vartheta, const ArrayGeometry &geometry)
    {
        const auto k = static_cast<Index>(theta.size());
        if (static_cast<Index>(phi.size()) != k || static_cast<Index>(vartheta.size()) != k)
            throw DimensionError("steering_matrices: angle vectors have different lengths.");
        SteeringMatrices sv{CMatrix(geometry.mr, k), CMatrix(geometry.mx, k), CMatrix(geometry.my, k)};
        for (Index i = 0; i < k; ++i)
        {
            const auto u = static_cast<std::size_t>(i);
            sv.vr.col(i) = steering_ula(theta[u], geometry.mr);
            sv.vx.col(i) = vandermonde(pi * std::sin(phi[u]) * std::cos(vartheta[u]), geometry.mx);
            sv.vy.col(i) = vandermonde(pi * std::sin(phi[u]) * std::sin(vartheta[u]), geometry.my);
        }
        return sv;
    }

    CMatrix stacked_manifold(const SteeringMatrices &sv)
    {
        return khatri_rao({sv.vy.conjugate(), sv.vx.conjugate(), sv.vr});
    }

    CMatrix assemble_channel(const PathParams &params, const ArrayGeometry &geometry)
    {
        geometry.validate();
        params.validate();
        const SteeringMatrices sv = steering_matrices(params.theta, params.phi, params.vartheta, geometry);
        const CMatrix vt = khatri_rao(sv.vy, sv.vx);
        CMatrix h(2 * geometry.mr, 2 * geometry.mt());
        for (int j = 0; j < num_pol_blocks; ++j)
        {
            const auto [r0, c0] = block_offset(j, geometry);
            h.block(r0, c0, geometry.mr, geometry.mt()) =
                sv.vr * params.b.row(j).transpose().asDiagonal() * vt.adjoint();
        }
        return h;
    }

    StackedChannel stack_channel(const CMatrix &h, const ArrayGeometry &geometry)
    {
        geometry.validate();
        if (h.rows() != 2 * geometry.mr || h.cols() != 2 * geometry.mt())
            throw DimensionError("stack_channel: expected a " + std::to_string(2 * geometry.mr) + "x" +
                                 std::to_string(2 * geometry.mt()) + " channel, got " + std::to_string(h.rows()) +
                                 "x" + std::to_string(h.cols()) + ".");
        StackedChannel out{CMatrix(geometry.mr * geometry.mt(), num_pol_blocks), geometry};
        for (int j = 0; j < num_pol_blocks; ++j)
        {
            const auto [r0, c0] = block_offset(j, geometry);
            out.matrix.col(j) = vec(h.block(r0, c0, geometry.mr, geometry.mt()));
        }
        return out;
    }

    CMatrix unstack_channel(const StackedChannel &stacked)
    {
        const ArrayGeometry &g = stacked.geometry;
        if (stacked.matrix.rows() != g.mr * g.mt() || stacked.matrix.cols() != num_pol_blocks)
            throw DimensionError("unstack_channel: stacked matrix does not match geometry.");
        CMatrix h(2 * g.mr, 2 * g.mt());
        for (int j = 0; j < num_pol_blocks; ++j)
        {
            const auto [r0, c0] = block_offset(j, g);
            h.block(r0, c0, g.mr, g.mt()) = unvec(stacked.matrix.col(j), g.mr, g.mt());
        }
        return h;
    }

    std::array<Tensor3, num_pol_blocks> snapshot_tensors(const StackedChannel &stacked)
    {
        const ArrayGeometry &g = stacked.geometry;
        if (stacked.matrix.rows() != g.mr * g.mt() || stacked.matrix.cols() != num_pol_blocks)
            throw DimensionError("snapshot_tensors: stacked matrix does not match geometry.");
        std::array<Tensor3, num_pol_blocks> out;
        for (int j = 0; j < num_pol_blocks; ++j)
            out[static_cast<std::size_t>(j)] = Tensor3(g.mr, g.mx, g.my, stacked.matrix.col(j));
        return out;
    }

    PathParams sample_params(std::uint64_t seed, int k, double kappa)
    {
        if (k < 1)
            throw std::invalid_argument("sample_params: K must be >= 1.");
        if (!(kappa >= 0.0))
            throw std::invalid_argument("sample_params: kappa must be >= 0.");

        Rng rng = make_rng(seed);
        std::uniform_real_distribution<double> doa(-pi / 3, pi / 3);
        std::uniform_real_distribution<double> elev(0.0, pi / 2);
        std::uniform_real_distribution<double> azim(-pi / 3, pi / 3);
        std::uniform_real_distribution<double> phase(0.0, 2 * pi);
        std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));

        PathParams p;
        const auto uk = static_cast<std::size_t>(k);
        p.theta.resize(uk);
        p.phi.resize(uk);
        p.vartheta.resize(uk);
        for (std::size_t i = 0; i < uk; ++i)
        {
            bool fresh = false;
            while (!fresh)
            {
                p.theta[i] = doa(rng);
                p.phi[i] = elev(rng);
                p.vartheta[i] = azim(rng);
                fresh = true;
                for (std::size_t j = 0; j < i && fresh; ++j)
                    fresh = !angles_coincide(p, static_cast<Index>(i), static_cast<Index>(j));
            }
        }

        const double los = std::isinf(kappa) ? 1.0 : std::sqrt(kappa / (1.0 + kappa));
        const double nlos = std::isinf(kappa) ? 0.0 : std::sqrt(1.0 / (1.0 + kappa));
        p.b.resize(num_pol_blocks, k);
        for (Index c = 0; c < k; ++c)
        {
            for (Index r = 0; r < num_pol_blocks; ++r)
            {
                const double psi = phase(rng);
                const double gr = gauss(rng);
                const double gi = gauss(rng);
                p.b(r, c) = los * std::polar(1.0, psi) + nlos * cd(gr, gi);
            }
        }
        return p;
    }

    PilotBlock generate_pilots(const ArrayGeometry &geometry, Index n)
    {
        geometry.validate();
        const Index rows = 2 * static_cast<Index>(geometry.mt());
        if (n < rows)
            throw DimensionError("generate_pilots: pilot length N=" + std::to_string(n) + " is below 2M_t=" +
                                 std::to_string(rows) + ".");
        PilotBlock pb{CMatrix(rows, n)};
        for (Index t = 0; t < n; ++t)
            for (Index i = 0; i < rows; ++i)
            {
                // reduce i*t mod n first so the phase argument stays small and exact
                const auto m = static_cast<double>((i * t) % n);
                pb.s(i, t) = std::polar(1.0, -2.0 * pi * m / static_cast<double>(n));
            }
        return pb;
    }

    double noise_variance(const CMatrix &h, const PilotBlock &pilots, double snr_db)
    {
        if (std::isinf(snr_db) && snr_db > 0)
            return 0.0;
        const double snr = std::pow(10.0, snr_db / 10.0);
        const double entries = static_cast<double>(h.rows() * pilots.length());
        const double signal = (h * pilots.s).squaredNorm();
        // zero signal: reference power 1 per entry
        const double per_entry = signal > 0.0 ? signal / entries : 1.0;
        return per_entry / snr;
    }

    CMatrix simulate_rx(const CMatrix &h, const PilotBlock &pilots, double snr_db, std::uint64_t seed)
    {
        if (h.cols() != pilots.s.rows())
            throw DimensionError("simulate_rx: channel has " + std::to_string(h.cols()) + " columns but pilots have " +
                                 std::to_string(pilots.s.rows()) + " rows.");
        CMatrix x = h * pilots.s;
        const double sigma2 = noise_variance(h, pilots, snr_db);
        if (sigma2 == 0.0)
            return x;
        // Draw unit-variance noise and scale, so one seed gives the same noise shape at every SNR.
        Rng rng = make_rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const double scale = std::sqrt(sigma2 / 2.0);
        for (Index c = 0; c < x.cols(); ++c)
            for (Index r = 0; r < x.rows(); ++r)
            {
                const double re = gauss(rng);
                const double im = gauss(rng);
                x(r, c) += scale * cd(re, im);
            }
        return x;
    }

    CMatrix ls_estimate(const CMatrix &x, const PilotBlock &pilots)
    {
        if (x.cols() != pilots.length())
            throw DimensionError("ls_estimate: received block length does not match pilot length.");
        return x * pilots.s.adjoint() / static_cast<double>(pilots.length());
    }
} // namespace dpchan
