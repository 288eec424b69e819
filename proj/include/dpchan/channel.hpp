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

#ifndef DPCHAN_CHANNEL_HPP
#define DPCHAN_CHANNEL_HPP

#include "dpchan/linalg.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

namespace dpchan
{
    // Receive DP-ULA with `mr` elements, transmit DP-URA of `mx` x `my` elements.
    struct ArrayGeometry
    {
        int mr = 1;
        int mx = 1;
        int my = 1;

        int mt() const { return mx * my; }
        void validate() const;
        friend bool operator==(const ArrayGeometry &, const ArrayGeometry &) = default;
    };

    // Polarization block order used for the rows of B and the columns of a StackedChannel.
    enum class PolBlock : int
    {
        VV = 0, // (V_r, V_t), top-left
        VH = 1, // (V_r, H_t), top-right
        HV = 2, // (H_r, V_t), bottom-left
        HH = 3  // (H_r, H_t), bottom-right
    };
    inline constexpr int num_pol_blocks = 4;

    struct PathParams
    {
        std::vector<double> theta;    // DOA, radians
        std::vector<double> phi;      // elevation DOD, radians
        std::vector<double> vartheta; // azimuth DOD, radians
        CMatrix b;                    // 4 x K path-loss matrix

        Index k() const { return static_cast<Index>(theta.size()); }
        void validate() const;
    };

    // (M_y M_x M_r) x 4 matrix; column j is vec of polarization block j, m_r fastest, then m_x, then m_y.
    struct StackedChannel
    {
        CMatrix matrix;
        ArrayGeometry geometry;
    };

    struct PilotBlock
    {
        CMatrix s; // 2M_t x N, S S^H = N I
        Index length() const { return s.cols(); }
    };

    struct SteeringMatrices
    {
        CMatrix vr; // M_r x K
        CMatrix vx; // M_x x K
        CMatrix vy; // M_y x K
    };

    // [v]_m = exp(j pi m sin(theta)), m = 0..M-1
    CVector steering_ula(double theta, int m);

    // Uniform linear progression exp(j * spatial_freq * m), m = 0..M-1.
    CVector vandermonde(double spatial_freq, int m);

    // v_y (x) v_x with [v_x]_l = exp(j pi l sin(phi) cos(vartheta)), [v_y]_l = exp(j pi l sin(phi) sin(vartheta)).
    CVector steering_ura(double phi, double vartheta, const ArrayGeometry &geometry);

    SteeringMatrices steering_matrices(const std::vector<double> &theta, const std::vector<double> &phi,
                                       const std::vector<double> &vartheta, const ArrayGeometry &geometry);

    // conj(V_y) (.) conj(V_x) (.) V_r, the manifold of the stacked channel.
    CMatrix stacked_manifold(const SteeringMatrices &sv);

    // Full 2M_r x 2M_t channel with block (p,q) = V_r diag(beta^(p,q)) V_t^H.
    CMatrix assemble_channel(const PathParams &params, const ArrayGeometry &geometry);

    StackedChannel stack_channel(const CMatrix &h, const ArrayGeometry &geometry);
    CMatrix unstack_channel(const StackedChannel &stacked);

    // Column j of the stacked channel reshaped to an M_r x M_x x M_y tensor.
    std::array<Tensor3, num_pol_blocks> snapshot_tensors(const StackedChannel &stacked);

    inline constexpr double default_kappa = 10.0;

    // Angles uniform on theta in (-pi/3, pi/3), phi in (0, pi/2), vartheta in (-pi/3, pi/3);
    // Rician gains with factor kappa (kappa = +inf gives unit-modulus gains).
    PathParams sample_params(std::uint64_t seed, int k, double kappa = default_kappa);

    // Rows of an N-point DFT matrix: S(i, t) = exp(-j 2 pi i t / N).
    PilotBlock generate_pilots(const ArrayGeometry &geometry, Index n);

    inline constexpr double noiseless_snr = std::numeric_limits<double>::infinity();

    // Noise variance per entry giving 10 log10(||H S||_F^2 / (2 M_r N sigma^2)) = snr_db.
    double noise_variance(const CMatrix &h, const PilotBlock &pilots, double snr_db);

    // X = H S + N with circular Gaussian noise; snr_db = +inf disables noise.
    CMatrix simulate_rx(const CMatrix &h, const PilotBlock &pilots, double snr_db, std::uint64_t seed);

    // H_hat = X S^H / N
    CMatrix ls_estimate(const CMatrix &x, const PilotBlock &pilots);
} // namespace dpchan

#endif
