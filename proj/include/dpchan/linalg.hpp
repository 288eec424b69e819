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

#ifndef DPCHAN_LINALG_HPP
#define DPCHAN_LINALG_HPP

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <vector>

namespace dpchan
{
    using cd = std::complex<double>;
    using CMatrix = Eigen::MatrixXcd; // column-major, row index fastest
    using CVector = Eigen::VectorXcd;
    using RVector = Eigen::VectorXd;
    using Index = Eigen::Index;

    // Dense complex 3-way array, first index fastest and third slowest.
    class Tensor3
    {
    public:
        Tensor3() = default;
        Tensor3(Index d1, Index d2, Index d3);
        Tensor3(Index d1, Index d2, Index d3, CVector data);

        Index dim(int mode) const { return dims_[static_cast<std::size_t>(mode)]; }
        std::array<Index, 3> dims() const { return dims_; }
        Index size() const { return data_.size(); }

        cd &operator()(Index i, Index j, Index k) { return data_[i + dims_[0] * (j + dims_[1] * k)]; }
        const cd &operator()(Index i, Index j, Index k) const { return data_[i + dims_[0] * (j + dims_[1] * k)]; }

        const CVector &data() const { return data_; }
        CVector &data() { return data_; }

    private:
        std::array<Index, 3> dims_{0, 0, 0};
        CVector data_;
    };

    // Column-wise Kronecker product: column k of the result is kron(a.col(k), b.col(k)),
    // rows linearized as m * b.rows() + n so the b-index varies fastest.
    CMatrix khatri_rao(const CMatrix &a, const CMatrix &b);

    // Left-associative chain: khatri_rao({a, b, c}) == khatri_rao(khatri_rao(a, b), c).
    CMatrix khatri_rao(const std::vector<CMatrix> &factors);

    CVector vec(const CMatrix &a);
    CMatrix unvec(const CVector &v, Index rows, Index cols);

    struct Subspace
    {
        CMatrix basis;           // rows x k, orthonormal columns
        RVector singular_values; // all singular values, nonincreasing
    };

    // Left singular vectors belonging to the k largest singular values.
    CMatrix truncated_left_subspace(const CMatrix &a, Index k);
    Subspace signal_subspace(const CMatrix &a, Index k);

    // Cutoff below which singular values are treated as zero: sigma_max * max(rows, cols) * eps.
    double rank_tolerance(const RVector &singular_values, Index rows, Index cols);
    Index numerical_rank(const CMatrix &a);

    // Minimum-norm least-squares solution of min ||y - a z||_F (pseudoinverse semantics).
    CMatrix ls_solve(const CMatrix &a, const CMatrix &y);
    CMatrix pinv(const CMatrix &a);

    bool all_finite(const CMatrix &a);

    // ||a - b||_F / ||b||_F, or ||a||_F when b is zero.
    double relative_error(const CMatrix &a, const CMatrix &b);
} // namespace dpchan

#endif
