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

#include "dpchan/linalg.hpp"
#include "dpchan/errors.hpp"

#include <Eigen/SVD>

#include <limits>
#include <string>

namespace dpchan
{
    Tensor3::Tensor3(Index d1, Index d2, Index d3) : dims_{d1, d2, d3}, data_(CVector::Zero(d1 * d2 * d3))
    {
        if (d1 < 1 || d2 < 1 || d3 < 1)
            throw DimensionError("Tensor3 dimensions must be positive.");
    }

    Tensor3::Tensor3(Index d1, Index d2, Index d3, CVector data) : dims_{d1, d2, d3}, data_(std::move(data))
    {
        if (d1 < 1 || d2 < 1 || d3 < 1)
            throw DimensionError("Tensor3 dimensions must be positive.");
        if (data_.size() != d1 * d2 * d3)
            throw DimensionError("Tensor3 data length " + std::to_string(data_.size()) + " does not match dimensions.");
    }

    CMatrix khatri_rao(const CMatrix &a, const CMatrix &b)
    {
        if (a.cols() != b.cols())
            throw DimensionError("khatri_rao: column counts differ (" + std::to_string(a.cols()) + " vs " +
                                 std::to_string(b.cols()) + ").");
        const Index m = a.rows(), n = b.rows();
        CMatrix out(m * n, a.cols());
        for (Index k = 0; k < a.cols(); ++k)
            for (Index i = 0; i < m; ++i)
                out.col(k).segment(i * n, n) = a(i, k) * b.col(k);
        return out;
    }

    CMatrix khatri_rao(const std::vector<CMatrix> &factors)
    {
        if (factors.empty())
            throw DimensionError("khatri_rao: no factors.");
        CMatrix out = factors.front();
        for (std::size_t i = 1; i < factors.size(); ++i)
            out = khatri_rao(out, factors[i]);
        return out;
    }

    CVector vec(const CMatrix &a)
    {
        return Eigen::Map<const CVector>(a.data(), a.size());
    }

    CMatrix unvec(const CVector &v, Index rows, Index cols)
    {
        if (rows * cols != v.size())
            throw DimensionError("unvec: " + std::to_string(v.size()) + " entries cannot fill " +
                                 std::to_string(rows) + "x" + std::to_string(cols) + ".");
        return Eigen::Map<const CMatrix>(v.data(), rows, cols);
    }

    Subspace signal_subspace(const CMatrix &a, Index k)
    {
        const Index min_dim = std::min(a.rows(), a.cols());
        if (k < 0 || k > min_dim)
            throw DimensionError("truncated_left_subspace: K=" + std::to_string(k) + " exceeds min dimension " +
                                 std::to_string(min_dim) + ".");
        Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeThinU);
        return {svd.matrixU().leftCols(k), svd.singularValues()};
    }

    CMatrix truncated_left_subspace(const CMatrix &a, Index k)
    {
        return signal_subspace(a, k).basis;
    }

    double rank_tolerance(const RVector &singular_values, Index rows, Index cols)
    {
        if (singular_values.size() == 0)
            return 0.0;
        return singular_values.maxCoeff() * static_cast<double>(std::max(rows, cols)) *
               std::numeric_limits<double>::epsilon();
    }

    Index numerical_rank(const CMatrix &a)
    {
        if (a.size() == 0)
            return 0;
        Eigen::BDCSVD<CMatrix> svd(a);
        const RVector &s = svd.singularValues();
        const double tol = rank_tolerance(s, a.rows(), a.cols());
        Index r = 0;
        for (Index i = 0; i < s.size(); ++i)
            if (s[i] > tol)
                ++r;
        return r;
    }

    CMatrix ls_solve(const CMatrix &a, const CMatrix &y)
    {
        if (a.rows() != y.rows())
            throw DimensionError("ls_solve: row counts differ.");
        Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const RVector &s = svd.singularValues();
        const double tol = rank_tolerance(s, a.rows(), a.cols());
        CMatrix uty = svd.matrixU().adjoint() * y;
        for (Index i = 0; i < s.size(); ++i)
        {
            if (s[i] > tol)
                uty.row(i) /= s[i];
            else
                uty.row(i).setZero();
        }
        return svd.matrixV() * uty;
    }

    CMatrix pinv(const CMatrix &a)
    {
        return ls_solve(a, CMatrix::Identity(a.rows(), a.rows()));
    }

    bool all_finite(const CMatrix &a)
    {
        return a.allFinite();
    }

    double relative_error(const CMatrix &a, const CMatrix &b)
    {
        const double nb = b.norm();
        const double diff = (a - b).norm();
        return nb > 0.0 ? diff / nb : diff;
    }
} // namespace dpchan
