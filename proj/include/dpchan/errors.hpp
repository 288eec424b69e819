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

#ifndef DPCHAN_ERRORS_HPP
#define DPCHAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dpchan
{
    // Shape or size mismatch between operands.
    class DimensionError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // A least-squares system or selection operator lost column rank.
    class RankDeficiencyError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Requested path count cannot be supported by the array geometry.
    class InfeasibleError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // NaN/Inf on input, or a degenerate numeric object (e.g. zero-norm factor column).
    class NumericError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Malformed configuration or channel file.
    class FormatError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };
} // namespace dpchan

#endif
