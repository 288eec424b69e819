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

#ifndef DPCHAN_RNG_HPP
#define DPCHAN_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dpchan
{
    using Rng = std::mt19937_64;

    // splitmix64 finalizer; used to derive independent stream seeds.
    constexpr std::uint64_t mix64(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // Seed for the stream identified by (master, ids...). Distinct id tuples give unrelated seeds.
    inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> ids)
    {
        std::uint64_t h = mix64(master);
        for (std::uint64_t id : ids)
            h = mix64(h ^ mix64(id + 0x632be59bd9b4e019ULL));
        return h;
    }

    inline Rng make_rng(std::uint64_t seed)
    {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
        return Rng(seq);
    }
} // namespace dpchan

#endif
