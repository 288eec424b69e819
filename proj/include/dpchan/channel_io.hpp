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

#ifndef DPCHAN_CHANNEL_IO_HPP
#define DPCHAN_CHANNEL_IO_HPP

#include "dpchan/channel.hpp"

#include <iosfwd>
#include <string>

namespace dpchan
{
    inline constexpr const char *channel_file_magic = "dp-chanest-v1";

    struct ChannelFile
    {
        ArrayGeometry geometry;
        CMatrix h; // 2M_r x 2M_t
    };

    // Text format: "dp-chanest-v1 <M_r> <M_x> <M_y>" then 2M_r * 2M_t lines "re im",
    // entries of the full channel in column-major order.
    ChannelFile read_channel(std::istream &is);
    ChannelFile read_channel_file(const std::string &path);
    void write_channel(std::ostream &os, const ChannelFile &file);
    void write_channel_file(const std::string &path, const ChannelFile &file);
} // namespace dpchan

#endif
