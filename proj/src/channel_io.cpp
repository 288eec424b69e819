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

#include "dpchan/channel_io.hpp"
#include "dpchan/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace dpchan
{
    ChannelFile read_channel(std::istream &is)
    {
        std::string line;
        if (!std::getline(is, line))
            throw FormatError("channel file is empty");
        std::istringstream header(line);
        std::string magic;
        ChannelFile out;
        if (!(header >> magic) || magic != channel_file_magic)
            throw FormatError("channel file: header must start with '" + std::string(channel_file_magic) + "'");
        if (!(header >> out.geometry.mr >> out.geometry.mx >> out.geometry.my))
            throw FormatError("channel file: header needs three array dimensions M_r M_x M_y");
        std::string extra;
        if (header >> extra)
            throw FormatError("channel file: unexpected token '" + extra + "' in header");
        try
        {
            out.geometry.validate();
        }
        catch (const DimensionError &e)
        {
            throw FormatError(std::string("channel file: ") + e.what());
        }

        const Index rows = 2 * out.geometry.mr, cols = 2 * out.geometry.mt();
        out.h.resize(rows, cols);
        const Index total = rows * cols;
        Index n = 0;
        std::size_t lineno = 1;
        while (std::getline(is, line))
        {
            ++lineno;
            if (line.find_first_not_of(" \t\r") == std::string::npos)
                continue;
            if (n >= total)
                throw FormatError("channel file: more than " + std::to_string(total) + " entries (line " +
                                  std::to_string(lineno) + ")");
            std::istringstream ls(line);
            double re = 0.0, im = 0.0;
            if (!(ls >> re >> im) || (ls >> extra))
                throw FormatError("channel file: line " + std::to_string(lineno) + " is not a 're im' pair");
            out.h.data()[n++] = cd(re, im);
        }
        if (n != total)
            throw FormatError("channel file: expected " + std::to_string(total) + " entries, found " +
                              std::to_string(n));
        return out;
    }

    ChannelFile read_channel_file(const std::string &path)
    {
        std::ifstream f(path);
        if (!f)
            throw FormatError("cannot open channel file '" + path + "'");
        try
        {
            return read_channel(f);
        }
        catch (const FormatError &e)
        {
            throw FormatError(path + ": " + e.what());
        }
    }

    void write_channel(std::ostream &os, const ChannelFile &file)
    {
        const ArrayGeometry &g = file.geometry;
        g.validate();
        if (file.h.rows() != 2 * g.mr || file.h.cols() != 2 * g.mt())
            throw DimensionError("write_channel: matrix shape does not match geometry.");
        os << channel_file_magic << ' ' << g.mr << ' ' << g.mx << ' ' << g.my << '\n';
        char buf[64];
        for (Index i = 0; i < file.h.size(); ++i)
        {
            const cd v = file.h.data()[i];
            std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v.real(), v.imag());
            os << buf;
        }
    }

    void write_channel_file(const std::string &path, const ChannelFile &file)
    {
        std::ofstream f(path);
        if (!f)
            throw std::runtime_error("cannot open '" + path + "' for writing");
        write_channel(f, file);
        if (!f)
            throw std::runtime_error("write to '" + path + "' failed");
    }
} // namespace dpchan
