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

#include "dpchan/config.hpp"
#include "dpchan/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace dpchan
{
    namespace
    {
        using json = nlohmann::json;

        void reject_unknown(const json &obj, const std::string &where, const std::set<std::string> &allowed)
        {
            if (!obj.is_object())
                throw FormatError(where + ": expected an object");
            for (const auto &[key, _] : obj.items())
                if (!allowed.contains(key))
                    throw FormatError(where + ": unknown key '" + key + "'");
        }

        int get_int(const json &v, const std::string &where)
        {
            if (!v.is_number_integer())
                throw FormatError(where + ": expected an integer");
            return v.get<int>();
        }

        double get_number(const json &v, const std::string &where, bool allow_inf)
        {
            if (v.is_number())
                return v.get<double>();
            if (allow_inf && v.is_string() && v.get<std::string>() == "inf")
                return std::numeric_limits<double>::infinity();
            throw FormatError(where + (allow_inf ? ": expected a number or \"inf\"" : ": expected a number"));
        }

        bool get_bool(const json &v, const std::string &where)
        {
            if (!v.is_boolean())
                throw FormatError(where + ": expected true or false");
            return v.get<bool>();
        }
    } // namespace

    TrialConfig parse_config(const std::string &json_text)
    {
        json root;
        try
        {
            root = json::parse(json_text);
        }
        catch (const json::parse_error &e)
        {
            throw FormatError(std::string("config is not valid JSON: ") + e.what());
        }
        reject_unknown(root, "config", {"geometry", "paths", "assumed_k", "snr_db", "trials", "master_seed", "kappa",
                                        "pilot_length", "methods", "cpd", "fft", "record_runtime", "threads"});

        TrialConfig cfg;
        if (root.contains("geometry"))
        {
            const json &g = root["geometry"];
            reject_unknown(g, "geometry", {"mr", "mx", "my"});
            if (g.contains("mr"))
                cfg.geometry.mr = get_int(g["mr"], "geometry.mr");
            if (g.contains("mx"))
                cfg.geometry.mx = get_int(g["mx"], "geometry.mx");
            if (g.contains("my"))
                cfg.geometry.my = get_int(g["my"], "geometry.my");
        }
        if (root.contains("paths"))
        {
            const json &p = root["paths"];
            reject_unknown(p, "paths", {"mode", "k", "k_min", "k_max"});
            if (p.contains("mode"))
            {
                const std::string mode = p["mode"].is_string() ? p["mode"].get<std::string>() : "";
                if (mode == "fixed")
                    cfg.k_mode = PathCountMode::fixed;
                else if (mode == "uniform")
                    cfg.k_mode = PathCountMode::uniform;
                else
                    throw FormatError("paths.mode: expected \"fixed\" or \"uniform\"");
            }
            if (p.contains("k"))
                cfg.k_fixed = get_int(p["k"], "paths.k");
            if (p.contains("k_min"))
                cfg.k_min = get_int(p["k_min"], "paths.k_min");
            if (p.contains("k_max"))
                cfg.k_max = get_int(p["k_max"], "paths.k_max");
        }
        if (root.contains("assumed_k"))
        {
            const json &a = root["assumed_k"];
            if (a.is_string() && a.get<std::string>() == "known")
                cfg.assumed_k.reset();
            else
                cfg.assumed_k = get_int(a, "assumed_k");
        }
        if (root.contains("snr_db"))
        {
            const json &s = root["snr_db"];
            if (!s.is_array())
                throw FormatError("snr_db: expected a list");
            cfg.snr_grid_db.clear();
            for (std::size_t i = 0; i < s.size(); ++i)
                cfg.snr_grid_db.push_back(get_number(s[i], "snr_db[" + std::to_string(i) + "]", true));
        }
        if (root.contains("trials"))
            cfg.trials = get_int(root["trials"], "trials");
        if (root.contains("master_seed"))
        {
            if (!root["master_seed"].is_number_unsigned())
                throw FormatError("master_seed: expected a nonnegative integer");
            cfg.master_seed = root["master_seed"].get<std::uint64_t>();
        }
        if (root.contains("kappa"))
            cfg.kappa = get_number(root["kappa"], "kappa", true);
        if (root.contains("pilot_length"))
            cfg.pilot_length = get_int(root["pilot_length"], "pilot_length");
        if (root.contains("methods"))
        {
            const json &m = root["methods"];
            if (!m.is_array())
                throw FormatError("methods: expected a list");
            cfg.methods.clear();
            for (const json &v : m)
            {
                if (!v.is_string())
                    throw FormatError("methods: entries must be strings");
                cfg.methods.push_back(parse_method(v.get<std::string>()));
            }
        }
        if (root.contains("cpd"))
        {
            const json &c = root["cpd"];
            reject_unknown(c, "cpd", {"max_iters", "tol", "restarts"});
            if (c.contains("max_iters"))
                cfg.cpd.max_iters = get_int(c["max_iters"], "cpd.max_iters");
            if (c.contains("tol"))
                cfg.cpd.tol = get_number(c["tol"], "cpd.tol", false);
            if (c.contains("restarts"))
                cfg.cpd.restarts = get_int(c["restarts"], "cpd.restarts");
        }
        if (root.contains("fft"))
        {
            const json &f = root["fft"];
            reject_unknown(f, "fft", {"size", "coherent"});
            if (f.contains("size"))
                cfg.grid.fft_size = get_int(f["size"], "fft.size");
            if (f.contains("coherent"))
                cfg.grid.coherent = get_bool(f["coherent"], "fft.coherent");
        }
        if (root.contains("record_runtime"))
            cfg.record_runtime = get_bool(root["record_runtime"], "record_runtime");
        if (root.contains("threads"))
            cfg.threads = get_int(root["threads"], "threads");

        try
        {
            cfg.validate();
        }
        catch (const DimensionError &e)
        {
            throw FormatError(e.what());
        }
        catch (const std::invalid_argument &e)
        {
            throw FormatError(e.what());
        }
        return cfg;
    }

    TrialConfig load_config(const std::string &path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            throw FormatError("cannot open config file '" + path + "'");
        std::ostringstream ss;
        ss << f.rdbuf();
        try
        {
            return parse_config(ss.str());
        }
        catch (const FormatError &e)
        {
            throw FormatError(path + ": " + e.what());
        }
    }
} // namespace dpchan
