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

#include "dpchan/harness.hpp"
#include "dpchan/errors.hpp"
#include "dpchan/imdf.hpp"
#include "dpchan/metrics.hpp"
#include "dpchan/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace dpchan
{
    namespace
    {
        enum Stream : std::uint64_t
        {
            stream_k = 0,
            stream_params = 1,
            stream_noise = 2,
            stream_als = 3
        };

        std::string format_double(double v)
        {
            if (std::isnan(v))
                return "nan";
            if (std::isinf(v))
                return v > 0 ? "inf" : "-inf";
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }

        ParamEstimate run_method(Method m, const CMatrix &h_ls, const TrialConfig &cfg, Index k, std::uint64_t als_seed)
        {
            switch (m)
            {
            case Method::parafac:
            {
                CpdOptions opts = cfg.cpd;
                opts.seed = als_seed;
                return estimate_channel_parafac(h_ls, cfg.geometry, k, opts);
            }
            case Method::imdf:
                return estimate_channel_imdf(h_ls, cfg.geometry, k);
            case Method::fft:
                return fft_peak_pick(h_ls, cfg.geometry, k, cfg.grid);
            case Method::ls:
                return ls_baseline(h_ls, cfg.geometry);
            }
            throw std::logic_error("unknown method");
        }

        // Mean of the finite entries, NaN when there are none.
        double finite_mean(const std::vector<double> &v)
        {
            double s = 0.0;
            int n = 0;
            for (double x : v)
                if (std::isfinite(x))
                {
                    s += x;
                    ++n;
                }
            return n > 0 ? s / n : std::numeric_limits<double>::quiet_NaN();
        }
    } // namespace

    std::string to_string(Method m)
    {
        switch (m)
        {
        case Method::parafac:
            return "parafac";
        case Method::imdf:
            return "imdf";
        case Method::fft:
            return "fft";
        case Method::ls:
            return "ls";
        }
        return "?";
    }

    Method parse_method(const std::string &name)
    {
        for (Method m : {Method::parafac, Method::imdf, Method::fft, Method::ls})
            if (to_string(m) == name)
                return m;
        throw FormatError("unknown method '" + name + "' (expected parafac, imdf, fft or ls)");
    }

    void TrialConfig::validate() const
    {
        geometry.validate();
        if (trials < 1)
            throw FormatError("trials must be >= 1");
        if (snr_grid_db.empty())
            throw FormatError("snr grid must not be empty");
        if (k_mode == PathCountMode::fixed && k_fixed < 1)
            throw FormatError("fixed K must be >= 1");
        if (k_mode == PathCountMode::uniform && (k_min < 1 || k_max < k_min))
            throw FormatError("uniform K range must satisfy 1 <= k_min <= k_max");
        if (assumed_k && *assumed_k < 1)
            throw FormatError("assumed K must be >= 1");
        if (pilot_length != 0 && pilot_length < 2 * geometry.mt())
            throw FormatError("pilot_length must be 0 or >= 2 M_t");
        if (methods.empty())
            throw FormatError("at least one method is required");
        if (!(kappa >= 0.0))
            throw FormatError("kappa must be >= 0");
        grid.validate(geometry);
    }

    std::uint64_t matrix_digest(const CMatrix &m)
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        auto mix = [&h](const void *p, std::size_t n) {
            const auto *b = static_cast<const unsigned char *>(p);
            for (std::size_t i = 0; i < n; ++i)
            {
                h ^= b[i];
                h *= 0x100000001b3ULL;
            }
        };
        const Index r = m.rows(), c = m.cols();
        mix(&r, sizeof r);
        mix(&c, sizeof c);
        mix(m.data(), sizeof(cd) * static_cast<std::size_t>(m.size()));
        return h;
    }

    TrialResult run_trial(const TrialConfig &cfg, int trial_index, double snr_db)
    {
        const auto idx = static_cast<std::uint64_t>(trial_index);
        TrialResult res;
        res.trial_index = trial_index;
        res.snr_db = snr_db;

        if (cfg.k_mode == PathCountMode::fixed)
            res.true_k = cfg.k_fixed;
        else
        {
            Rng rng = make_rng(derive_seed(cfg.master_seed, {idx, stream_k}));
            res.true_k = std::uniform_int_distribution<int>(cfg.k_min, cfg.k_max)(rng);
        }
        res.assumed_k = cfg.assumed_k.value_or(res.true_k);

        const PathParams truth = sample_params(derive_seed(cfg.master_seed, {idx, stream_params}), res.true_k, cfg.kappa);
        const CMatrix h = assemble_channel(truth, cfg.geometry);
        const PilotBlock pilots = generate_pilots(cfg.geometry, cfg.effective_pilot_length());
        const CMatrix x = simulate_rx(h, pilots, snr_db, derive_seed(cfg.master_seed, {idx, stream_noise}));
        const CMatrix h_ls = ls_estimate(x, pilots);
        const std::uint64_t als_seed = derive_seed(cfg.master_seed, {idx, stream_als});

        for (Method m : cfg.methods)
        {
            MethodOutcome out;
            out.method = m;
            out.input_digest = matrix_digest(h_ls);
            try
            {
                const auto t0 = std::chrono::steady_clock::now();
                const ParamEstimate est = run_method(m, h_ls, cfg, res.assumed_k, als_seed);
                const auto t1 = std::chrono::steady_clock::now();
                out.runtime_s = cfg.record_runtime ? std::chrono::duration<double>(t1 - t0).count() : 0.0;
                out.nmse = nmse(est.h, h);
                out.notes = est.diagnostics.notes;
                if (m == Method::ls)
                {
                    out.theta_rmse = out.phi_rmse = out.vartheta_rmse = std::numeric_limits<double>::quiet_NaN();
                }
                else
                {
                    const AngleMatch am = match_angles(truth, est);
                    out.theta_rmse = am.theta_rmse;
                    out.phi_rmse = am.phi_rmse;
                    out.vartheta_rmse = am.vartheta_rmse;
                    out.unmatched_estimates = am.unmatched_estimates;
                }
                out.ok = std::isfinite(out.nmse);
                if (!out.ok)
                    out.error = "non-finite NMSE";
            }
            catch (const std::exception &e)
            {
                out.ok = false;
                out.error = e.what();
            }
            res.outcomes.push_back(std::move(out));
        }
        return res;
    }

    const CellSummary &MonteCarloResult::cell(Method m, double snr_db) const
    {
        for (const CellSummary &c : cells)
            if (c.method == m && c.snr_db == snr_db)
                return c;
        throw std::out_of_range("no result cell for method " + to_string(m) + " at SNR " + format_double(snr_db));
    }

    MonteCarloResult run_monte_carlo(const TrialConfig &cfg)
    {
        cfg.validate();
        const std::size_t n_snr = cfg.snr_grid_db.size();
        const auto n_trials = static_cast<std::size_t>(cfg.trials);
        const std::size_t total = n_snr * n_trials;

        MonteCarloResult mc;
        mc.trials.resize(total);

        unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
        workers = std::clamp(workers, 1u, static_cast<unsigned>(total));
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (std::size_t i = next++; i < total; i = next++)
                mc.trials[i] = run_trial(cfg, static_cast<int>(i % n_trials), cfg.snr_grid_db[i / n_trials]);
        };
        if (workers == 1)
            work();
        else
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back(work);
        }

        // Merge strictly in (method, snr, trial) order so the result is independent of scheduling.
        for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi)
            for (std::size_t si = 0; si < n_snr; ++si)
            {
                CellSummary c;
                c.method = cfg.methods[mi];
                c.snr_db = cfg.snr_grid_db[si];
                c.trials = cfg.trials;
                std::vector<double> nm, th, ph, va, rt;
                for (std::size_t ti = 0; ti < n_trials; ++ti)
                {
                    const MethodOutcome &o = mc.trials[si * n_trials + ti].outcomes[mi];
                    if (!o.ok)
                    {
                        ++c.failure_count;
                        continue;
                    }
                    nm.push_back(o.nmse);
                    th.push_back(o.theta_rmse);
                    ph.push_back(o.phi_rmse);
                    va.push_back(o.vartheta_rmse);
                    rt.push_back(o.runtime_s);
                }
                c.mean_nmse = finite_mean(nm);
                c.mean_theta_rmse = finite_mean(th);
                c.mean_phi_rmse = finite_mean(ph);
                c.mean_vartheta_rmse = finite_mean(va);
                c.mean_runtime_s = finite_mean(rt);
                mc.cells.push_back(c);
            }
        return mc;
    }

    void write_csv(std::ostream &os, const std::vector<CellSummary> &cells)
    {
        os << csv_header << '\n';
        for (const CellSummary &c : cells)
            os << to_string(c.method) << ',' << format_double(c.snr_db) << ',' << c.trials << ','
               << format_double(c.mean_nmse) << ',' << format_double(c.mean_theta_rmse) << ','
               << format_double(c.mean_phi_rmse) << ',' << format_double(c.mean_vartheta_rmse) << ','
               << format_double(c.mean_runtime_s) << ',' << c.failure_count << '\n';
    }

    std::string to_csv(const std::vector<CellSummary> &cells)
    {
        std::ostringstream os;
        write_csv(os, cells);
        return os.str();
    }

    void write_csv_file(const std::string &path, const std::vector<CellSummary> &cells)
    {
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot open '" + path + "' for writing");
        write_csv(f, cells);
        f.flush();
        if (!f)
            throw std::runtime_error("write to '" + path + "' failed");
    }
} // namespace dpchan
