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

#include "dpchan/baselines.hpp"
#include "dpchan/channel_io.hpp"
#include "dpchan/config.hpp"
#include "dpchan/cpd.hpp"
#include "dpchan/harness.hpp"
#include "dpchan/identifiability.hpp"
#include "dpchan/imdf.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>

namespace
{
    using namespace dpchan;

    int cmd_bench(const std::string &config_path, const std::string &out_path, int threads)
    {
        TrialConfig cfg = load_config(config_path);
        if (threads > 0)
            cfg.threads = threads;
        const MonteCarloResult mc = run_monte_carlo(cfg);
        write_csv_file(out_path, mc.cells);
        std::cerr << "wrote " << mc.cells.size() << " rows to " << out_path << '\n';
        return 0;
    }

    int cmd_bound(int mr, int mx, int my, bool key_value)
    {
        const BoundReport rep = imdf_max_paths({mr, mx, my});
        std::cout << format_bound_report(rep, key_value);
        return 0;
    }

    ParamEstimate run_estimate(const ChannelFile &ch, int k, Method method, const CpdOptions &cpd, int fft_size)
    {
        switch (method)
        {
        case Method::parafac:
            return estimate_channel_parafac(ch.h, ch.geometry, k, cpd);
        case Method::imdf:
            return estimate_channel_imdf(ch.h, ch.geometry, k);
        case Method::fft:
            return fft_peak_pick(ch.h, ch.geometry, k, GridSpec{fft_size, false});
        case Method::ls:
            return ls_baseline(ch.h, ch.geometry);
        }
        throw std::logic_error("unknown method");
    }

    int cmd_estimate(const std::string &in_path, int k, const std::string &method_name, const std::string &out_path,
                     const CpdOptions &cpd, int fft_size)
    {
        const Method method = parse_method(method_name);
        const ChannelFile ch = read_channel_file(in_path);
        const ParamEstimate est = run_estimate(ch, k, method, cpd, fft_size);

        constexpr double deg = 180.0 / std::numbers::pi;
        std::printf("method %s  K=%d  geometry (%d,%d,%d)\n", method_name.c_str(), k, ch.geometry.mr, ch.geometry.mx,
                    ch.geometry.my);
        if (est.k() > 0)
        {
            std::printf("%4s %12s %12s %12s %12s %12s %12s %12s\n", "path", "theta_deg", "phi_deg", "vartheta_deg",
                        "|b_VV|", "|b_VH|", "|b_HV|", "|b_HH|");
            for (Index i = 0; i < est.k(); ++i)
            {
                const auto u = static_cast<std::size_t>(i);
                std::printf("%4ld %12.6f %12.6f %12.6f %12.6g %12.6g %12.6g %12.6g\n", static_cast<long>(i),
                            est.theta[u] * deg, est.phi[u] * deg, est.vartheta[u] * deg, std::abs(est.b(0, i)),
                            std::abs(est.b(1, i)), std::abs(est.b(2, i)), std::abs(est.b(3, i)));
            }
            if (!est.diagnostics.theta_defined)
                std::printf("theta is undefined for a single receive antenna (reported as 0)\n");
        }
        std::printf("residual %.6g\n", est.diagnostics.residual);
        if (method == Method::parafac)
            std::printf("iterations %d  converged %s\n", est.diagnostics.iterations,
                        est.diagnostics.converged ? "yes" : "no");
        for (const std::string &note : est.diagnostics.notes)
            std::printf("note: %s\n", note.c_str());
        if (!out_path.empty())
            write_channel_file(out_path, {ch.geometry, est.h});
        return 0;
    }

    int cmd_synth(const ArrayGeometry &g, int k, std::uint64_t seed, double snr_db, double kappa,
                  const std::string &out_path)
    {
        const PathParams p = sample_params(seed, k, kappa);
        const CMatrix h = assemble_channel(p, g);
        const PilotBlock pilots = generate_pilots(g, 2 * g.mt());
        const CMatrix h_ls = ls_estimate(simulate_rx(h, pilots, snr_db, seed ^ 0x5bd1e995ULL), pilots);
        write_channel_file(out_path, {g, h_ls});
        constexpr double deg = 180.0 / std::numbers::pi;
        for (Index i = 0; i < p.k(); ++i)
        {
            const auto u = static_cast<std::size_t>(i);
            std::printf("path %ld theta_deg %.6f phi_deg %.6f vartheta_deg %.6f\n", static_cast<long>(i),
                        p.theta[u] * deg, p.phi[u] * deg, p.vartheta[u] * deg);
        }
        return 0;
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Dual-polarized double-directional MIMO channel parameter estimation"};
    app.require_subcommand(1);

    std::string config_path, out_csv;
    int threads = 0;
    auto *bench = app.add_subcommand("bench", "Monte-Carlo NMSE-vs-SNR sweep");
    bench->add_option("--config", config_path, "JSON benchmark configuration")->required()->check(CLI::ExistingFile);
    bench->add_option("--out", out_csv, "output CSV path")->required();
    bench->add_option("--threads", threads, "worker threads (overrides the config)");

    int mr = 2, mx = 4, my = 8;
    bool kv = false;
    auto *bound = app.add_subcommand("bound", "identifiability bounds for an array geometry");
    bound->add_option("--mr", mr, "receive ULA elements")->required()->check(CLI::PositiveNumber);
    bound->add_option("--mx", mx, "transmit URA elements along x")->required()->check(CLI::PositiveNumber);
    bound->add_option("--my", my, "transmit URA elements along y")->required()->check(CLI::PositiveNumber);
    bound->add_flag("--kv", kv, "also print machine-readable key=value lines");

    std::string in_path, method = "imdf", out_channel;
    int k = 1, fft_size = 128;
    CpdOptions cpd;
    auto *estimate = app.add_subcommand("estimate", "one-shot estimation from a channel file");
    estimate->add_option("--in", in_path, "channel file (dp-chanest-v1)")->required()->check(CLI::ExistingFile);
    estimate->add_option("--k", k, "number of paths")->required()->check(CLI::PositiveNumber);
    estimate->add_option("--method", method, "parafac, imdf, fft or ls")->capture_default_str();
    estimate->add_option("--out", out_channel, "write the reconstructed channel to this file");
    estimate->add_option("--restarts", cpd.restarts, "ALS restarts")->capture_default_str();
    estimate->add_option("--max-iters", cpd.max_iters, "ALS iteration cap")->capture_default_str();
    estimate->add_option("--seed", cpd.seed, "ALS restart seed")->capture_default_str();
    estimate->add_option("--fft-size", fft_size, "DFT points per dimension for the fft method")->capture_default_str();

    int sk = 3;
    std::uint64_t seed = 1;
    double snr = 20.0, kappa = default_kappa;
    std::string synth_out;
    ArrayGeometry sg{2, 4, 8};
    auto *synth = app.add_subcommand("synth", "write the LS estimate of a random channel to a channel file");
    synth->add_option("--mr", sg.mr)->capture_default_str();
    synth->add_option("--mx", sg.mx)->capture_default_str();
    synth->add_option("--my", sg.my)->capture_default_str();
    synth->add_option("--k", sk, "number of paths")->capture_default_str();
    synth->add_option("--seed", seed)->capture_default_str();
    synth->add_option("--snr", snr, "SNR in dB (inf for noiseless)")->capture_default_str();
    synth->add_option("--kappa", kappa, "Rician factor")->capture_default_str();
    synth->add_option("--out", synth_out)->required();

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*bench)
            return cmd_bench(config_path, out_csv, threads);
        if (*bound)
            return cmd_bound(mr, mx, my, kv);
        if (*estimate)
            return cmd_estimate(in_path, k, method, out_channel, cpd, fft_size);
        if (*synth)
            return cmd_synth(sg, sk, seed, snr, kappa, synth_out);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
