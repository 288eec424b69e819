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
#include "dpchan/config.hpp"
#include "dpchan/errors.hpp"
#include "dpchan/harness.hpp"
#include "dpchan/metrics.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <sstream>

using namespace dpchan;

namespace
{
    ParamEstimate as_estimate(const PathParams &p)
    {
        ParamEstimate e;
        e.theta = p.theta;
        e.phi = p.phi;
        e.vartheta = p.vartheta;
        e.b = p.b;
        return e;
    }

    std::vector<std::string> split(const std::string &line)
    {
        std::vector<std::string> out;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ','))
            out.push_back(f);
        return out;
    }
} // namespace

TEST_CASE("nmse examples")
{
    const CMatrix h = assemble_channel(sample_params(1, 2), {2, 2, 2});
    CHECK(nmse(h, h) == 0.0);
    CHECK(nmse(CMatrix::Zero(4, 8), h) == doctest::Approx(1.0));
    CHECK(nmse(2.0 * h, h) == doctest::Approx(1.0));
    CHECK_THROWS(nmse(h, CMatrix::Zero(4, 8)));
    CHECK_THROWS_AS(nmse(h, CMatrix::Zero(4, 7)), DimensionError);
}

TEST_CASE("match_angles")
{
    const PathParams truth = sample_params(5, 3);

    PathParams perm = truth;
    std::swap(perm.theta[0], perm.theta[2]);
    std::swap(perm.phi[0], perm.phi[2]);
    std::swap(perm.vartheta[0], perm.vartheta[2]);
    const AngleMatch m0 = match_angles(truth, as_estimate(perm));
    CHECK(m0.theta_rmse == 0.0);
    CHECK(m0.phi_rmse == 0.0);
    CHECK(m0.vartheta_rmse == 0.0);
    CHECK(m0.assignment[0] == 2);
    CHECK(m0.assignment[2] == 0);

    PathParams shifted = truth;
    for (std::size_t i = 0; i < 3; ++i)
    {
        shifted.theta[i] += 1e-3;
        shifted.phi[i] -= 1e-3;
        shifted.vartheta[i] += 1e-3;
    }
    const AngleMatch m1 = match_angles(truth, as_estimate(shifted));
    CHECK(m1.theta_rmse == doctest::Approx(1e-3).epsilon(1e-9));
    CHECK(m1.phi_rmse == doctest::Approx(1e-3).epsilon(1e-9));
    CHECK(m1.vartheta_rmse == doctest::Approx(1e-3).epsilon(1e-9));

    // six estimates for three true paths: the truth is embedded at positions 4, 1, 5
    const PathParams extra = sample_params(99, 6);
    PathParams six = extra;
    const std::array<std::size_t, 3> slot{4, 1, 5};
    for (std::size_t i = 0; i < 3; ++i)
    {
        six.theta[slot[i]] = truth.theta[i];
        six.phi[slot[i]] = truth.phi[i];
        six.vartheta[slot[i]] = truth.vartheta[i];
    }
    const AngleMatch m2 = match_angles(truth, as_estimate(six));
    CHECK(m2.unmatched_estimates == 3);
    CHECK(m2.phi_rmse == 0.0);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(m2.assignment[i] == static_cast<Index>(slot[i]));

    CHECK_THROWS(match_angles(six, as_estimate(truth)));
}

TEST_CASE("match_angles wraps the azimuth")
{
    PathParams truth{{0.1}, {0.5}, {3.1}, CMatrix::Ones(4, 1)};
    PathParams est = truth;
    est.vartheta[0] = -3.1;
    CHECK(match_angles(truth, as_estimate(est)).vartheta_rmse == doctest::Approx(2 * oracle::pi - 6.2));
}

TEST_CASE("run_trial is deterministic and paired")
{
    TrialConfig cfg;
    cfg.trials = 1;
    cfg.record_runtime = false;
    const TrialResult a = run_trial(cfg, 3, 10.0);
    const TrialResult b = run_trial(cfg, 3, 10.0);
    REQUIRE(a.outcomes.size() == 4);
    for (std::size_t i = 0; i < a.outcomes.size(); ++i)
    {
        CHECK(a.outcomes[i].nmse == b.outcomes[i].nmse);
        CHECK(a.outcomes[i].input_digest == a.outcomes[0].input_digest);
    }
    CHECK(a.true_k == b.true_k);
    CHECK(a.true_k >= 1);
    CHECK(a.true_k <= 6);
}

TEST_CASE("noiseless trials recover the channel")
{
    TrialConfig cfg;
    cfg.k_mode = PathCountMode::fixed;
    cfg.k_fixed = 3;
    cfg.methods = {Method::parafac, Method::imdf, Method::ls};
    for (int t = 0; t < 5; ++t)
    {
        const TrialResult r = run_trial(cfg, t, noiseless_snr);
        CHECK(r.outcomes[0].nmse <= 1e-8);
        CHECK(r.outcomes[1].nmse <= 1e-8);
        CHECK(r.outcomes[2].nmse <= 1e-28);
    }
}

TEST_CASE("LS trials match the error-variance formula")
{
    // With N = 2 M_t orthogonal pilots the LS NMSE equals 1/snr in expectation.
    TrialConfig cfg;
    cfg.methods = {Method::ls};
    const double snr_db = 10.0;
    std::vector<double> v;
    for (int t = 0; t < 200; ++t)
        v.push_back(run_trial(cfg, t, snr_db).outcomes[0].nmse);
    double mean = 0.0, var = 0.0;
    for (double x : v)
        mean += x / 200.0;
    for (double x : v)
        var += (x - mean) * (x - mean) / 199.0;
    const double se = std::sqrt(var / 200.0);
    CHECK(std::abs(mean - 0.1) <= 3.0 * se);
}

TEST_CASE("Monte-Carlo aggregation and CSV")
{
    TrialConfig cfg;
    cfg.trials = 3;
    cfg.snr_grid_db = {10.0, 20.0};
    cfg.methods = {Method::imdf, Method::ls};
    cfg.record_runtime = false;
    const MonteCarloResult mc = run_monte_carlo(cfg);
    REQUIRE(mc.cells.size() == 4);
    CHECK(mc.cells[0].method == Method::imdf);
    CHECK(mc.cells[1].snr_db == 20.0);

    // cell means are plain means of the per-trial values
    for (std::size_t si = 0; si < 2; ++si)
    {
        double acc = 0.0;
        for (int t = 0; t < 3; ++t)
            acc += mc.trials[si * 3 + static_cast<std::size_t>(t)].outcomes[0].nmse;
        CHECK(std::abs(mc.cell(Method::imdf, cfg.snr_grid_db[si]).mean_nmse - acc / 3.0) <= 1e-12 * acc);
    }

    const std::string csv = to_csv(mc.cells);
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    CHECK(line == "method,snr_db,trials,mean_nmse,mean_theta_rmse,mean_phi_rmse,mean_vartheta_rmse,"
                  "mean_runtime_s,failure_count");
    int rows = 0;
    while (std::getline(is, line))
    {
        CHECK(split(line).size() == 9);
        ++rows;
    }
    CHECK(rows == 4);

    TrialConfig threaded = cfg;
    threaded.threads = 3;
    CHECK(to_csv(run_monte_carlo(threaded).cells) == csv);
}

TEST_CASE("one trial and one SNR gives one row per method")
{
    TrialConfig cfg;
    cfg.trials = 1;
    cfg.snr_grid_db = {15.0};
    cfg.record_runtime = false;
    CHECK(run_monte_carlo(cfg).cells.size() == 4);
}

TEST_CASE("config parsing")
{
    const TrialConfig cfg = parse_config(R"({
        "geometry": {"mr": 2, "mx": 2, "my": 4},
        "paths": {"mode": "fixed", "k": 2},
        "assumed_k": 6,
        "snr_db": [0, 10, "inf"],
        "trials": 7,
        "master_seed": 12,
        "methods": ["imdf", "ls"],
        "cpd": {"restarts": 2},
        "fft": {"size": 64, "coherent": true},
        "record_runtime": false
    })");
    CHECK(cfg.geometry == ArrayGeometry{2, 2, 4});
    CHECK(cfg.k_mode == PathCountMode::fixed);
    CHECK(cfg.k_fixed == 2);
    CHECK(cfg.assumed_k.value() == 6);
    REQUIRE(cfg.snr_grid_db.size() == 3);
    CHECK(std::isinf(cfg.snr_grid_db[2]));
    CHECK(cfg.trials == 7);
    CHECK(cfg.master_seed == 12);
    CHECK(cfg.methods.size() == 2);
    CHECK(cfg.cpd.restarts == 2);
    CHECK(cfg.grid.fft_size == 64);
    CHECK(cfg.grid.coherent);
    CHECK_FALSE(cfg.record_runtime);

    CHECK_THROWS_AS(parse_config(R"({"trials": 0})"), FormatError);
    CHECK_THROWS_AS(parse_config(R"({"trails": 5})"), FormatError);
    CHECK_THROWS_AS(parse_config(R"({"methods": ["music"]})"), FormatError);
    CHECK_THROWS_AS(parse_config("{not json"), FormatError);
    CHECK(parse_config("{}").trials == 100);
}

TEST_CASE("channel file round trip")
{
    const ArrayGeometry g{2, 2, 3};
    const CMatrix h = assemble_channel(sample_params(3, 2), g);
    std::stringstream ss;
    write_channel(ss, {g, h});
    const std::string text = ss.str();
    CHECK(text.rfind("dp-chanest-v1 2 2 3\n", 0) == 0);
    const ChannelFile back = read_channel(ss);
    CHECK(back.geometry == g);
    CHECK((back.h - h).norm() == 0.0);
}

TEST_CASE("channel file errors")
{
    auto parse = [](const std::string &s) {
        std::istringstream is(s);
        return read_channel(is);
    };
    CHECK_THROWS_AS(parse(""), FormatError);
    CHECK_THROWS_AS(parse("dp-chanest-v2 1 1 1\n"), FormatError);
    CHECK_THROWS_AS(parse("dp-chanest-v1 1 1\n"), FormatError);
    CHECK_THROWS_AS(parse("dp-chanest-v1 1 1 1\n1 0\n0 0\n0 0\n"), FormatError);
    CHECK_THROWS_AS(parse("dp-chanest-v1 1 1 1\n1 0\n0 0\n0 0\n0 0\n0 0\n"), FormatError);
    CHECK_THROWS_AS(parse("dp-chanest-v1 1 1 1\n1 0 9\n0 0\n0 0\n0 0\n"), FormatError);
    CHECK_NOTHROW(parse("dp-chanest-v1 1 1 1\n1 0\n0 0\n\n0 0\n0 0\n"));
}
