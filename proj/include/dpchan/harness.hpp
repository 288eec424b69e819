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

#ifndef DPCHAN_HARNESS_HPP
#define DPCHAN_HARNESS_HPP

#include "dpchan/baselines.hpp"
#include "dpchan/channel.hpp"
#include "dpchan/cpd.hpp"
#include "dpchan/estimate.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dpchan
{
    enum class Method
    {
        parafac,
        imdf,
        fft,
        ls
    };

    std::string to_string(Method m);
    Method parse_method(const std::string &name);

    enum class PathCountMode
    {
        fixed,  // every trial uses k_fixed paths
        uniform // K drawn uniformly from [k_min, k_max] per trial
    };

    struct TrialConfig
    {
        ArrayGeometry geometry{2, 4, 8};
        PathCountMode k_mode = PathCountMode::uniform;
        int k_fixed = 3;
        int k_min = 1;
        int k_max = 6;
        std::optional<int> assumed_k; // empty: estimators are told the true K
        std::vector<double> snr_grid_db{0, 5, 10, 15, 20, 25, 30};
        int trials = 100;
        std::uint64_t master_seed = 1;
        double kappa = default_kappa;
        int pilot_length = 0; // 0 selects the minimum 2 M_t
        std::vector<Method> methods{Method::parafac, Method::imdf, Method::fft, Method::ls};
        CpdOptions cpd;
        GridSpec grid;
        bool record_runtime = true; // false writes 0 runtimes so reruns are bit-identical
        int threads = 0;            // 0: hardware concurrency

        void validate() const;
        int effective_pilot_length() const { return pilot_length > 0 ? pilot_length : 2 * geometry.mt(); }
    };

    struct MethodOutcome
    {
        Method method = Method::ls;
        bool ok = false;
        double nmse = 0.0;
        double theta_rmse = 0.0; // NaN for LS (no angles)
        double phi_rmse = 0.0;
        double vartheta_rmse = 0.0;
        double runtime_s = 0.0;
        int unmatched_estimates = 0;
        std::uint64_t input_digest = 0; // fingerprint of the LS channel the method consumed
        std::string error;
        std::vector<std::string> notes;
    };

    struct TrialResult
    {
        int trial_index = 0;
        double snr_db = 0.0;
        int true_k = 0;
        int assumed_k = 0;
        std::vector<MethodOutcome> outcomes; // in TrialConfig::methods order
    };

    // Deterministic in (cfg, trial_index, snr_db). Path parameters and the unit-noise shape depend only
    // on (master_seed, trial_index), so one trial index is a paired sample across the SNR grid.
    TrialResult run_trial(const TrialConfig &cfg, int trial_index, double snr_db);

    struct CellSummary
    {
        Method method = Method::ls;
        double snr_db = 0.0;
        int trials = 0;
        double mean_nmse = 0.0;
        double mean_theta_rmse = 0.0;
        double mean_phi_rmse = 0.0;
        double mean_vartheta_rmse = 0.0;
        double mean_runtime_s = 0.0;
        int failure_count = 0;
    };

    struct MonteCarloResult
    {
        std::vector<CellSummary> cells;  // method-major, then SNR grid order
        std::vector<TrialResult> trials; // snr-major, then trial index

        const CellSummary &cell(Method m, double snr_db) const;
    };

    MonteCarloResult run_monte_carlo(const TrialConfig &cfg);

    inline constexpr const char *csv_header = "method,snr_db,trials,mean_nmse,mean_theta_rmse,mean_phi_rmse,"
                                              "mean_vartheta_rmse,mean_runtime_s,failure_count";

    void write_csv(std::ostream &os, const std::vector<CellSummary> &cells);
    std::string to_csv(const std::vector<CellSummary> &cells);
    void write_csv_file(const std::string &path, const std::vector<CellSummary> &cells);

    // FNV-1a over the raw bytes of a matrix.
    std::uint64_t matrix_digest(const CMatrix &m);
} // namespace dpchan

#endif
