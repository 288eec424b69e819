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

#ifndef DPCHAN_CONFIG_HPP
#define DPCHAN_CONFIG_HPP

#include "dpchan/harness.hpp"

#include <string>

namespace dpchan
{
    // Benchmark configuration as JSON. Every TrialConfig field has a key; unknown keys are rejected.
    //
    //   {
    //     "geometry": {"mr": 2, "mx": 4, "my": 8},
    //     "paths": {"mode": "uniform", "k_min": 1, "k_max": 6},     // or {"mode": "fixed", "k": 3}
    //     "assumed_k": "known",                                      // or an integer overestimate
    //     "snr_db": [0, 5, 10, 15, 20, 25, 30],                      // "inf" for noiseless
    //     "trials": 100, "master_seed": 1, "kappa": 10, "pilot_length": 0,
    //     "methods": ["parafac", "imdf", "fft", "ls"],
    //     "cpd": {"max_iters": 500, "tol": 1e-10, "restarts": 5},
    //     "fft": {"size": 128, "coherent": false},
    //     "record_runtime": true, "threads": 0
    //   }
    TrialConfig parse_config(const std::string &json_text);
    TrialConfig load_config(const std::string &path);
} // namespace dpchan

#endif
