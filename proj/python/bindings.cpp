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
#include "dpchan/channel.hpp"
#include "dpchan/config.hpp"
#include "dpchan/cpd.hpp"
#include "dpchan/errors.hpp"
#include "dpchan/harness.hpp"
#include "dpchan/identifiability.hpp"
#include "dpchan/imdf.hpp"
#include "dpchan/linalg.hpp"
#include "dpchan/metrics.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace dpchan;

namespace
{
    py::dict estimate_to_dict(const ParamEstimate &est)
    {
        py::dict d;
        d["theta"] = est.theta;
        d["phi"] = est.phi;
        d["vartheta"] = est.vartheta;
        d["b"] = est.b;
        d["h"] = est.h;
        d["residual"] = est.diagnostics.residual;
        d["iterations"] = est.diagnostics.iterations;
        d["converged"] = est.diagnostics.converged;
        d["theta_defined"] = est.diagnostics.theta_defined;
        d["notes"] = est.diagnostics.notes;
        return d;
    }
} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Dual-polarized double-directional MIMO channel parameter estimation";

    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<RankDeficiencyError>(m, "RankDeficiencyError", PyExc_RuntimeError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

    py::class_<ArrayGeometry>(m, "ArrayGeometry")
        .def(py::init([](int mr, int mx, int my) {
                 ArrayGeometry g{mr, mx, my};
                 g.validate();
                 return g;
             }),
             py::arg("mr"), py::arg("mx"), py::arg("my"))
        .def_readwrite("mr", &ArrayGeometry::mr)
        .def_readwrite("mx", &ArrayGeometry::mx)
        .def_readwrite("my", &ArrayGeometry::my)
        .def_property_readonly("mt", &ArrayGeometry::mt)
        .def("__repr__", [](const ArrayGeometry &g) {
            return "ArrayGeometry(mr=" + std::to_string(g.mr) + ", mx=" + std::to_string(g.mx) +
                   ", my=" + std::to_string(g.my) + ")";
        });

    py::class_<PathParams>(m, "PathParams")
        .def(py::init([](std::vector<double> theta, std::vector<double> phi, std::vector<double> vartheta, CMatrix b) {
                 PathParams p{std::move(theta), std::move(phi), std::move(vartheta), std::move(b)};
                 p.validate();
                 return p;
             }),
             py::arg("theta"), py::arg("phi"), py::arg("vartheta"), py::arg("b"))
        .def_readwrite("theta", &PathParams::theta)
        .def_readwrite("phi", &PathParams::phi)
        .def_readwrite("vartheta", &PathParams::vartheta)
        .def_readwrite("b", &PathParams::b)
        .def_property_readonly("k", &PathParams::k);

    py::class_<FoldingPlan>(m, "FoldingPlan")
        .def_readonly("pr", &FoldingPlan::pr)
        .def_readonly("px", &FoldingPlan::px)
        .def_readonly("py", &FoldingPlan::py)
        .def_readonly("qr", &FoldingPlan::qr)
        .def_readonly("qx", &FoldingPlan::qx)
        .def_readonly("qy", &FoldingPlan::qy)
        .def_readonly("f", &FoldingPlan::f);

    py::class_<BoundReport>(m, "BoundReport")
        .def_readonly("geometry", &BoundReport::geometry)
        .def_readonly("kruskal_max_k", &BoundReport::kruskal_max_k)
        .def_readonly("imdf_max_k", &BoundReport::imdf_max_k)
        .def_readonly("best_plan", &BoundReport::best_plan);

    m.def("khatri_rao", py::overload_cast<const CMatrix &, const CMatrix &>(&khatri_rao), py::arg("a"), py::arg("b"));
    m.def("ls_solve", &ls_solve, py::arg("a"), py::arg("y"));
    m.def("truncated_left_subspace", &truncated_left_subspace, py::arg("a"), py::arg("k"));

    m.def("steering_ula", &steering_ula, py::arg("theta"), py::arg("m"));
    m.def("steering_ura", &steering_ura, py::arg("phi"), py::arg("vartheta"), py::arg("geometry"));
    m.def("assemble_channel", &assemble_channel, py::arg("params"), py::arg("geometry"));
    m.def(
        "stack_channel", [](const CMatrix &h, const ArrayGeometry &g) { return stack_channel(h, g).matrix; },
        py::arg("h"), py::arg("geometry"));
    m.def("sample_params", &sample_params, py::arg("seed"), py::arg("k"), py::arg("kappa") = default_kappa);
    m.def(
        "generate_pilots", [](const ArrayGeometry &g, Index n) { return generate_pilots(g, n).s; },
        py::arg("geometry"), py::arg("n"));
    m.def(
        "simulate_rx",
        [](const CMatrix &h, const CMatrix &s, double snr_db, std::uint64_t seed) {
            return simulate_rx(h, PilotBlock{s}, snr_db, seed);
        },
        py::arg("h"), py::arg("pilots"), py::arg("snr_db"), py::arg("seed"));
    m.def(
        "ls_estimate", [](const CMatrix &x, const CMatrix &s) { return ls_estimate(x, PilotBlock{s}); },
        py::arg("x"), py::arg("pilots"));

    m.def(
        "estimate_parafac",
        [](const CMatrix &h_ls, const ArrayGeometry &g, Index k, int restarts, int max_iters, std::uint64_t seed) {
            CpdOptions o;
            o.restarts = restarts;
            o.max_iters = max_iters;
            o.seed = seed;
            return estimate_to_dict(estimate_channel_parafac(h_ls, g, k, o));
        },
        py::arg("h_ls"), py::arg("geometry"), py::arg("k"), py::arg("restarts") = 5, py::arg("max_iters") = 500,
        py::arg("seed") = 0);
    m.def(
        "estimate_imdf",
        [](const CMatrix &h_ls, const ArrayGeometry &g, Index k) {
            return estimate_to_dict(estimate_channel_imdf(h_ls, g, k));
        },
        py::arg("h_ls"), py::arg("geometry"), py::arg("k"));
    m.def(
        "estimate_fft",
        [](const CMatrix &h_ls, const ArrayGeometry &g, Index k, int fft_size) {
            return estimate_to_dict(fft_peak_pick(h_ls, g, k, GridSpec{fft_size, false}));
        },
        py::arg("h_ls"), py::arg("geometry"), py::arg("k"), py::arg("fft_size") = 128);

    m.def("kruskal_check", &kruskal_check, py::arg("geometry"), py::arg("k"));
    m.def("imdf_max_paths", &imdf_max_paths, py::arg("geometry"));
    m.def("choose_folding", &choose_folding, py::arg("geometry"), py::arg("k"));

    m.def("nmse", &nmse, py::arg("h_hat"), py::arg("h"));

    m.def(
        "run_benchmark",
        [](const std::string &config_json) {
            const TrialConfig cfg = parse_config(config_json);
            py::gil_scoped_release release;
            return to_csv(run_monte_carlo(cfg).cells);
        },
        py::arg("config_json"), "Run a Monte-Carlo sweep from a JSON config and return the CSV text.");

#ifdef VERSION_INFO
    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
