# SPDX-License-Identifier: Apache-2.0

"""Parameter estimation for dual-polarized double-directional MIMO channels."""

from ._core import (
    ArrayGeometry,
    BoundReport,
    DimensionError,
    FoldingPlan,
    FormatError,
    InfeasibleError,
    PathParams,
    RankDeficiencyError,
    __version__,
    assemble_channel,
    choose_folding,
    estimate_fft,
    estimate_imdf,
    estimate_parafac,
    generate_pilots,
    imdf_max_paths,
    khatri_rao,
    kruskal_check,
    ls_estimate,
    ls_solve,
    nmse,
    run_benchmark,
    sample_params,
    simulate_rx,
    stack_channel,
    steering_ula,
    steering_ura,
    truncated_left_subspace,
)

__all__ = [
    "ArrayGeometry",
    "BoundReport",
    "DimensionError",
    "FoldingPlan",
    "FormatError",
    "InfeasibleError",
    "PathParams",
    "RankDeficiencyError",
    "__version__",
    "assemble_channel",
    "choose_folding",
    "estimate_fft",
    "estimate_imdf",
    "estimate_parafac",
    "generate_pilots",
    "imdf_max_paths",
    "khatri_rao",
    "kruskal_check",
    "ls_estimate",
    "ls_solve",
    "nmse",
    "run_benchmark",
    "sample_params",
    "simulate_rx",
    "stack_channel",
    "steering_ula",
    "steering_ura",
    "truncated_left_subspace",
]
