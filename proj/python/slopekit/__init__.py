"""Sorted-l1 penalized regression: prox kernels, fits, condition checks, simulations."""

import json

from ._core import (
    InputError,
    IoError,
    NumericalError,
    __version__,
    cluster_condition,
    dual_norm,
    fit,
    pattern_of,
    project_dual_ball,
    prox_sorted_l1,
    sorted_l1_norm,
    support_conditions,
    trig_design,
)
from ._core import simulate as _simulate


def simulate(config=None, jobs=1):
    """Monte Carlo study; `config` overlays the default configuration. Returns the summary dict."""
    return json.loads(_simulate(json.dumps(config or {}), jobs))


__all__ = [
    "InputError",
    "IoError",
    "NumericalError",
    "__version__",
    "cluster_condition",
    "dual_norm",
    "fit",
    "pattern_of",
    "project_dual_ball",
    "prox_sorted_l1",
    "simulate",
    "sorted_l1_norm",
    "support_conditions",
    "trig_design",
]
