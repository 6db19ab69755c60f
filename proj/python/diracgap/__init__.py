"""Gap eigenvalues of Dirac operators with attractive potentials."""

import json

from ._diracgap import (
    ConvergenceError,
    DiracGapError,
    DomainError,
    IntegrationError,
    Lambda_D_1d,
    NoSolutionError,
    SingularityError,
    SupercriticalError,
    ValidationError,
    alpha_D,
    alpha_star,
    gap_eigenvalues,
    lambda_D,
    lt_constant,
    nonrel_gap_depth,
    radial_critical_norm,
    wp_norm_p,
)
from . import _diracgap

__all__ = [
    "ConvergenceError",
    "DiracGapError",
    "DomainError",
    "IntegrationError",
    "Lambda_D_1d",
    "NoSolutionError",
    "SingularityError",
    "SupercriticalError",
    "ValidationError",
    "alpha_D",
    "alpha_star",
    "gap_eigenvalues",
    "lambda_D",
    "lt_constant",
    "nonrel_gap_depth",
    "radial_critical_norm",
    "run",
    "wp_norm_p",
]


def run(command, config=None, out_dir="out", seed=None, tol=None):
    """Run a CLI command in-process and return its summary as a dict."""
    if not hasattr(_diracgap, "run_command"):
        raise RuntimeError("extension was built without the command layer")
    text = _diracgap.run_command(command, json.dumps(config or {}), str(out_dir), seed, tol)
    return json.loads(text)
