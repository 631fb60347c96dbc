"""Python access to the vcslab verification core."""

from ._core import (
    DensityUndefined,
    class_count,
    class_ids,
    class_verdict,
    deformation_dot,
    deformation_graph,
    describe,
    gamma_ratio_surface,
    hyp1f1_one,
    kappa,
    landau_map,
    log_gamma,
    log_pochhammer,
    norm,
    pochhammer,
    resolution_residual,
    run_verify,
    state,
    upper_incomplete_gamma,
    verify_moments,
    verify_norm,
)

__all__ = [
    "DensityUndefined",
    "class_count",
    "class_ids",
    "class_verdict",
    "deformation_dot",
    "deformation_graph",
    "describe",
    "gamma_ratio_surface",
    "hyp1f1_one",
    "kappa",
    "landau_map",
    "log_gamma",
    "log_pochhammer",
    "norm",
    "pochhammer",
    "resolution_residual",
    "run_verify",
    "state",
    "upper_incomplete_gamma",
    "verify_moments",
    "verify_norm",
]
