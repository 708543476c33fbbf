"""Anisotropic locally adaptive P-spline smoothing (1-D/2-D/3-D).

Thin python surface over the C++ core: B-spline bases, adaptive difference
penalties, the mixed-model fit and the scenario generators.
"""

from adaptps._core import (
    BasisSpec,
    ModelFit,
    adaptive_components,
    adaptive_penalty_direct_2d,
    box_product,
    diff_matrix,
    eval_basis,
    fit_model,
    gen_dataset,
    kron,
    make_knots,
    psi_matrix,
    rh_transform,
    standard_penalty_1d,
    standard_penalty_2d,
    standard_penalty_3d,
    true_surface,
)

__all__ = [
    "BasisSpec",
    "ModelFit",
    "adaptive_components",
    "adaptive_penalty_direct_2d",
    "box_product",
    "diff_matrix",
    "eval_basis",
    "fit_model",
    "gen_dataset",
    "kron",
    "make_knots",
    "psi_matrix",
    "rh_transform",
    "standard_penalty_1d",
    "standard_penalty_2d",
    "standard_penalty_3d",
    "true_surface",
]

__version__ = "0.1.0"
