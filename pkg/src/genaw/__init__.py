"""Askey-Wilson polynomials and their generalization with point masses at x = -1 and x = +1."""
from .askey_wilson import AWParams, FamilyContext, aw_eval_series, aw_eval_ttrr, norm_sq
from .cd_kernels import kernel_anchored, kernel_backward, kernel_cd, kernel_forward, kernel_sum, varkappa
from .gen_aw import (
    GenBoundary,
    MassConfig,
    boundary_values,
    gen_eval_5phi4,
    gen_eval_all,
    gen_eval_diffrep,
    gen_eval_kernelrep,
    gen_eval_rep,
    gen_ttrr_coeffs,
    racah_identity_check,
    rep_coeffs,
    shift_rep_coeffs,
    sode_tilde_coeffs,
)
from .lattice import LatticePoint, point_from_qs, point_from_theta, point_from_x

__all__ = [
    "AWParams",
    "FamilyContext",
    "GenBoundary",
    "LatticePoint",
    "MassConfig",
    "aw_eval_series",
    "aw_eval_ttrr",
    "boundary_values",
    "gen_eval_5phi4",
    "gen_eval_all",
    "gen_eval_diffrep",
    "gen_eval_kernelrep",
    "gen_eval_rep",
    "gen_ttrr_coeffs",
    "kernel_anchored",
    "kernel_backward",
    "kernel_cd",
    "kernel_forward",
    "kernel_sum",
    "norm_sq",
    "point_from_qs",
    "point_from_theta",
    "point_from_x",
    "racah_identity_check",
    "rep_coeffs",
    "shift_rep_coeffs",
    "sode_tilde_coeffs",
    "varkappa",
]
