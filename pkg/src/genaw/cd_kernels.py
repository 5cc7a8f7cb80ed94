"""Reproducing (Christoffel-Darboux) kernels of the Askey-Wilson family.

``K_n(x1, x2) = sum_{k<=n} P_k(x1) P_k(x2) / d_k^2`` in four equivalent
forms, plus the coefficient functions that express ``K_{n-1}(x(s), -+1)``
through ``P_{n-1}(s)`` and its forward difference quotient.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .askey_wilson import (
    FamilyContext,
    _qdiff,
    diff_coeffs,
    lambda_n,
    phi_big,
    sigma,
)
from .errors import ConfluentPoints
from .lattice import LatticePoint, point_from_qs
from .qkernel import qpoch, qpoch_inf_ratio

CONFLUENT_TOL = 1e-8


@dataclass(frozen=True)
class KernelEval:
    n: int
    x1: complex
    x2: complex
    value: complex
    form_used: str


def _x(p):
    return p.x if isinstance(p, LatticePoint) else p


def _check_degree(n, ctx):
    if n > ctx.n_max:
        raise ValueError(f"degree {n} exceeds cached n_max={ctx.n_max}")


def kernel_sum(n: int, x1, x2, ctx: FamilyContext):
    """Direct partial sum; broadcasts over array arguments."""
    _check_degree(n, ctx)
    if n < 0:
        return np.zeros(np.broadcast(np.asarray(_x(x1)), np.asarray(_x(x2))).shape, complex)[()]
    x1, x2 = np.broadcast_arrays(np.asarray(_x(x1), dtype=complex), np.asarray(_x(x2), dtype=complex))
    v1 = ctx.eval_all(x1, n)
    v2 = ctx.eval_all(x2, n)
    w = (1.0 / ctx.norms[: n + 1]).reshape((-1,) + (1,) * x1.ndim)
    out = np.sum(v1 * v2 * w, axis=0)
    return out[()] if np.ndim(out) == 0 else out


def kernel_cd(n: int, x1, x2, ctx: FamilyContext):
    """Christoffel-Darboux quotient form (monic, so the prefactor is ``1/d_n^2``)."""
    _check_degree(n, ctx)
    x1, x2 = _x(x1), _x(x2)
    diff = np.asarray(x1 - x2)
    if np.any(np.abs(diff) <= CONFLUENT_TOL):
        raise ConfluentPoints("quotient form needs |x1 - x2| > 1e-8; use kernel_sum")
    v1 = ctx.eval_all(x1, n + 1)
    v2 = ctx.eval_all(x2, n + 1)
    out = (v1[n + 1] * v2[n] - v2[n + 1] * v1[n]) / (ctx.norms[n] * diff)
    return out[()] if np.ndim(out) == 0 else out


def _pn_and_neighbours(n, p: LatticePoint, ctx, steps):
    return [ctx.p(n, p.x_at(k)) for k in steps]


def kernel_forward(n: int, p: LatticePoint, p0: LatticePoint, ctx: FamilyContext):
    """Kernel from the forward differentiation formula (``Phi``, ``Delta``)."""
    _check_degree(n, ctx)
    params = ctx.params
    diff = p.x - p0.x
    if abs(diff) <= CONFLUENT_TOL:
        raise ConfluentPoints("x(s) and x(s0) coincide")
    alpha_hat, _, bh = diff_coeffs(n, p, params)
    _, _, bh0 = diff_coeffs(n, p0, params)
    pn, pn_next = _pn_and_neighbours(n, p, ctx, (0, 1))
    p0n, p0n_next = _pn_and_neighbours(n, p0, ctx, (0, 1))
    dq = (pn_next - pn) / p.dx_fwd
    dq0 = (p0n_next - p0n) / p0.dx_fwd
    pref = 1.0 / (alpha_hat * ctx.norms[n])
    return pref * (
        p0n * ((bh0 - bh) / diff * pn + phi_big(p, params) / diff * dq)
        - phi_big(p0, params) / diff * dq0 * pn
    )


def kernel_backward(n: int, p: LatticePoint, p0: LatticePoint, ctx: FamilyContext):
    """Kernel from the backward differentiation formula (``sigma``, ``nabla``)."""
    _check_degree(n, ctx)
    params = ctx.params
    diff = p.x - p0.x
    if abs(diff) <= CONFLUENT_TOL:
        raise ConfluentPoints("x(s) and x(s0) coincide")
    alpha_bar, bb, _ = diff_coeffs(n, p, params)
    _, bb0, _ = diff_coeffs(n, p0, params)
    pn, pn_prev = _pn_and_neighbours(n, p, ctx, (0, -1))
    p0n, p0n_prev = _pn_and_neighbours(n, p0, ctx, (0, -1))
    nq = (pn - pn_prev) / p.dx_bwd
    nq0 = (p0n - p0n_prev) / p0.dx_bwd
    pref = 1.0 / (alpha_bar * ctx.norms[n])
    return pref * (
        p0n * ((bb0 - bb) / diff * pn + sigma(p, params) / diff * nq)
        - sigma(p0, params) / diff * nq0 * pn
    )


def _kernel_prefactor(n: int, ctx: FamilyContext) -> complex:
    """``1 / (alpha_hat_{n-1} d_{n-1}^2)`` written with infinite products."""
    params = ctx.params
    q = params.q
    t = params.abcd
    num = [t, q**n] + [pr * q ** (n - 1) for pr in params.pairs]
    den = [t * q ** (2 * n - 3), q] + params.pairs
    ratio = qpoch_inf_ratio(num, den, q)
    return qpoch(t * q ** (n - 2), q, n - 1) * ratio / (
        2.0 ** (-2 * n + 4) * q ** (-n + 2) * _qdiff(q)
    )


def varkappa(n: int, p: LatticePoint, anchor: int, ctx: FamilyContext):
    """Coefficients ``(kappa, kappa_bar)`` of the anchored kernel.

    ``K_{n-1}(x(s), anchor) = kappa P_{n-1}(s) + kappa_bar Delta P_{n-1}(s) / Delta x(s)``
    for ``anchor`` in ``{-1, +1}``.
    """
    if anchor not in (-1, 1):
        raise ValueError("anchor must be -1 or +1")
    if n < 1:
        raise ValueError("anchored kernels need n >= 1")
    _check_degree(n - 1, ctx)
    params = ctx.params
    q = params.q
    r = _qdiff(q)
    t = params.abcd
    m = n - 1
    diff = p.x - anchor
    if abs(diff) <= CONFLUENT_TOL:
        raise ConfluentPoints(f"x(s) coincides with the anchor {anchor}")
    s0 = point_from_qs(complex(anchor), q)
    idx = 0 if anchor == -1 else 1
    p_anchor = ctx.boundary_p[m, idx]
    dp_anchor = ctx.boundary_dp[m, idx]
    pref = _kernel_prefactor(n, ctx)
    half = (n - 1) / 2
    # beta_hat_{n-1}(s0) - beta_hat_{n-1}(s); Delta x(s0 - 1/2) = 0 at both anchors
    x_anchor_shift = anchor * (q**half + q**-half) / 2
    beta_gap = (
        -4 * q ** ((3 - n) / 2) * r * (1 - t * q ** (n - 2)) * (x_anchor_shift - p.x_at(half))
        + lambda_n(m, params) * p.dx_half
    )
    kappa = pref * (p_anchor * beta_gap - phi_big(s0, params) * dp_anchor / s0.dx_fwd) / diff
    kappa_bar = pref * phi_big(p, params) / diff * p_anchor
    return kappa, kappa_bar


def kernel_anchored(n: int, p: LatticePoint, anchor: int, ctx: FamilyContext):
    """``K_{n-1}(x(s), anchor)`` reconstructed from :func:`varkappa`."""
    kap, kap_bar = varkappa(n, p, anchor, ctx)
    pm, pm_next = _pn_and_neighbours(n - 1, p, ctx, (0, 1))
    return kap * pm + kap_bar * (pm_next - pm) / p.dx_fwd


_FORMS = ("sum", "cd", "forward", "backward")


def kernel_eval(n: int, p: LatticePoint, p0: LatticePoint, ctx: FamilyContext, form: str = "sum") -> KernelEval:
    """``K_n(x(s), x(s0))`` through the named form."""
    if form == "sum":
        value = kernel_sum(n, p.x, p0.x, ctx)
    elif form == "cd":
        value = kernel_cd(n, p.x, p0.x, ctx)
    elif form == "forward":
        value = kernel_forward(n, p, p0, ctx)
    elif form == "backward":
        value = kernel_backward(n, p, p0, ctx)
    else:
        raise ValueError(f"form must be one of {_FORMS}")
    return KernelEval(n, p.x, p0.x, complex(value), form)
