"""Generalized Askey-Wilson polynomials with point masses at x = -1 and x = +1.

The polynomials are orthogonal with respect to
``<u, f> + A f(-1) + B f(+1)``, where ``u`` is the Askey-Wilson
functional.  Every evaluation route reduces to classical data held in a
:class:`~genaw.askey_wilson.FamilyContext`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .askey_wilson import (
    AWParams,
    FamilyContext,
    _qdiff,
    sode_coeffs,
    theta_xi,
    ttrr_coeffs,
    ttrr_eval_all,
)
from .cd_kernels import kernel_sum, varkappa
from .errors import (
    ConfluentPoints,
    DegenerateKappaS,
    InvalidParameters,
    SingularKappa,
)
from .lattice import LatticePoint, point_from_qs
from .qkernel import QMonomial as QM, phi, qpoch, qbracket

KAPPA_GUARD = 1e-13
MASS_POINT_RADIUS = 1e-6


@dataclass(frozen=True)
class MassConfig:
    """Point masses ``A`` at ``x = -1`` and ``B`` at ``x = +1``."""

    mass_neg: float = 0.0
    mass_pos: float = 0.0
    check: bool = True

    def __post_init__(self):
        object.__setattr__(self, "mass_neg", float(self.mass_neg))
        object.__setattr__(self, "mass_pos", float(self.mass_pos))
        if self.check and (self.mass_neg < 0 or self.mass_pos < 0):
            raise InvalidParameters("masses must be non-negative")

    @property
    def is_zero(self) -> bool:
        return self.mass_neg == 0 and self.mass_pos == 0


@dataclass(frozen=True)
class GenBoundary:
    n: int
    p_neg: complex
    p_pos: complex
    kappa_det: complex
    norm_sq_mod: complex


def _x(p):
    return p.x if isinstance(p, LatticePoint) else p


def _as_point(p, q) -> LatticePoint:
    if isinstance(p, LatticePoint):
        return p
    x = complex(p)
    return point_from_qs(x + np.sqrt(x * x - 1), q)


def boundary_values(n: int, ctx: FamilyContext, masses: MassConfig) -> GenBoundary:
    """Solve the 2x2 system for ``P~_n(-1)``, ``P~_n(+1)``."""
    A, B = masses.mass_neg, masses.mass_pos
    pm, pp = ctx.boundary_p[n]
    if n == 0:
        return GenBoundary(0, 1.0 + 0j, 1.0 + 0j, 1.0 + 0j, ctx.norms[0] + A + B)
    w = 1.0 / ctx.norms[:n]
    bm, bp = ctx.boundary_p[:n, 0], ctx.boundary_p[:n, 1]
    k_mm = np.sum(bm * bm * w)
    k_mp = np.sum(bm * bp * w)
    k_pp = np.sum(bp * bp * w)
    kappa = (1 + A * k_mm) * (1 + B * k_pp) - A * B * k_mp * k_mp
    if abs(kappa) < KAPPA_GUARD:
        raise SingularKappa(f"kappa_{n - 1}(-1, 1) = {kappa} vanishes; masses {A}, {B} are invalid")
    p_neg = ((1 + B * k_pp) * pm - B * k_mp * pp) / kappa
    p_pos = ((1 + A * k_mm) * pp - A * k_mp * pm) / kappa
    norm_mod = ctx.norms[n] + A * p_neg * pm + B * p_pos * pp
    return GenBoundary(n, p_neg, p_pos, kappa, norm_mod)


def gen_eval_kernelrep(n: int, x, ctx: FamilyContext, masses: MassConfig):
    """``P~_n(x) = P_n(x) - A P~_n(-1) K_{n-1}(x,-1) - B P~_n(1) K_{n-1}(x,1)``."""
    x = _x(x)
    pn = ctx.p(n, x)
    if n == 0 or masses.is_zero:
        return pn
    bv = boundary_values(n, ctx, masses)
    out = (
        pn
        - masses.mass_neg * bv.p_neg * kernel_sum(n - 1, x, -1.0, ctx)
        - masses.mass_pos * bv.p_pos * kernel_sum(n - 1, x, 1.0, ctx)
    )
    return out


def gen_eval_all(x, ctx: FamilyContext, masses: MassConfig, n: int | None = None):
    """Values ``P~_0(x), ..., P~_n(x)`` stacked along a leading axis."""
    n = ctx.n_max if n is None else n
    x = np.asarray(x, dtype=complex)
    vals = ctx.eval_all(x, n)
    if masses.is_zero:
        return vals
    at_m = ctx.eval_all(-1.0, n)
    at_p = ctx.eval_all(1.0, n)
    w = (1.0 / ctx.norms[: n + 1]).reshape((-1,) + (1,) * x.ndim)
    km = np.cumsum(vals * at_m.reshape((-1,) + (1,) * x.ndim) * w, axis=0)
    kp = np.cumsum(vals * at_p.reshape((-1,) + (1,) * x.ndim) * w, axis=0)
    out = vals.copy()
    for k in range(1, n + 1):
        bv = boundary_values(k, ctx, masses)
        out[k] = vals[k] - masses.mass_neg * bv.p_neg * km[k - 1] - masses.mass_pos * bv.p_pos * kp[k - 1]
    return out


def gen_eval_diffrep(n: int, p: LatticePoint, ctx: FamilyContext, masses: MassConfig,
                     fallback: bool = False):
    """Forward-difference representation ``P_n + A_bar P_{n-1} + B_bar Delta P_{n-1}/Delta x``.

    The coefficients have poles at ``x = -+1``.  Within ``MASS_POINT_RADIUS``
    of a mass point this raises :class:`ConfluentPoints`, or, with
    ``fallback=True``, returns the kernel representation instead.
    """
    if n == 0 or masses.is_zero:
        return ctx.p(n, p.x)
    if min(abs(p.x - 1), abs(p.x + 1)) < MASS_POINT_RADIUS:
        if fallback:
            return gen_eval_kernelrep(n, p.x, ctx, masses)
        raise ConfluentPoints("point lies within the exclusion disk around a mass point")
    bv = boundary_values(n, ctx, masses)
    km, km_bar = varkappa(n, p, -1, ctx)
    kp, kp_bar = varkappa(n, p, 1, ctx)
    A, B = masses.mass_neg, masses.mass_pos
    a_bar = -A * bv.p_neg * km - B * bv.p_pos * kp
    b_bar = -A * bv.p_neg * km_bar - B * bv.p_pos * kp_bar
    pn = ctx.p(n, p.x)
    pm = ctx.p(n - 1, p.x)
    pm_next = ctx.p(n - 1, p.x_at(1))
    return pn + a_bar * pm + b_bar * (pm_next - pm) / p.dx_fwd


def rep_coeffs(n: int, p, ctx: FamilyContext, masses: MassConfig):
    """``(phi(s), A(s,n), B(s,n))`` with ``phi P~_n = A P_n + B P_{n-1}``."""
    if n < 1:
        raise ValueError("the two-term representation needs n >= 1")
    x = _x(p)
    phi_s = x * x - 1
    bv = boundary_values(n, ctx, masses)
    A, B = masses.mass_neg, masses.mass_pos
    pm_prev, pp_prev = ctx.boundary_p[n - 1]
    pm, pp = ctx.boundary_p[n]
    inv = 1.0 / ctx.norms[n - 1]
    coef_a = phi_s - inv * (A * bv.p_neg * pm_prev * (x - 1) + B * bv.p_pos * pp_prev * (x + 1))
    coef_b = inv * (A * bv.p_neg * pm * (x - 1) + B * bv.p_pos * pp * (x + 1))
    return phi_s, coef_a, coef_b


def gen_eval_rep(n: int, p, ctx: FamilyContext, masses: MassConfig):
    """``phi(s) P~_n(s)`` from the two-term representation."""
    if n == 0:
        x = _x(p)
        return x * x - 1
    _, ca, cb = rep_coeffs(n, p, ctx, masses)
    x = _x(p)
    return ca * ctx.p(n, x) + cb * ctx.p(n - 1, x)


def _ab_shift(n, p: LatticePoint, ctx, masses):
    """``(a(s;n), b(s;n))`` of the shifted two-term representation."""
    _, ca, cb = rep_coeffs(n, p, ctx, masses)
    th, xi = theta_xi(n, p, ctx.params)
    return ca + cb * th, cb * xi


def shift_rep_coeffs(n: int, p: LatticePoint, ctx: FamilyContext, masses: MassConfig):
    """Coefficients ``(a, b, u, c, d, v, e, f)`` of the three shifted representations.

    ``phi P~_n(s) = a P_n(s) + b P_n(s+1)``,
    ``u P~_n(s+1) = c P_n(s) + d P_n(s+1)``,
    ``v P~_n(s-1) = e P_n(s) + f P_n(s+1)``.
    """
    params = ctx.params
    lam = ctx.lam[n]
    up, dn = p.shift(1), p.shift(-1)
    a, b = _ab_shift(n, p, ctx, masses)
    a_up, b_up = _ab_shift(n, up, ctx, masses)
    a_dn, b_dn = _ab_shift(n, dn, ctx, masses)
    As, Bs, Cs = sode_coeffs(p, params)
    As1, Bs1, Cs1 = sode_coeffs(up, params)
    u = As1 * (up.x**2 - 1)
    c = -Cs1 * b_up
    d = As1 * a_up - b_up * (lam + Bs1)
    v = Cs * (dn.x**2 - 1)
    e = Cs * b_dn - a_dn * (lam + Bs)
    f = -As * a_dn
    return a, b, u, c, d, v, e, f


def sode_tilde_coeffs(n: int, p: LatticePoint, ctx: FamilyContext, masses: MassConfig):
    """Coefficients of ``phi~ P~(s-1) + varphi~ P~(s) + xi~ P~(s+1) = 0``."""
    a, b, u, c, d, v, e, f = shift_rep_coeffs(n, p, ctx, masses)
    phi_s = p.x**2 - 1
    return v * (a * d - b * c), phi_s * (c * f - d * e), u * (b * e - a * f)


def determinant_residual(n: int, p: LatticePoint, ctx: FamilyContext, masses: MassConfig):
    """3x3 determinant of the shifted representations and its largest expansion term."""
    a, b, u, c, d, v, e, f = shift_rep_coeffs(n, p, ctx, masses)
    vals = [gen_eval_kernelrep(n, p.x_at(k), ctx, masses) for k in (0, 1, -1)]
    col = [(p.x**2 - 1) * vals[0], u * vals[1], v * vals[2]]
    m = np.array([[col[0], a, b], [col[1], c, d], [col[2], e, f]], dtype=complex)
    terms = [col[0] * (c * f - d * e), -col[1] * (a * f - b * e), col[2] * (a * d - b * c)]
    return np.linalg.det(m), max(abs(t) for t in terms)


def gen_ttrr_coeffs(n: int, ctx: FamilyContext, masses: MassConfig):
    """``(beta~_n, gamma~_n, Delta_n)`` of the monic modified recurrence."""
    A, B = masses.mass_neg, masses.mass_pos

    def delta(k):
        if k < 0:
            return 0.0
        bv = boundary_values(k, ctx, masses)
        pm, pp = ctx.boundary_p[k]
        return (A * bv.p_neg * pm + B * bv.p_pos * pp) / ctx.norms[k]

    def shift_term(k):
        # coefficient drop from x^{k-1}: (A P~_k(-1) P_{k-1}(-1) + B P~_k(1) P_{k-1}(1)) / d_{k-1}^2
        if k < 1:
            return 0.0
        bv = boundary_values(k, ctx, masses)
        pm, pp = ctx.boundary_p[k - 1]
        return (A * bv.p_neg * pm + B * bv.p_pos * pp) / ctx.norms[k - 1]

    beta_t = ctx.beta[n] - shift_term(n) + shift_term(n + 1)
    d_n = delta(n)
    gamma_t = ctx.gamma[n] * (1 + d_n) / (1 + delta(n - 1)) if n >= 1 else 0.0 * d_n
    return beta_t, gamma_t, d_n


def vartheta(n: int, params: AWParams, printed: bool = False) -> complex:
    """Coefficient ``vartheta_n`` of the linear factor in the 5phi4 representation.

    ``printed=True`` uses the factor ``(1 - abcd q^{2n-4})`` in place of
    ``(1 - abcd q^{2n-2})``; only the latter reproduces the two-term
    representation.
    """
    q = params.q
    a, b, c, d = params.abcd_tuple
    t = params.abcd
    last = 2 * n - 4 if printed else 2 * n - 2
    return (
        (1 - a * b * q ** (n - 1)) * (1 - a * c * q ** (n - 1)) * (1 - a * d * q ** (n - 1))
        * (1 - q ** (-n))
        / (2 * a * (1 - t * q ** (2 * n - 3)) * (1 - t * q**last))
    )


def q_kappa(n: int, p, ctx: FamilyContext, masses: MassConfig, printed: bool = False):
    """``(q^{kappa(s)}, bracket)`` where the linear factor is ``-bracket (q^k - q^kappa) / (1 - q^-n)``."""
    params = ctx.params
    q = params.q
    _, ca, cb = rep_coeffs(n, p, ctx, masses)
    th = vartheta(n, params, printed)
    bracket = ca * params.abcd * q ** (n - 2) * th + cb * q ** (-n)
    if abs(bracket) < 1e-300:
        raise DegenerateKappaS("linear factor bracket vanishes; q^kappa(s) undefined")
    return (ca * th + cb) / bracket, bracket


def gen_eval_5phi4(n: int, p, ctx: FamilyContext, masses: MassConfig, printed: bool = False):
    """``phi(s) P~_n(s)`` as ``D_n(s)`` times a terminating 5phi4."""
    params = ctx.params
    q = params.q
    p = _as_point(p, q)
    if n == 0:
        return p.x**2 - 1
    a, b, c, d = params.abcd_tuple
    t = params.abcd
    qk, bracket = q_kappa(n, p, ctx, masses, printed)
    if abs(qk) < 1e-300:
        raise DegenerateKappaS("q^kappa(s) vanishes")
    z = p.qs
    pref = qpoch(a * b, q, n - 1) * qpoch(a * c, q, n - 1) * qpoch(a * d, q, n - 1)
    pref /= (2 * a) ** (n - 1) * qpoch(t * q ** (n - 2), q, n - 1)
    D = -pref * (1 - qk) / (1 - q ** (-n)) * bracket
    try:
        s = phi(
            [QM(power=-n), QM((a, b, c, d), (), n - 2), QM((a, z)), QM((a,), (z,)), q / qk],
            [QM((a, b)), QM((a, c)), QM((a, d)), 1 / qk],
            q,
            q,
        )
    except ZeroDivisionError as exc:
        raise DegenerateKappaS(f"q^-kappa(s) truncates the series: {exc}") from None
    return D * s


def racah_identity_check(n: int, t: float, racah_params, q: float):
    """Relative gap between scaled Askey-Wilson and q-Racah evaluations.

    The Askey-Wilson side runs through the three-term recurrence, the
    q-Racah side through its 4phi3, so the two routes share no algebra.
    """
    at, bt, al, be = racah_params
    aw = AWParams(q ** (at + 0.5), q ** (be - at + 0.5), q ** (al + bt + 0.5), q ** (-bt + 0.5), q,
                  check=False)
    r = _qdiff(q)
    x = (q ** (t + 0.5) + q ** (-t - 0.5)) / 2
    bg = [ttrr_coeffs(k, aw) for k in range(max(n, 1))]
    beta = [v[0] for v in bg]
    gamma = [v[1] for v in bg]
    lhs = 2.0**n / r ** (2 * n) * ttrr_eval_all(x, n, beta, gamma)[n]
    den = [QM(power=at - bt + 1), QM(power=be + 1), QM(power=at + bt + al + 1)]
    pref = q ** (-n / 2 * (2 * at + 1)) / r ** (2 * n)
    for v in den:
        pref *= qpoch(v.value(q), q, n)
    pref /= qpoch(q ** (al + be + n + 1), q, n)
    rhs = pref * phi(
        [QM(power=-n), QM(power=al + be + n + 1), QM(power=at - t), QM(power=t + at + 1)],
        den,
        q,
        q,
    )
    scale = max(abs(lhs), abs(rhs))
    return 0.0 if scale == 0 else abs(lhs - rhs) / scale


def mu_lattice(t: float, q: float) -> float:
    """q-Racah lattice ``mu(t) = [t]_q [t+1]_q``."""
    return qbracket(t, q) * qbracket(t + 1, q)
