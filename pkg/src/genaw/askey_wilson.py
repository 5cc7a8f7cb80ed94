"""Monic Askey-Wilson polynomials on the lattice ``x(s) = (q^s + q^-s)/2``.

Two independent evaluation routes are provided: the terminating 4phi3 series
(:func:`aw_eval_series`) and the three-term recurrence
(:func:`aw_eval_ttrr`).  Everything else (difference equation data,
differentiation formulas, weight, norms) is read off the classical table of
Askey-Wilson data.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import (
    DegenerateLatticePoint,
    InvalidParameters,
    OutOfInterval,
    SingularDenominator,
)
from .lattice import LatticePoint, point_from_qs
from .qkernel import COND_LIMIT, QMonomial as QM, _q, inf_terms, phi, qpoch, qpoch_inf_ratio

ZERO_GUARD = 1e-300
LATTICE_GUARD = 1e-13
TAIL_TOL = 1e-17


def _nonzero(value, what: str, exc=SingularDenominator):
    if abs(value) < ZERO_GUARD:
        raise exc(f"{what} vanishes")
    return value


@dataclass(frozen=True)
class AWParams:
    """Askey-Wilson parameters ``(a, b, c, d)`` and base ``q``.

    With ``check=True`` (the default) the parameters must be admissible for
    the orthogonality measure: ``max |a|,|b|,|c|,|d| < 1`` and the multiset
    closed under conjugation.  ``check=False`` keeps only the algebraic
    requirements and is meant for identity checks outside the measure's
    range.
    """

    a: complex
    b: complex
    c: complex
    d: complex
    q: float
    check: bool = True

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, complex(getattr(self, name)))
        try:
            object.__setattr__(self, "q", _q(self.q))
        except ValueError as exc:
            raise InvalidParameters(str(exc)) from None
        if self.a == 0:
            raise InvalidParameters("parameter a must be non-zero (it scales the series)")
        if self.check:
            if max(abs(v) for v in self.abcd_tuple) >= 1.0:
                raise InvalidParameters("admissibility violated: max(|a|,|b|,|c|,|d|) < 1")
            if not _conjugation_closed(self.abcd_tuple):
                raise InvalidParameters(
                    "admissibility violated: {a,b,c,d} must be real or complex conjugate pairs"
                )
        self.check_products(0)

    @property
    def abcd_tuple(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    @property
    def abcd(self) -> complex:
        return self.a * self.b * self.c * self.d

    @property
    def e1(self) -> complex:
        return self.a + self.b + self.c + self.d

    @property
    def e2(self) -> complex:
        return sum(u * v for u, v in combinations(self.abcd_tuple, 2))

    @property
    def e3(self) -> complex:
        a, b, c, d = self.abcd_tuple
        return a * b * c + a * b * d + a * c * d + b * c * d

    @property
    def pairs(self) -> list:
        """Pairwise products in the order ab, ac, ad, bc, bd, cd."""
        return [u * v for u, v in combinations(self.abcd_tuple, 2)]

    @property
    def is_real(self) -> bool:
        return _conjugation_closed(self.abcd_tuple)

    def check_products(self, n_max: int, tol: float = 1e-12) -> None:
        """Reject pairwise products equal to ``q^-m`` for ``0 <= m <= n_max``."""
        names = ["ab", "ac", "ad", "bc", "bd", "cd"]
        for name, p in zip(names, self.pairs):
            for m in range(n_max + 1):
                t = self.q ** (-m)
                if abs(p - t) <= tol * t:
                    raise InvalidParameters(
                        f"pairwise product {name} equals q^-{m}; recurrence denominators vanish"
                    )


def _conjugation_closed(vals, tol: float = 1e-14) -> bool:
    rest = list(vals)
    while rest:
        v = rest.pop()
        if abs(v.imag) <= tol * max(1.0, abs(v)):
            continue
        for i, w in enumerate(rest):
            if abs(w - v.conjugate()) <= tol * max(1.0, abs(v)):
                rest.pop(i)
                break
        else:
            return False
    return True


def _lattice_size(p: LatticePoint) -> float:
    # differences below this multiple are rounding noise
    return max(1.0, abs(p.qs), 1.0 / abs(p.qs))


def _qs(p):
    return p.qs if isinstance(p, LatticePoint) else complex(p)


def _x(p):
    if isinstance(p, LatticePoint):
        return p.x
    return p


# ---------------------------------------------------------------------------
# table data

def _qdiff(q):
    return q**0.5 - q**-0.5


def _scale(q):
    # common factor of sigma and Phi matching lambda_n's normalisation
    return -(q**0.5) * _qdiff(q) ** 2


def sigma(p: LatticePoint, params: AWParams) -> complex:
    """``sigma(s) = -q^{1/2} (q^{1/2}-q^{-1/2})^2 q^{-2s} prod (q^s - a)``."""
    z = _qs(p)
    out = _scale(params.q) * z**-2
    for v in params.abcd_tuple:
        out *= z - v
    return out


def phi_big(p: LatticePoint, params: AWParams) -> complex:
    """``Phi(s) = sigma(-s) = sigma(s) + tau(s) Delta x(s - 1/2)``."""
    z = _qs(p)
    out = _scale(params.q) * z**2
    for v in params.abcd_tuple:
        out *= 1 / z - v
    return out


def tau(p: LatticePoint, params: AWParams) -> complex:
    q = params.q
    k = 2 * q**0.5 * _qdiff(q)
    return 2 * k * (1 - params.abcd) * p.x - k * (params.e1 - params.e3)


def tau_n(n: int, p: LatticePoint, params: AWParams) -> complex:
    """``tau`` of the n-th difference derivative (parameters scaled by ``q^{n/2}``)."""
    q = params.q
    k = 2 * q**0.5 * _qdiff(q)
    return 2 * k * (1 - params.abcd * q ** (2 * n)) * p.x_at(n / 2) - k * (
        params.e1 * q ** (n / 2) - params.e3 * q ** (1.5 * n)
    )


def lambda_n(n: int, params: AWParams) -> complex:
    q = params.q
    return 4 * q ** (-n + 1) * (1 - q**n) * (1 - params.abcd * q ** (n - 1))


def sode_coeffs(p: LatticePoint, params: AWParams):
    """Coefficients ``(A_s, B_s, C_s)`` of the hypergeometric difference equation."""
    if min(abs(p.dx_fwd), abs(p.dx_bwd), abs(p.dx_half)) < LATTICE_GUARD * _lattice_size(p):
        raise DegenerateLatticePoint(f"lattice difference vanishes at q^s={p.qs}")
    A = (sigma(p, params) + tau(p, params) * p.dx_half) / (p.dx_fwd * p.dx_half)
    C = sigma(p, params) / (p.dx_bwd * p.dx_half)
    return A, -A - C, C


def ttrr_coeffs(n: int, params: AWParams):
    """Monic recurrence coefficients ``(beta_n, gamma_n)``; ``gamma_0 = 0``."""
    q = params.q
    a, b, c, d = params.abcd_tuple
    t = params.abcd
    qn = q**n

    def den(*facs):
        out = 1.0
        for f in facs:
            out *= _nonzero(f, "recurrence denominator")
        return out

    A_n = (1 - a * b * qn) * (1 - a * c * qn) * (1 - a * d * qn) * (1 - t * q ** (n - 1)) / (
        a * den(1 - t * q ** (2 * n - 1), 1 - t * q ** (2 * n))
    )
    if n == 0:
        C_n = 0.0
    else:
        C_n = a * (1 - qn) * (1 - b * c * q ** (n - 1)) * (1 - b * d * q ** (n - 1)) * (
            1 - c * d * q ** (n - 1)
        ) / den(1 - t * q ** (2 * n - 2), 1 - t * q ** (2 * n - 1))
    beta = 0.5 * (-A_n - C_n + a + 1 / a)
    if n == 0:
        return complex(beta), 0j
    num = 1 - qn
    for pr in params.pairs:
        num *= 1 - pr * q ** (n - 1)
    num *= 1 - t * q ** (n - 2)
    gamma = 0.25 * num / den(1 - t * q ** (2 * n - 3), 1 - t * q ** (2 * n - 2),
                             1 - t * q ** (2 * n - 2), 1 - t * q ** (2 * n - 1))
    return complex(beta), complex(gamma)


# ---------------------------------------------------------------------------
# evaluation

def ttrr_eval_all(x, n: int, beta, gamma):
    """Values ``P_0(x), ..., P_n(x)`` from the monic recurrence.

    ``x`` may be a scalar or an array; the result has a leading axis of
    length ``n + 1``.
    """
    x = np.asarray(x, dtype=complex)
    out = np.empty((n + 1,) + x.shape, dtype=complex)
    out[0] = 1.0
    if n >= 1:
        out[1] = x - beta[0]
    for k in range(1, n):
        out[k + 1] = (x - beta[k]) * out[k] - gamma[k] * out[k - 1]
    return out


@dataclass(frozen=True)
class FamilyContext:
    """Per-degree Askey-Wilson data cached for ``0 <= n <= n_max``.

    Recurrence coefficients are stored two degrees past ``n_max`` because
    kernels and the modified recurrence reach ``P_{n+1}`` and ``P_{n+2}``.
    """

    params: AWParams
    n_max: int
    beta: np.ndarray
    gamma: np.ndarray
    lam: np.ndarray
    norms: np.ndarray
    boundary_p: np.ndarray
    boundary_dp: np.ndarray

    @classmethod
    def build(cls, params: AWParams, n_max: int) -> "FamilyContext":
        params.check_products(n_max + 2)
        top = n_max + 2
        bg = [ttrr_coeffs(k, params) for k in range(top + 1)]
        beta = np.array([v[0] for v in bg])
        gamma = np.array([v[1] for v in bg])
        if np.any(np.abs(gamma[1:]) < ZERO_GUARD):
            raise InvalidParameters("quasi-definiteness violated: gamma_n = 0")
        lam = np.array([lambda_n(k, params) for k in range(top + 1)])
        norms = np.cumprod(np.concatenate([[1.0 + 0j], gamma[1:]]))
        q = params.q
        pts = np.array([-1.0, 1.0, -(q + 1 / q) / 2, (q + 1 / q) / 2], dtype=complex)
        vals = ttrr_eval_all(pts, top, beta, gamma)
        boundary_p = vals[:, :2].copy()
        boundary_dp = np.stack([vals[:, 2] - vals[:, 0], vals[:, 3] - vals[:, 1]], axis=1)
        return cls(params, n_max, beta, gamma, lam, norms, boundary_p, boundary_dp)

    def eval_all(self, x, n: int | None = None):
        n = self.n_max + 1 if n is None else n
        return ttrr_eval_all(x, n, self.beta, self.gamma)

    def p(self, n: int, x):
        if n < 0:
            return np.zeros_like(np.asarray(x, dtype=complex))
        return self.eval_all(x, n)[n]


def aw_eval_ttrr(n: int, x, ctx: FamilyContext):
    """Monic ``P_n(x)`` from the three-term recurrence."""
    if n > ctx.n_max + 1:
        raise ValueError(f"degree {n} exceeds cached n_max={ctx.n_max}")
    return ctx.p(n, _x(x))


def aw_eval_series(n: int, p, params: AWParams, form: str = "sears"):
    """Monic ``P_n(x(s))`` from its defining 4phi3.

    ``form="literal"`` sums the series exactly as defined, in the polynomial
    form ``(aq^s;q)_k (aq^-s;q)_k = (-a)^k q^{k(k-1)/2} prod_i [2x - aq^i - q^-i/a]``.
    Its terms grow like ``q^{-nk}`` and cancel, so beyond moderate degree it
    is summed with extra working digits.  ``form="sears"`` (default) sums the
    Sears-transformed series

        (ab;q)_n (c/z, d/z;q)_n z^n / (2^n (abcdq^{n-1};q)_n)
          * 4phi3(q^-n, az, bz, q^{1-n}/(cd); ab, q^{1-n}z/c, q^{1-n}z/d | q, q)

    with ``z = q^s``, which is well conditioned in double precision.  It
    falls back to the literal form when ``c`` or ``d`` vanishes or a
    transformed denominator does.

    ``p`` may be a lattice point, a scalar ``x`` or an array of ``x`` values.
    """
    if isinstance(p, LatticePoint):
        return _series_scalar(n, p.qs, params, form)
    x = np.asarray(p, dtype=complex)
    z = x + np.sqrt(x * x - 1)
    out = np.array([_series_scalar(n, zi, params, form) for zi in z.ravel()], dtype=complex)
    out = out.reshape(x.shape)
    return out[()] if out.ndim == 0 else out


def _series_scalar(n: int, z: complex, params: AWParams, form: str) -> complex:
    if form not in ("sears", "literal"):
        raise ValueError("form must be 'sears' or 'literal'")
    if n == 0:
        return 1.0 + 0j
    q = params.q
    a, b, c, d = params.abcd_tuple
    t = params.abcd
    if form == "sears" and c != 0 and d != 0:
        try:
            pref = qpoch(a * b, q, n) * qpoch(c / z, q, n) * qpoch(d / z, q, n) * z**n
            pref /= _nonzero(2.0**n * qpoch(t * q ** (n - 1), q, n), "(abcdq^{n-1}; q)_n")
            s = phi(
                [QM(power=-n), QM((a, z)), QM((b, z)), QM((), (c, d), 1 - n)],
                [QM((a, b)), QM((z,), (c,), 1 - n), QM((z,), (d,), 1 - n)],
                q,
                q,
            )
            return pref * s
        except ZeroDivisionError:
            pass
    return _literal_series(n, 0.5 * (z + 1 / z), params)


def _literal_series(n: int, x: complex, params: AWParams) -> complex:
    q = params.q
    a, b, c, d = params.abcd_tuple
    t = params.abcd
    pref = qpoch(a * b, q, n) * qpoch(a * c, q, n) * qpoch(a * d, q, n)
    pref /= _nonzero((2 * a) ** n * qpoch(t * q ** (n - 1), q, n), "series prefactor")
    terms = [1.0 + 0j]
    term = 1.0 + 0j
    for k in range(n):
        qk = q**k
        ratio = (1 - q ** (-n) * qk) * (1 - t * q ** (n - 1) * qk)
        ratio /= _nonzero((1 - a * b * qk) * (1 - a * c * qk) * (1 - a * d * qk) * (1 - q ** (k + 1)),
                          "(ab, ac, ad; q)_k")
        ratio *= q * (-a * qk)
        term = term * ratio * (2 * x - (a * qk + 1 / (a * qk)))
        terms.append(term)
    total = sum(terms)
    size = sum(abs(v) for v in terms)
    if total == 0 or size / abs(total) > COND_LIMIT:
        # same series through the generic summation, which adds working digits
        z = x + cmath.sqrt(x * x - 1)
        total = phi(_lit_num(n, params, QM((a, z)), QM((a,), (z,))), _lit_den(params), q, q)
    return pref * total


def _lit_num(n, params, u, v):
    a, b, c, d = params.abcd_tuple
    return [QM(power=-n), QM((a, b, c, d), (), n - 1), u, v]


def _lit_den(params):
    a, b, c, d = params.abcd_tuple
    return [QM((a, b)), QM((a, c)), QM((a, d))]


def _prefactor(n, params):
    q = params.q
    a = params.a
    pref = qpoch(a * params.b, q, n) * qpoch(a * params.c, q, n) * qpoch(a * params.d, q, n)
    return pref / _nonzero((2 * a) ** n * qpoch(params.abcd * q ** (n - 1), q, n), "series prefactor")


def aw_at_pm1(n: int, params: AWParams):
    """``(P_n(-1), P_n(+1))`` from the 4phi3 with lattice parameters ``(-a, -a)`` and ``(a, a)``."""
    a = params.a
    q = params.q
    lo = phi(_lit_num(n, params, QM((-a,)), QM((-a,))), _lit_den(params), q, q)
    hi = phi(_lit_num(n, params, QM((a,)), QM((a,))), _lit_den(params), q, q)
    pref = _prefactor(n, params)
    return pref * lo, pref * hi


def aw_delta_at_pm1(n: int, params: AWParams):
    """``(Delta P_n(-1), Delta P_n(+1))`` with ``Delta P(s) = P(s+1) - P(s)``.

    From ``q^s = -1`` the forward step lands on ``q^s = -q``, so the lattice
    parameters of the 4phi3 become ``(-aq, -a/q)``; from ``q^s = 1`` they
    become ``(aq, a/q)``.
    """
    a = params.a
    q = params.q
    p_lo, p_hi = aw_at_pm1(n, params)
    pref = _prefactor(n, params)
    s_lo = phi(_lit_num(n, params, QM((-a,), (), 1), QM((-a,), (), -1)), _lit_den(params), q, q)
    s_hi = phi(_lit_num(n, params, QM((a,), (), 1), QM((a,), (), -1)), _lit_den(params), q, q)
    return pref * s_lo - p_lo, pref * s_hi - p_hi


# ---------------------------------------------------------------------------
# weight and norms

def _h_product(cos_t, sin_t, alpha, q, K):
    """``h(x, alpha) = prod_k (1 - 2 alpha x q^k + alpha^2 q^2k)`` on arrays."""
    out = np.ones_like(cos_t, dtype=complex)
    for k in range(K):
        aq = alpha * q**k
        out *= 1 - 2 * aq * cos_t + aq * aq
    return out


def weight_theta(theta, params: AWParams, tail_tol: float = TAIL_TOL):
    """Density in ``theta`` (``x = cos theta``) of the probability measure.

    ``w(theta) d theta = rho(x) dx``; the ``1/sqrt(1-x^2)`` factor of ``rho``
    cancels against ``dx = -sin theta d theta``.
    """
    q = params.q
    theta = np.asarray(theta, dtype=float)
    cos_t = np.cos(theta)
    sin_t = np.sin(theta)
    num_alphas = [1.0, -1.0, q**0.5, -(q**0.5)]
    den_alphas = list(params.abcd_tuple)
    K = max(inf_terms(max(1.0, max(abs(v) for v in den_alphas)) ** 2, q, tail_tol), 1)
    ratio = np.ones_like(cos_t, dtype=complex)
    for k in range(K):
        qk = q**k
        for al in num_alphas:
            aq = al * qk
            ratio *= 1 - 2 * aq * cos_t + aq * aq
        for al in den_alphas:
            aq = al * qk
            ratio /= 1 - 2 * aq * cos_t + aq * aq
    const = qpoch_inf_ratio([q] + params.pairs, [params.abcd], q, tail_tol)
    w = const * ratio / (2 * math.pi)
    return w.real


def aw_weight(x, params: AWParams, tail_tol: float = TAIL_TOL):
    """Normalised weight ``rho(x)`` on ``(-1, 1)`` (a probability density)."""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) >= 1.0):
        raise OutOfInterval("the weight is evaluated only for |x| < 1")
    theta = np.arccos(x)
    out = weight_theta(theta, params, tail_tol) / np.sqrt(1.0 - x * x)
    return out[()] if out.ndim == 0 else out


def norm_sq(n: int, params: AWParams, tail_tol: float = TAIL_TOL) -> complex:
    """``d_n^2`` from the infinite-product formula (probability normalisation)."""
    q = params.q
    t = params.abcd
    qn = q**n
    num = [q] + params.pairs + [t * q ** (2 * n)]
    den = [q ** (n + 1)] + [pr * qn for pr in params.pairs] + [t]
    ratio = qpoch_inf_ratio(num, den, q, tail_tol)
    return 2.0 ** (-2 * n) * ratio / _nonzero(qpoch(t * q ** (n - 1), q, n), "(abcdq^{n-1}; q)_n")


# ---------------------------------------------------------------------------
# differentiation formulas and the shift relation

def diff_coeffs(n: int, p: LatticePoint, params: AWParams):
    """``(alpha_bar_n, beta_bar_n(s), beta_hat_n(s))``; ``alpha_hat_n = alpha_bar_n``.

    ``beta_bar_n(s) = (lambda_n / [n]_q) tau_n(s) / tau_n'`` where ``tau_n'``
    is the coefficient of ``x(s + n/2)`` in ``tau_n``.
    """
    q = params.q
    r = _qdiff(q)
    t = params.abcd
    alpha_bar = 4 * q ** (-n + 1) * r * (1 - t * q ** (2 * n - 1))
    lead = _nonzero(1 - t * q ** (2 * n), "1 - abcd q^{2n}")
    shift = (params.e1 * q ** (n / 2) - params.e3 * q ** (1.5 * n)) / (2 * lead)
    lam_over_bracket = -4 * q ** (-n / 2 + 1) * r * (1 - t * q ** (n - 1))
    beta_bar = lam_over_bracket * (p.x_at(n / 2) - shift)
    beta_hat = beta_bar - lambda_n(n, params) * p.dx_half
    return alpha_bar, beta_bar, beta_hat


def theta_xi(n: int, p: LatticePoint, params: AWParams):
    """``(Theta(s,n), Xi(s,n))`` with ``P_{n-1}(s) = Theta P_n(s) + Xi P_n(s+1)``."""
    if n < 1:
        raise ValueError("the shift relation needs n >= 1")
    if abs(p.dx_fwd) < LATTICE_GUARD * _lattice_size(p):
        raise DegenerateLatticePoint(f"Delta x(s) vanishes at q^s={p.qs}")
    beta_n, gamma_n = ttrr_coeffs(n, params)
    alpha_hat, _, beta_hat = diff_coeffs(n, p, params)
    pref = 1 / _nonzero(alpha_hat * gamma_n, "alpha_hat_n gamma_n")
    ratio = phi_big(p, params) / p.dx_fwd
    xi = -pref * ratio
    theta = pref * (ratio + alpha_hat * (p.x - beta_n) + beta_hat)
    return theta, xi


__all__ = [
    "AWParams",
    "FamilyContext",
    "aw_at_pm1",
    "aw_delta_at_pm1",
    "aw_eval_series",
    "aw_eval_ttrr",
    "aw_weight",
    "diff_coeffs",
    "lambda_n",
    "norm_sq",
    "phi_big",
    "point_from_qs",
    "sigma",
    "sode_coeffs",
    "tau",
    "tau_n",
    "theta_xi",
    "ttrr_coeffs",
    "ttrr_eval_all",
    "weight_theta",
]
