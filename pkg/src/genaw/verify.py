"""Quadrature, modified inner products and an independent moment oracle."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .askey_wilson import AWParams, FamilyContext, weight_theta
from .errors import IllConditioned, NoConvergence
from .gen_aw import MassConfig, boundary_values, gen_eval_all

BASE_NODES = 16
MAX_DOUBLINGS = 12
HANKEL_RESIDUAL = 1e-8
ORACLE_TOL = 1e-6


@dataclass(frozen=True)
class QuadratureRule:
    """Composite Gauss-Legendre rule in ``theta`` on ``[0, pi]``.

    Level ``k`` splits the interval into ``2**k`` equal panels, each carrying a
    ``BASE_NODES``-point rule, so a level has ``BASE_NODES * 2**k`` nodes.
    """

    nodes: np.ndarray
    weights: np.ndarray
    level: int

    @classmethod
    def at_level(cls, level: int) -> "QuadratureRule":
        return _rule(level)

    @property
    def x(self) -> np.ndarray:
        return np.cos(self.nodes)


@lru_cache(maxsize=1)
def _panel_rule():
    return np.polynomial.legendre.leggauss(BASE_NODES)


@lru_cache(maxsize=MAX_DOUBLINGS + 1)
def _rule(level: int) -> QuadratureRule:
    t, w = _panel_rule()
    panels = 2**level
    h = np.pi / panels
    left = h * np.arange(panels)[:, None]
    nodes = (left + h / 2 * (t + 1)).ravel()
    weights = np.tile(h / 2 * w, panels)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes, weights, level)


@dataclass(frozen=True)
class GramReport:
    n_max: int
    matrix: np.ndarray
    max_offdiag_rel: float
    max_diag_dev_rel: float
    norms_mod: np.ndarray
    level: int


def _call(f, x):
    try:
        out = np.asarray(f(x))
        if out.shape == x.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([f(v) for v in x])


def _adaptive(integrand, tol: float, what: str):
    """Double the rule until two levels agree to ``tol`` relative to ``sum |f| w``.

    ``integrand(rule)`` returns ``(value, magnitude)`` arrays.
    """
    prev, _ = integrand(_rule(0))
    for level in range(1, MAX_DOUBLINGS + 1):
        cur, mag = integrand(_rule(level))
        if np.all(np.abs(cur - prev) <= tol * np.maximum(mag, np.finfo(float).tiny)):
            return cur, level
        prev = cur
    raise NoConvergence(f"{what}: quadrature did not settle after {MAX_DOUBLINGS} doublings")


def integrate_weighted(f, params: AWParams, tol: float = 1e-12):
    """``int_{-1}^{1} f(x) rho(x) dx`` through ``x = cos theta``."""

    def integrand(rule):
        wt = weight_theta(rule.nodes, params) * rule.weights
        fx = _call(f, rule.x)
        return np.sum(fx * wt), np.sum(np.abs(fx) * np.abs(wt))

    value, _ = _adaptive(integrand, tol, "integrate_weighted")
    return value.real if np.iscomplexobj(value) and abs(value.imag) <= 1e-14 * max(abs(value), 1) else value


def inner_mod(f, g, params: AWParams, masses: MassConfig, tol: float = 1e-12):
    """``int f g rho + A f(-1) g(-1) + B f(1) g(1)``."""
    ends = np.array([-1.0, 1.0])
    fe, ge = _call(f, ends), _call(g, ends)
    bulk = integrate_weighted(lambda x: _call(f, x) * _call(g, x), params, tol)
    return bulk + masses.mass_neg * fe[0] * ge[0] + masses.mass_pos * fe[1] * ge[1]


def gram(n_max: int, ctx: FamilyContext, masses: MassConfig, tol: float = 1e-12) -> GramReport:
    """Gram matrix of ``P~_0, ..., P~_{n_max}`` under the modified inner product."""
    if n_max > ctx.n_max:
        raise ValueError(f"n_max={n_max} exceeds cached degree {ctx.n_max}")
    params = ctx.params

    def integrand(rule):
        vals = gen_eval_all(rule.x, ctx, masses, n_max).real
        wt = weight_theta(rule.nodes, params) * rule.weights
        g = (vals * wt) @ vals.T
        mag = (np.abs(vals) * np.abs(wt)) @ np.abs(vals).T
        return g, mag

    g, level = _adaptive(integrand, tol, "gram")
    ends = gen_eval_all(np.array([-1.0, 1.0]), ctx, masses, n_max).real
    g = g + masses.mass_neg * np.outer(ends[:, 0], ends[:, 0]) + masses.mass_pos * np.outer(ends[:, 1], ends[:, 1])
    g = (g + g.T) / 2
    norms = np.array([boundary_values(k, ctx, masses).norm_sq_mod.real for k in range(n_max + 1)])
    scale = np.sqrt(np.outer(norms, norms))
    off = np.abs(g) / scale
    np.fill_diagonal(off, 0.0)
    diag_dev = np.abs(np.diag(g) - norms) / norms
    return GramReport(n_max, g, float(off.max()), float(diag_dev.max()), norms, level)


def moments(k_max: int, params: AWParams, masses: MassConfig, tol: float = 1e-14) -> np.ndarray:
    """Modified moments ``m_k = int x^k rho dx + A (-1)^k + B`` for ``k <= k_max``."""
    k = np.arange(k_max + 1)

    def integrand(rule):
        wt = weight_theta(rule.nodes, params) * rule.weights
        powers = rule.x[None, :] ** k[:, None]
        return powers @ wt, np.abs(powers) @ np.abs(wt)

    m, _ = _adaptive(integrand, tol, "moments")
    return m + masses.mass_neg * (-1.0) ** k + masses.mass_pos


def moment_oracle(n_max: int, params: AWParams, masses: MassConfig, tol: float = 1e-14):
    """Monic orthogonal polynomials from Hankel solves on the moments.

    Raises :class:`IllConditioned` when the solve residual exceeds
    ``HANKEL_RESIDUAL`` or when ``cond(H) * eps`` exceeds ``ORACLE_TOL``.
    Returns a list of ascending coefficient vectors, entry ``n`` of length ``n + 1``.
    """
    m = moments(2 * n_max, params, masses, tol)
    out = [np.array([1.0])]
    for n in range(1, n_max + 1):
        H = np.array([[m[i + j] for j in range(n)] for i in range(n)])
        rhs = -m[n : 2 * n]
        try:
            c = np.linalg.solve(H, rhs)
        except np.linalg.LinAlgError as exc:
            raise IllConditioned(f"Hankel matrix at degree {n} is singular") from exc
        cond = np.linalg.cond(H)
        # a small residual alone says nothing about the forward error
        if not np.isfinite(cond) or cond * np.finfo(float).eps > ORACLE_TOL:
            raise IllConditioned(f"Hankel matrix at degree {n} has condition number {cond:.2e}")
        denom = max(np.linalg.norm(rhs), np.linalg.norm(H) * np.linalg.norm(c), np.finfo(float).tiny)
        resid = np.linalg.norm(H @ c - rhs) / denom
        if not np.isfinite(resid) or resid > HANKEL_RESIDUAL:
            raise IllConditioned(f"Hankel solve at degree {n} left residual {resid:.2e}")
        out.append(np.append(c, 1.0))
    return out


def poly_coeffs(fn, n: int) -> np.ndarray:
    """Ascending monomial coefficients of a degree-``n`` polynomial given by values.

    Interpolates at Chebyshev points of the first kind and converts the
    Chebyshev series to the power basis.
    """
    k = np.arange(n + 1)
    nodes = np.cos((2 * k + 1) * np.pi / (2 * (n + 1)))
    vals = _call(fn, nodes)
    cheb = np.polynomial.chebyshev.chebfit(nodes, vals, n)
    out = np.polynomial.chebyshev.cheb2poly(cheb)
    return np.pad(out, (0, n + 1 - len(out)))


def leading_coefficient(fn, n: int) -> complex:
    """Leading coefficient from the ``n``-th divided difference on Chebyshev points."""
    return poly_coeffs(fn, n)[-1]


def coeff_deviation(c1, c2) -> float:
    """``max |c1 - c2| / max |c1|`` over aligned coefficient vectors."""
    c1, c2 = np.asarray(c1), np.asarray(c2)
    return float(np.max(np.abs(c1 - c2)) / np.max(np.abs(c1)))
