"""q-Pochhammer symbols, q-numbers and terminating basic hypergeometric series.

All arithmetic is complex double precision.  Functions accept the base either
as a plain float or as a :class:`QBase`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DenominatorVanished, NonConvergent

TERMINATION_TOL = 1e-14
DENOM_GUARD = 1e-300
MAX_INF_TERMS = 10**6


@dataclass(frozen=True)
class QBase:
    """The base ``q`` with the standing assumption ``0 < q < 1``."""

    q: float

    def __post_init__(self):
        q = float(self.q)
        if not 0.0 < q < 1.0:
            raise ValueError(f"base q must satisfy 0 < q < 1, got {self.q!r}")
        object.__setattr__(self, "q", q)

    def __float__(self):
        return self.q


def _q(q) -> float:
    if isinstance(q, QBase):
        return q.q
    return QBase(q).q


def qpoch(z, q, k: int) -> complex:
    """Finite q-Pochhammer symbol ``(z; q)_k = prod_{i<k} (1 - z q^i)``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    q = _q(q)
    z = complex(z)
    out = 1.0 + 0.0j
    for i in range(k):
        out *= 1.0 - z * q**i
    return out


def qpoch_multi(zs: Sequence, q, k: int) -> complex:
    if len(zs) == 0:
        raise ValueError("need at least one argument")
    out = 1.0 + 0.0j
    for z in zs:
        out *= qpoch(z, q, k)
    return out


def inf_terms(z, q, tail_tol: float) -> int:
    """Number of factors K with ``|z| q^K / (1 - q) < tail_tol``."""
    if tail_tol <= 0:
        raise ValueError("tail_tol must be positive")
    q = _q(q)
    az = abs(complex(z))
    if az == 0.0:
        return 0
    bound = tail_tol * (1.0 - q) / az
    if bound >= 1.0:
        return 0
    K = math.ceil(math.log(bound) / math.log(q))
    while az * q**K / (1.0 - q) >= tail_tol:
        K += 1
    if K > MAX_INF_TERMS:
        raise NonConvergent(f"infinite product needs {K} factors (> {MAX_INF_TERMS})")
    return K


def qpoch_inf(z, q, tail_tol: float = 1e-17) -> complex:
    """Truncated infinite product ``(z; q)_inf``.

    The truncation point K is the smallest with ``|z| q^K / (1-q) < tail_tol``,
    which bounds the relative error by ``exp(|z| q^K / (1-q)) - 1``.
    """
    return qpoch(z, q, inf_terms(z, q, tail_tol))


def qpoch_inf_ratio(num: Sequence, den: Sequence, q, tail_tol: float = 1e-17) -> complex:
    """Ratio of infinite products with one shared truncation length.

    Evaluated as a single running fraction so that tiny individual products
    never appear.
    """
    q = _q(q)
    K = max([inf_terms(z, q, tail_tol) for z in list(num) + list(den)] + [0])
    out = 1.0 + 0.0j
    for i in range(K):
        qi = q**i
        for z in num:
            out *= 1.0 - complex(z) * qi
        for z in den:
            fac = 1.0 - complex(z) * qi
            if abs(fac) < DENOM_GUARD:
                raise DenominatorVanished(f"factor (1 - {z} q^{i}) vanished")
            out /= fac
    return out


def qbracket(n, q) -> float:
    """Symmetric q-number ``(q^{n/2} - q^{-n/2}) / (q^{1/2} - q^{-1/2})``."""
    q = _q(q)
    return (q ** (n / 2) - q ** (-n / 2)) / (q**0.5 - q**-0.5)


@dataclass(frozen=True)
class QMonomial:
    """A series parameter ``prod(num) / prod(den) * q**power``.

    Keeping the factors separate lets ill-conditioned sums rebuild the
    parameter exactly from its float inputs at higher working precision.
    """

    num: tuple = ()
    den: tuple = ()
    power: float = 0

    def value(self, q: float) -> complex:
        out = complex(q**self.power)
        for v in self.num:
            out *= v
        for v in self.den:
            out /= v
        return out

    def mp_value(self, ctx, q):
        out = ctx.mpf(q) ** self.power
        for v in self.num:
            out *= ctx.mpc(v)
        for v in self.den:
            out /= ctx.mpc(v)
        return out


def _value(p, q) -> complex:
    return p.value(q) if isinstance(p, QMonomial) else complex(p)


def terminating_degree(param, q, tol: float = TERMINATION_TOL) -> int | None:
    """Return n if ``param == q^{-n}`` for an integer ``n >= 0``, else None."""
    q = _q(q)
    if isinstance(param, QMonomial) and not param.num and not param.den:
        e = param.power
        if e <= 0 and float(e).is_integer():
            return int(-e)
    p = _value(param, q)
    if p == 0:
        return None
    n = round(-math.log(abs(p)) / math.log(q))
    if n < 0:
        return None
    target = q ** (-n)
    if abs(p - target) <= tol * max(1.0, target):
        return n
    return None


@dataclass(frozen=True)
class SeriesSpec:
    """Parameters of a basic hypergeometric series ``r+1 phi r``.

    Parameters may be plain numbers or :class:`QMonomial` instances.
    """

    numerator_params: tuple
    denominator_params: tuple
    argument: complex
    max_terms: int = 10_000

    def terms_needed(self, q) -> int:
        degs = [terminating_degree(p, q) for p in self.numerator_params]
        degs = [d for d in degs if d is not None]
        if not degs:
            raise ValueError("series does not terminate: no numerator parameter is q^{-n}")
        n = min(degs)
        if n + 1 > self.max_terms:
            raise ValueError(f"series needs {n + 1} terms, max_terms={self.max_terms}")
        return n + 1


COND_LIMIT = 1e4


def phi_terminating(spec: SeriesSpec, q, *, exact_fallback: bool = True) -> complex:
    """Sum a terminating basic hypergeometric series.

    Uses the Gasper-Rahman convention with an extra ``(q;q)_k`` in the
    denominator.  Terms are generated by their ratio, which stays O(1)
    even when the individual Pochhammer factors do not.

    Terminating series with argument ``q`` can cancel heavily (terms grow
    like ``q^{-nk}``).  When the double-precision sum loses more than
    ``log10(COND_LIMIT)`` digits it is recomputed with enough extra working
    digits.  Only :class:`QMonomial` parameters are rebuilt exactly; plain
    numbers are taken at face value, so pass monomials wherever rounding of
    a parameter would be amplified by the cancellation.
    """
    q = _q(q)
    nterms = spec.terms_needed(q)
    num = [_value(p, q) for p in spec.numerator_params]
    den = [_value(p, q) for p in spec.denominator_params]
    z = complex(spec.argument)
    term = 1.0 + 0.0j
    total = term
    size = 1.0
    for k in range(nterms - 1):
        qk = q**k
        ratio = z / (1.0 - q ** (k + 1))
        for a in num:
            ratio *= 1.0 - a * qk
        for b in den:
            fac = 1.0 - b * qk
            if abs(fac) < DENOM_GUARD:
                raise DenominatorVanished(f"denominator (1 - {b} q^{k}) vanished")
            ratio /= fac
        term *= ratio
        total += term
        size += abs(term)
    cond = size / abs(total) if total != 0 else math.inf
    if exact_fallback and cond > COND_LIMIT and math.isfinite(size):
        digits = 20 + math.ceil(math.log10(cond)) if math.isfinite(cond) else 40 + 2 * nterms
        return _phi_mp(spec, z, q, nterms, digits)
    return total


def _phi_mp(spec: SeriesSpec, z, q, nterms, digits) -> complex:
    import mpmath

    ctx = mpmath.mp.clone()

    def conv(p):
        return p.mp_value(ctx, q) if isinstance(p, QMonomial) else ctx.mpc(p)

    for _ in range(8):
        ctx.dps = digits
        q_ = ctx.mpf(q)
        num_ = [conv(a) for a in spec.numerator_params]
        den_ = [conv(b) for b in spec.denominator_params]
        z_ = ctx.mpc(z)
        term = ctx.mpc(1)
        total = ctx.mpc(1)
        size = ctx.mpf(1)
        for k in range(nterms - 1):
            qk = q_**k
            ratio = z_ / (1 - q_ ** (k + 1))
            for a in num_:
                ratio *= 1 - a * qk
            for b in den_:
                ratio /= 1 - b * qk
            term *= ratio
            total += term
            size += abs(term)
        # keep at least 20 correct digits after cancellation
        lost = float(ctx.log10(size / abs(total))) if total != 0 else digits
        if lost < digits - 20:
            return complex(total)
        digits = int(digits + lost + 10)
    raise NonConvergent("terminating series cancels beyond the working-precision budget")


def phi(numerator, denominator, argument, q) -> complex:
    """Convenience wrapper around :func:`phi_terminating`."""
    return phi_terminating(SeriesSpec(tuple(numerator), tuple(denominator), argument), q)


def as_real(value, what: str = "value") -> float:
    """Drop a rounding-level imaginary part, refusing anything larger."""
    value = complex(value)
    if abs(value.imag) >= 1e-10 * (1.0 + abs(value.real)):
        raise ValueError(f"{what} has a non-negligible imaginary part: {value}")
    return value.real
