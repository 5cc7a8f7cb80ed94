"""The q-quadratic lattice ``x(s) = c1 q^s + c2 q^-s + c3``.

Points are carried by the value ``q^s`` (never by ``s`` itself), so the
lattice can be entered from ``s``, from an angle, or from ``x``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import OutOfInterval, ZeroArgument
from .qkernel import _q


@dataclass(frozen=True)
class Lattice:
    c1: complex = 0.5
    c2: complex = 0.5
    c3: complex = 0.0

    def x(self, qs: complex) -> complex:
        return self.c1 * qs + self.c2 / qs + self.c3


AW_LATTICE = Lattice()


@dataclass(frozen=True)
class LatticePoint:
    """A lattice point with its forward, backward and half-step differences."""

    qs: complex
    q: float
    x: complex
    dx_fwd: complex
    dx_bwd: complex
    dx_half: complex
    lattice: Lattice = AW_LATTICE

    def shift(self, k) -> "LatticePoint":
        return point_from_qs(self.qs * self.q**k, self.q, self.lattice)

    def x_at(self, k) -> complex:
        """Lattice value ``x(s + k)``; ``k`` may be fractional."""
        return self.lattice.x(self.qs * self.q**k)


def point_from_qs(qs, q, lattice: Lattice = AW_LATTICE) -> LatticePoint:
    q = _q(q)
    qs = complex(qs)
    if qs == 0:
        raise ZeroArgument("q^s must be non-zero")
    x = lattice.x
    xs = x(qs)
    return LatticePoint(
        qs=qs,
        q=q,
        x=xs,
        dx_fwd=x(qs * q) - xs,
        dx_bwd=xs - x(qs / q),
        dx_half=x(qs * q**0.5) - x(qs * q**-0.5),
        lattice=lattice,
    )


def point_from_theta(theta: float, q) -> LatticePoint:
    return point_from_qs(cmath.exp(1j * theta), q)


def point_from_x(x: float, q, branch: str = "upper") -> LatticePoint:
    """Invert the Askey-Wilson lattice for ``-1 <= x <= 1``.

    ``branch='upper'`` picks ``theta`` in ``[0, pi]``.
    """
    x = float(x)
    if abs(x) > 1.0 + 1e-12:
        raise OutOfInterval(f"x={x} lies outside [-1, 1]; use point_from_qs")
    x = min(1.0, max(-1.0, x))
    y = math.sqrt(max(0.0, 1.0 - x * x))
    if branch == "lower":
        y = -y
    elif branch != "upper":
        raise ValueError("branch must be 'upper' or 'lower'")
    return point_from_qs(complex(x, y), q)


def shift(p: LatticePoint, k, q=None) -> LatticePoint:
    if k == 0:
        return p
    return p.shift(k)
