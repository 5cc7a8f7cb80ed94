import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from genaw.errors import OutOfInterval, ZeroArgument
from genaw.lattice import Lattice, point_from_qs, point_from_theta, point_from_x, shift

Q = 0.5
qs_strategy = st.builds(
    lambda r, t: r * cmath.exp(1j * t), st.floats(0.2, 2.0), st.floats(0.0, 2 * math.pi)
)


@pytest.mark.parametrize("qs, x", [(1, 1), (-1, -1), (1j, 0)])
def test_point_from_qs_examples(qs, x):
    assert point_from_qs(qs, Q).x == pytest.approx(x, abs=1e-15)


def test_zero_argument():
    with pytest.raises(ZeroArgument):
        point_from_qs(0, Q)


@given(qs_strategy)
def test_point_fields(qs):
    p = point_from_qs(qs, Q)
    assert p.x == pytest.approx((qs + 1 / qs) / 2, rel=1e-14)
    x1 = (qs * Q + 1 / (qs * Q)) / 2
    assert p.dx_fwd == pytest.approx(x1 - p.x, rel=1e-14, abs=1e-14)
    # half-step difference is the forward step taken from s - 1/2
    half = point_from_qs(qs * Q**-0.5, Q)
    assert p.dx_half == pytest.approx(half.dx_fwd, rel=1e-14, abs=1e-14)
    assert p.dx_fwd + p.dx_bwd == pytest.approx(p.x_at(1) - p.x_at(-1), rel=1e-13, abs=1e-14)
    assert point_from_qs(1 / qs, Q).x == pytest.approx(p.x, rel=1e-14)


@given(st.floats(0, math.pi))
def test_unit_circle_is_real_interval(theta):
    p = point_from_theta(theta, Q)
    assert abs(p.x.imag) < 1e-12
    assert -1 - 1e-12 <= p.x.real <= 1 + 1e-12


def test_point_from_x_examples():
    assert point_from_x(1, Q).qs == pytest.approx(1)
    assert point_from_x(0, Q).qs == pytest.approx(1j)
    assert point_from_x(0.5, Q).qs == pytest.approx(0.5 + 1j * math.sqrt(3) / 2, rel=1e-15)
    assert point_from_x(0.5, Q, "lower").qs == pytest.approx(0.5 - 1j * math.sqrt(3) / 2, rel=1e-15)
    with pytest.raises(OutOfInterval):
        point_from_x(1.1, Q)
    with pytest.raises(ValueError):
        point_from_x(0.3, Q, "sideways")


@given(st.floats(-1, 1))
def test_point_from_x_round_trip(x):
    p = point_from_x(x, Q)
    assert abs(p.qs) == pytest.approx(1, rel=1e-15)
    assert p.x.real == pytest.approx(x, abs=1e-14)
    assert point_from_x(x, Q, "lower").x == pytest.approx(p.x, abs=1e-14)


def test_shift_examples():
    p = point_from_qs(0.3 + 0.8j, Q)
    assert shift(p, 0) is p
    back = shift(shift(p, 1), -1)
    assert back.qs == pytest.approx(p.qs, rel=1e-14)
    assert shift(point_from_qs(1, Q), 1).x == pytest.approx((Q + 1 / Q) / 2, rel=1e-15)


def test_general_lattice_hook():
    lat = Lattice(c1=2.0, c2=3.0, c3=-1.0)
    p = point_from_qs(0.5, Q, lat)
    assert p.x == pytest.approx(2 * 0.5 + 3 / 0.5 - 1)
    assert p.shift(1).x == pytest.approx(lat.x(0.25))
    assert np.isclose(p.dx_fwd, lat.x(0.25) - p.x)
