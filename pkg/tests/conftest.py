import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from genaw.askey_wilson import AWParams, FamilyContext
from genaw.gen_aw import MassConfig

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# Admissible parameter sets: (a, b, c, d, q).
PARAM_SETS = {
    "conjugate": (0.3 + 0.4j, 0.3 - 0.4j, 0.2, -0.5, 0.5),
    "stock": (0.5, 0.3, -0.2, -0.4, 0.5),
    "symmetric": (0.6, -0.6, 0.3, -0.3, 0.7),
    "positive": (0.1, 0.2, 0.3, 0.4, 0.3),
    "two_pairs": (0.7 + 0.2j, 0.7 - 0.2j, -0.6 + 0.5j, -0.6 - 0.5j, 0.9),
}
MASS_GRID = [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (0.3, 0.7), (10.0, 10.0)]

ACCEPTANCE = {}


def params_of(name):
    return AWParams(*PARAM_SETS[name])


@pytest.fixture(scope="session")
def contexts():
    cache = {}

    def get(name, n_max=12):
        key = (name, n_max)
        if key not in cache:
            cache[key] = FamilyContext.build(params_of(name), n_max)
        return cache[key]

    return get


@pytest.fixture(params=sorted(PARAM_SETS))
def param_name(request):
    return request.param


@pytest.fixture(params=MASS_GRID, ids=lambda m: f"A{m[0]}-B{m[1]}")
def masses(request):
    return MassConfig(*request.param)


def random_qs(rng, count, rmin=0.4, rmax=1.0):
    """``q^s`` values in the upper half annulus, away from the real axis."""
    rad = rng.uniform(rmin, rmax, count)
    ang = rng.uniform(0.15, np.pi - 0.15, count)
    return rad * np.exp(1j * ang)


def poly_scale(n, *vals):
    """Relative-error scale for a monic degree-n polynomial value."""
    return max(max(abs(v) for v in vals), 2.0 ** (1 - n))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
