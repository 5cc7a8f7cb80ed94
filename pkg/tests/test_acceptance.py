"""Acceptance criteria 1-10, one test each.

Every test records ``(passed, detail)`` in ``conftest.ACCEPTANCE`` before
asserting, and the terminal summary prints one line per criterion.
"""
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import ACCEPTANCE, MASS_GRID, PARAM_SETS, params_of, poly_scale, random_qs
from genaw.askey_wilson import aw_eval_series, norm_sq
from genaw.cd_kernels import kernel_anchored, kernel_backward, kernel_cd, kernel_forward, kernel_sum
from genaw.cli import identity_suite
from genaw.gen_aw import (
    MassConfig,
    boundary_values,
    gen_eval_5phi4,
    gen_eval_diffrep,
    gen_eval_kernelrep,
    gen_eval_rep,
    gen_ttrr_coeffs,
    racah_identity_check,
    shift_rep_coeffs,
)
from genaw.lattice import point_from_qs, point_from_theta
from genaw.verify import coeff_deviation, gram, moment_oracle, poly_coeffs

ROOT = Path(__file__).resolve().parents[1]
RACAH_SETS = [(0.3, 0.2, 0.4, 0.6), (0.5, 0.1, 1.0, 0.2), (0.2, 0.4, 0.3, 1.5)]


def record(key, ok, detail):
    ACCEPTANCE[key] = (bool(ok), detail)


def mixed_points(q, count, seed):
    """Half on the interval (real ``theta``), half off it (complex ``q^s``)."""
    rng = np.random.default_rng(seed)
    half = count // 2
    pts = [point_from_theta(t, q) for t in rng.uniform(0.05, np.pi - 0.05, half)]
    pts += [point_from_qs(z, q) for z in random_qs(rng, count - half)]
    return pts


def test_criterion_01_series_vs_recurrence(contexts):
    start = time.perf_counter()
    worst = 0.0
    for k, name in enumerate(sorted(PARAM_SETS)):
        ctx = contexts(name, 20)
        pts = mixed_points(ctx.params.q, 50, seed=k)
        for n in range(21):
            for p in pts:
                s, t = aw_eval_series(n, p, ctx.params), ctx.p(n, p.x)
                worst = max(worst, abs(s - t) / poly_scale(n, s, t))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-9 and elapsed < 10
    record(1, ok, f"max rel dev {worst:.2e} (< 1e-9), {elapsed:.2f}s (< 10s)")
    assert worst < 1e-9 and elapsed < 10


def test_criterion_02_classical_orthogonality(contexts):
    start = time.perf_counter()
    off = diag_rec = diag_prod = 0.0
    for name in sorted(PARAM_SETS):
        ctx = contexts(name)
        rep = gram(8, ctx, MassConfig(0.0, 0.0))
        rec = ctx.norms[:9].real
        prod = np.array([norm_sq(n, ctx.params).real for n in range(9)])
        d = np.sqrt(rec)
        g = rep.matrix
        offd = np.abs(g - np.diag(np.diag(g))) / np.outer(d, d)
        off = max(off, offd.max())
        diag_rec = max(diag_rec, np.max(np.abs(np.diag(g) - rec) / rec))
        diag_prod = max(diag_prod, np.max(np.abs(np.diag(g) - prod) / prod))
    elapsed = time.perf_counter() - start
    ok = off < 1e-8 and diag_rec < 1e-8 and diag_prod < 1e-7 and elapsed < 30
    record(2, ok, f"offdiag {off:.2e}, diag vs recurrence {diag_rec:.2e}, "
                  f"diag vs product {diag_prod:.2e}, {elapsed:.2f}s")
    assert ok


def test_criterion_03_kernel_forms(contexts):
    worst = 0.0
    for k, name in enumerate(sorted(PARAM_SETS)):
        ctx = contexts(name)
        pts = mixed_points(ctx.params.q, 40, seed=100 + k)
        pairs = list(zip(pts[::2], pts[1::2]))
        for n in range(11):
            for p, p0 in pairs:
                vals = [kernel_sum(n, p.x, p0.x, ctx), kernel_cd(n, p.x, p0.x, ctx),
                        kernel_forward(n, p, p0, ctx), kernel_backward(n, p, p0, ctx)]
                scale = max(map(abs, vals))
                worst = max(worst, max(abs(u - v) for u in vals for v in vals) / scale)
                for anchor in (-1, 1):
                    vals = [kernel_sum(n, p.x, float(anchor), ctx), kernel_cd(n, p.x, float(anchor), ctx),
                            kernel_anchored(n + 1, p, anchor, ctx)]
                    scale = max(map(abs, vals))
                    worst = max(worst, max(abs(u - v) for u in vals for v in vals) / scale)
    record(3, worst < 1e-8, f"max pairwise rel dev {worst:.2e} (< 1e-8)")
    assert worst < 1e-8


def _routes(n, p, ctx, masses):
    phis = p.x**2 - 1
    out = [gen_eval_kernelrep(n, p.x, ctx, masses), gen_eval_diffrep(n, p, ctx, masses)]
    if n >= 1:
        out.append(gen_eval_rep(n, p, ctx, masses) / phis)
        a, b, *_ = shift_rep_coeffs(n, p, ctx, masses)
        out.append((a * ctx.p(n, p.x) + b * ctx.p(n, p.x_at(1))) / phis)
        out.append(gen_eval_5phi4(n, p, ctx, masses) / phis)
    return out


def test_criterion_04_generalized_routes(contexts):
    worst = 0.0
    for k, name in enumerate(sorted(PARAM_SETS)):
        ctx = contexts(name)
        pts = mixed_points(ctx.params.q, 20, seed=200 + k)
        for m in MASS_GRID:
            masses = MassConfig(*m)
            for n in range(11):
                for p in pts:
                    vals = _routes(n, p, ctx, masses)
                    dev = max(abs(u - v) for u in vals for v in vals) / poly_scale(n, *vals)
                    worst = max(worst, dev)
    record(4, worst < 1e-8, f"five routes, max pairwise rel dev {worst:.2e} (< 1e-8)")
    assert worst < 1e-8


def test_criterion_05_modified_orthogonality(contexts):
    off = diag = 0.0
    for name in sorted(PARAM_SETS):
        ctx = contexts(name)
        for m in MASS_GRID:
            masses = MassConfig(*m)
            rep = gram(6, ctx, masses)
            expected = []
            for n in range(7):
                pm, pp = ctx.boundary_p[n]
                bv = boundary_values(n, ctx, masses)
                expected.append((ctx.norms[n] + m[0] * bv.p_neg * pm + m[1] * bv.p_pos * pp).real)
            expected = np.array(expected)
            d = np.sqrt(expected)
            g = rep.matrix
            off = max(off, np.max(np.abs(g - np.diag(np.diag(g))) / np.outer(d, d)))
            diag = max(diag, np.max(np.abs(np.diag(g) - expected) / expected))
    ok = off < 1e-7 and diag < 1e-7
    record(5, ok, f"offdiag {off:.2e} (< 1e-7), diag {diag:.2e} (< 1e-7)")
    assert ok


def test_criterion_06_moment_oracle(contexts):
    worst = 0.0
    for name in ("conjugate", "stock", "positive"):
        ctx = contexts(name)
        for m in [(0.0, 0.0), (0.3, 0.7), (10.0, 10.0)]:
            masses = MassConfig(*m)
            orc = moment_oracle(6, ctx.params, masses)
            for n in range(7):
                ref = poly_coeffs(lambda x: gen_eval_kernelrep(n, x, ctx, masses), n)
                worst = max(worst, coeff_deviation(orc[n], ref))
    record(6, worst < 1e-6, f"max coefficient rel dev {worst:.2e} (< 1e-6)")
    assert worst < 1e-6


def test_criterion_07_difference_equation_and_positivity(contexts):
    worst = 0.0
    for k, name in enumerate(sorted(PARAM_SETS)):
        ctx = contexts(name)
        pts = mixed_points(ctx.params.q, 10, seed=300 + k)
        for m in MASS_GRID:
            fn = identity_suite(ctx, MassConfig(*m), RACAH_SETS[0], pts)["gen_difference_equation"]
            worst = max(worst, max(fn(n, i) for n in range(11) for i in range(len(pts))))
    grid = [0.0, 0.1, 1.0, 10.0]
    min_kappa = min_gamma = np.inf
    for name in sorted(PARAM_SETS):
        ctx = contexts(name, 13)
        for A in grid:
            for B in grid:
                masses = MassConfig(A, B)
                for n in range(1, 13):
                    kap = boundary_values(n, ctx, masses).kappa_det
                    gam = gen_ttrr_coeffs(n, ctx, masses)[1]
                    assert abs(kap.imag) <= 1e-10 * abs(kap) and abs(gam.imag) <= 1e-10 * abs(gam)
                    min_kappa = min(min_kappa, kap.real)
                    min_gamma = min(min_gamma, gam.real)
    ok = worst < 1e-8 and min_kappa > 0 and min_gamma > 0
    record(7, ok, f"difference eq rel residual {worst:.2e} (< 1e-8), "
                  f"min kappa {min_kappa:.2e} (> 0), min gamma~ {min_gamma:.2e} (> 0)")
    assert ok


def test_criterion_08_modified_recurrence(contexts):
    ttrr = delta = 0.0
    for k, name in enumerate(sorted(PARAM_SETS)):
        ctx = contexts(name)
        pts = mixed_points(ctx.params.q, 10, seed=400 + k)
        for m in MASS_GRID:
            suite = identity_suite(ctx, MassConfig(*m), RACAH_SETS[0], pts)
            for n in range(11):
                delta = max(delta, suite["gen_norm_identity"](n, 0))
                ttrr = max(ttrr, max(suite["gen_recurrence"](n, i) for i in range(len(pts))))
    ok = ttrr < 1e-9 and delta < 1e-10
    record(8, ok, f"recurrence rel residual {ttrr:.2e} (< 1e-9), norm identity {delta:.2e} (< 1e-10)")
    assert ok


def test_criterion_09_qracah(contexts):
    worst = 0.0
    for rp in RACAH_SETS:
        for q in (0.3, 0.5, 0.8):
            for t in (0.0, 0.5, 1.0, 1.7, 2.0, 3.0):
                for n in range(9):
                    worst = max(worst, racah_identity_check(n, t, rp, q))
    record(9, worst < 1e-9, f"max residual {worst:.2e} (< 1e-9)")
    assert worst < 1e-9


def test_criterion_10_cli_end_to_end():
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "genaw", "residuals", "--config", str(ROOT / "configs" / "stock.json")],
        capture_output=True, text=True, timeout=120, cwd=ROOT,
    )
    elapsed = time.perf_counter() - start
    ok = proc.returncode == 0 and elapsed < 60
    record(10, ok, f"exit code {proc.returncode}, {elapsed:.2f}s (< 60s)")
    assert ok, proc.stderr
