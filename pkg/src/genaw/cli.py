"""Command-line front end: ``eval``, ``gram``, ``residuals`` and ``racah-check``.

Exit codes: 0 pass, 1 tolerance failure, 2 invalid input, 3 non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .askey_wilson import (
    AWParams,
    FamilyContext,
    aw_eval_series,
    diff_coeffs,
    phi_big,
    sigma,
    sode_coeffs,
    theta_xi,
)
from .cd_kernels import kernel_anchored, kernel_backward, kernel_cd, kernel_forward, kernel_sum
from .errors import GenAWError, InvalidParameters, NonConvergent
from .gen_aw import (
    MassConfig,
    boundary_values,
    determinant_residual,
    gen_eval_5phi4,
    gen_eval_diffrep,
    gen_eval_kernelrep,
    gen_eval_rep,
    gen_ttrr_coeffs,
    racah_identity_check,
    shift_rep_coeffs,
    sode_tilde_coeffs,
)
from .lattice import point_from_qs, point_from_x
from .verify import gram

EXIT_OK, EXIT_TOL, EXIT_INPUT, EXIT_NONCONV = 0, 1, 2, 3
N_POINTS = 6
RACAH_DEFAULT = (0.3, 0.2, 0.4, 0.6)


def fmt(v) -> str:
    """17-significant-digit decimal text for a real or complex number."""
    v = complex(v)
    if v.imag == 0:
        return format(v.real, ".17g")
    return f"{v.real:.17g}{v.imag:+.17g}j"


def _num(v):
    return complex(v.replace(" ", "")) if isinstance(v, str) else v


@dataclass
class RunConfig:
    a: complex = 0.5
    b: complex = 0.3
    c: complex = -0.2
    d: complex = -0.4
    q: float = 0.5
    mass_neg: float = 0.3
    mass_pos: float = 0.7
    n_max: int = 10
    tol: float = 1e-8
    seed: int = 0
    output_format: str = "json"
    racah: tuple = field(default=RACAH_DEFAULT)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(data) - known
        if extra:
            raise InvalidParameters(f"unknown config keys: {sorted(extra)}")
        cfg = cls(**data)
        cfg.a, cfg.b, cfg.c, cfg.d = (_num(v) for v in (cfg.a, cfg.b, cfg.c, cfg.d))
        cfg.q, cfg.mass_neg, cfg.mass_pos, cfg.tol = (
            float(v) for v in (cfg.q, cfg.mass_neg, cfg.mass_pos, cfg.tol)
        )
        cfg.n_max, cfg.seed = int(cfg.n_max), int(cfg.seed)
        cfg.racah = tuple(float(v) for v in cfg.racah)
        if cfg.output_format not in ("json", "csv"):
            raise InvalidParameters(f"output_format must be json or csv, got {cfg.output_format!r}")
        if cfg.n_max < 0:
            raise InvalidParameters("n_max must be non-negative")
        return cfg

    def to_dict(self) -> dict:
        out = asdict(self)
        for k in ("a", "b", "c", "d"):
            v = complex(out[k])
            out[k] = v.real if v.imag == 0 else fmt(v)
        out["racah"] = list(self.racah)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @property
    def params(self) -> AWParams:
        return AWParams(self.a, self.b, self.c, self.d, self.q)

    @property
    def masses(self) -> MassConfig:
        return MassConfig(self.mass_neg, self.mass_pos)


# ---------------------------------------------------------------------------
# residual suite

def sample_points(cfg: RunConfig, ctx: FamilyContext):
    """Seeded lattice points with ``q^s`` inside the annulus ``0.4 <= |q^s| <= 1``."""
    rng = np.random.default_rng(cfg.seed)
    rad = rng.uniform(0.4, 1.0, N_POINTS)
    ang = rng.uniform(0.2, np.pi - 0.2, N_POINTS)
    return [point_from_qs(r * np.exp(1j * t), cfg.q) for r, t in zip(rad, ang)]


def _rel(residual, *terms) -> float:
    scale = max(abs(t) for t in terms)
    return 0.0 if scale == 0 else float(abs(residual) / scale)


def _poly_scale(n, *vals) -> float:
    return max(max(abs(v) for v in vals), 2.0 ** (1 - n))


def identity_suite(ctx: FamilyContext, masses: MassConfig, racah, points):
    """Map identity tag to a function ``(n, point_index) -> relative residual``."""
    params = ctx.params
    q = params.q
    P = ctx.p
    Pt = lambda n, x: gen_eval_kernelrep(n, x, ctx, masses)  # noqa: E731

    def series_ttrr(n, i):
        p = points[i]
        s, t = aw_eval_series(n, p, params), P(n, p.x)
        return abs(s - t) / _poly_scale(n, s, t)

    def sode(n, i):
        p = points[i]
        A, B, C = sode_coeffs(p, params)
        terms = [A * P(n, p.x_at(1)), (B + ctx.lam[n]) * P(n, p.x), C * P(n, p.x_at(-1))]
        return _rel(sum(terms), *terms)

    def backward(n, i):
        p = points[i]
        al, bb, _ = diff_coeffs(n, p, params)
        lhs = sigma(p, params) * (P(n, p.x) - P(n, p.x_at(-1))) / p.dx_bwd
        rhs = [al * P(n + 1, p.x), bb * P(n, p.x)]
        return _rel(lhs - sum(rhs), lhs, *rhs)

    def forward(n, i):
        p = points[i]
        al, _, bh = diff_coeffs(n, p, params)
        lhs = phi_big(p, params) * (P(n, p.x_at(1)) - P(n, p.x)) / p.dx_fwd
        rhs = [al * P(n + 1, p.x), bh * P(n, p.x)]
        return _rel(lhs - sum(rhs), lhs, *rhs)

    def shift_rel(n, i):
        if n < 1:
            return 0.0
        p = points[i]
        th, xi = theta_xi(n, p, params)
        terms = [P(n - 1, p.x), th * P(n, p.x), xi * P(n, p.x_at(1))]
        return _rel(terms[0] - terms[1] - terms[2], *terms)

    def kernels(n, i):
        p, p0 = points[i], points[(i + 1) % len(points)]
        ref = kernel_sum(n, p.x, p0.x, ctx)
        vals = [kernel_cd(n, p.x, p0.x, ctx), kernel_forward(n, p, p0, ctx), kernel_backward(n, p, p0, ctx)]
        dev = max(abs(v - ref) for v in vals) / max(abs(ref), *map(abs, vals))
        for anchor in (-1, 1):
            r = kernel_sum(n, p.x, float(anchor), ctx)
            a = kernel_anchored(n + 1, p, anchor, ctx)
            dev = max(dev, abs(a - r) / max(abs(r), abs(a)))
        return dev

    def diff_rep(n, i):
        p = points[i]
        ref, v = Pt(n, p.x), gen_eval_diffrep(n, p, ctx, masses)
        return abs(v - ref) / _poly_scale(n, ref, v)

    def _vs_phi(n, i, value):
        p = points[i]
        phis = p.x**2 - 1
        ref = phis * Pt(n, p.x)
        return abs(value - ref) / (abs(phis) * _poly_scale(n, ref / phis, value / phis))

    def two_term(n, i):
        return _vs_phi(n, i, gen_eval_rep(n, points[i], ctx, masses)) if n else 0.0

    def shifted_two_term(n, i):
        if n < 1:
            return 0.0
        p = points[i]
        a, b, *_ = shift_rep_coeffs(n, p, ctx, masses)
        return _vs_phi(n, i, a * P(n, p.x) + b * P(n, p.x_at(1)))

    def shift_up(n, i):
        if n < 1:
            return 0.0
        p = points[i]
        _, _, u, c, d, *_ = shift_rep_coeffs(n, p, ctx, masses)
        terms = [u * Pt(n, p.x_at(1)), c * P(n, p.x), d * P(n, p.x_at(1))]
        return _rel(terms[0] - terms[1] - terms[2], *terms)

    def shift_down(n, i):
        if n < 1:
            return 0.0
        p = points[i]
        *_, v, e, f = shift_rep_coeffs(n, p, ctx, masses)
        terms = [v * Pt(n, p.x_at(-1)), e * P(n, p.x), f * P(n, p.x_at(1))]
        return _rel(terms[0] - terms[1] - terms[2], *terms)

    def determinant(n, i):
        if n < 1:
            return 0.0
        det, big = determinant_residual(n, points[i], ctx, masses)
        return _rel(det, big)

    def difference_eq(n, i):
        if n < 1:
            return 0.0
        p = points[i]
        c0, c1, c2 = sode_tilde_coeffs(n, p, ctx, masses)
        terms = [c0 * Pt(n, p.x_at(-1)), c1 * Pt(n, p.x), c2 * Pt(n, p.x_at(1))]
        return _rel(sum(terms), *terms)

    def basic_series(n, i):
        return _vs_phi(n, i, gen_eval_5phi4(n, points[i], ctx, masses)) if n else 0.0

    def gen_ttrr(n, i):
        p = points[i]
        bt, gt, _ = gen_ttrr_coeffs(n, ctx, masses)
        terms = [p.x * Pt(n, p.x), Pt(n + 1, p.x), bt * Pt(n, p.x), gt * Pt(n - 1, p.x) if n else 0.0]
        return _rel(terms[0] - terms[1] - terms[2] - terms[3], *terms)

    def norm_identity(n, i):
        _, _, delta = gen_ttrr_coeffs(n, ctx, masses)
        ratio = boundary_values(n, ctx, masses).norm_sq_mod / ctx.norms[n]
        return abs(1 + delta - ratio) / abs(ratio)

    def racah_rel(n, i):
        return racah_identity_check(n, 0.5 * i, racah, q)

    return {
        "aw_backward_difference": backward,
        "aw_difference_equation": sode,
        "aw_forward_difference": forward,
        "aw_series_vs_recurrence": series_ttrr,
        "aw_shift_relation": shift_rel,
        "gen_basic_series": basic_series,
        "gen_determinant": determinant,
        "gen_difference_equation": difference_eq,
        "gen_difference_rep": diff_rep,
        "gen_norm_identity": norm_identity,
        "gen_recurrence": gen_ttrr,
        "gen_shift_down": shift_down,
        "gen_shift_up": shift_up,
        "gen_shifted_two_term": shifted_two_term,
        "gen_two_term": two_term,
        "kernel_forms": kernels,
        "qracah_relation": racah_rel,
    }


def run_residuals(cfg: RunConfig):
    """One row per identity: the worst residual over degrees ``0..n_max`` and the point grid."""
    params, masses = cfg.params, cfg.masses
    ctx = FamilyContext.build(params, cfg.n_max)
    points = sample_points(cfg, ctx)
    rows = []
    for tag, fn in sorted(identity_suite(ctx, masses, cfg.racah, points).items()):
        worst = (-1.0, 0, 0)
        for n in range(cfg.n_max + 1):
            for i in range(len(points)):
                r = float(fn(n, i))
                if not np.isfinite(r):
                    r = float("inf")
                if r > worst[0]:
                    worst = (r, n, i)
        r, n, i = worst
        rows.append({"identity_tag": tag, "n": n, "point": i, "residual": r,
                     "tolerance": cfg.tol, "pass": bool(r < cfg.tol)})
    meta = {"points_qs": [fmt(p.qs) for p in points]}
    return rows, meta


# ---------------------------------------------------------------------------
# other commands

def run_eval(cfg: RunConfig, degrees, xs):
    params, masses = cfg.params, cfg.masses
    ctx = FamilyContext.build(params, max(max(degrees), 1))
    rows = []
    for x in xs:
        p = point_from_x(x, cfg.q)
        for n in degrees:
            p_rec = complex(ctx.p(n, p.x))
            p_ser = complex(aw_eval_series(n, p, params))
            t_ker = complex(gen_eval_kernelrep(n, p.x, ctx, masses))
            routes = {"gen_kernel": t_ker, "gen_difference": complex(gen_eval_diffrep(n, p, ctx, masses, fallback=True))}
            phis = p.x**2 - 1
            on_mass = abs(phis) <= 1e-12
            routes["gen_two_term"] = None if on_mass else complex(gen_eval_rep(n, p, ctx, masses) / phis)
            routes["gen_basic_series"] = None if on_mass else complex(gen_eval_5phi4(n, p, ctx, masses) / phis)
            vals = [v for v in routes.values() if v is not None]
            gen_dev = max(abs(u - v) for u in vals for v in vals) / _poly_scale(n, *vals)
            row = {"n": n, "x": x, "aw_recurrence": p_rec, "aw_series": p_ser,
                   "aw_deviation": abs(p_rec - p_ser) / _poly_scale(n, p_rec, p_ser)}
            row.update(routes)
            row["gen_deviation"] = gen_dev
            rows.append(row)
    return rows


def _clean(v):
    if isinstance(v, (complex, np.complexfloating)):
        v = complex(v)
        if abs(v.imag) <= 1e-14 * max(abs(v.real), 1e-300):
            return float(v.real)
        return fmt(v)
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def _json_float(v):
    return float(format(v, ".17g")) if isinstance(v, float) else v


def emit(rows, fmt_name: str, out, extra: dict | None = None):
    rows = [{k: _json_float(_clean(v)) for k, v in r.items()} for r in rows]
    if fmt_name == "csv":
        buf = io.StringIO()
        if rows:
            w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n", restval="")
            w.writeheader()
            for r in rows:
                w.writerow({k: (format(v, ".17g") if isinstance(v, float) else ("" if v is None else v))
                            for k, v in r.items()})
        text = buf.getvalue()
    else:
        payload = dict(extra or {})
        payload["results"] = rows
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_floats(text: str):
    return [float(v) for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    for name in ("a", "b", "c", "d"):
        common.add_argument(f"--param-{name}", dest=name, help=f"parameter {name} (complex literals like 0.3+0.4j allowed)")
    common.add_argument("--q", type=float)
    common.add_argument("--mass-neg", type=float, dest="mass_neg")
    common.add_argument("--mass-pos", type=float, dest="mass_pos")
    common.add_argument("--nmax", type=int, dest="n_max")
    common.add_argument("--tol", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--format", choices=("json", "csv"), dest="output_format")
    common.add_argument("--out")

    ap = argparse.ArgumentParser(prog="genaw", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    ev = sub.add_parser("eval", parents=[common], help="evaluate both families by every route")
    ev.add_argument("--degrees", default="0,1,2,3", help="comma-separated degrees")
    ev.add_argument("--points", default="-0.5,0.1,0.7", help="comma-separated x in [-1, 1]")
    sub.add_parser("gram", parents=[common], help="modified Gram matrix")
    sub.add_parser("residuals", parents=[common], help="identity residual suite")
    rc = sub.add_parser("racah-check", parents=[common], help="q-Racah relation residuals")
    rc.add_argument("--racah", default=",".join(map(str, RACAH_DEFAULT)),
                    help="q-Racah parameters a~,b~,alpha,beta")
    rc.add_argument("--t", default="0,1,1.5,2", help="comma-separated lattice arguments")
    sub.add_parser("show-config", parents=[common], help="print the merged configuration")
    return ap


def load_config(args) -> RunConfig:
    data = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
    for key in ("a", "b", "c", "d", "q", "mass_neg", "mass_pos", "n_max", "tol", "seed", "output_format"):
        val = getattr(args, key, None)
        if val is not None:
            data[key] = val
    if getattr(args, "racah", None) and args.command == "racah-check":
        data["racah"] = _csv_floats(args.racah)
    return RunConfig.from_dict(data)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        cfg.params  # validate early
        cfg.masses
        if args.command == "show-config":
            text = cfg.dumps() + "\n"
            (open(args.out, "w", encoding="utf-8").write(text) if args.out else sys.stdout.write(text))
            return EXIT_OK
        if args.command == "eval":
            degrees = [int(v) for v in args.degrees.split(",") if v.strip()]
            rows = run_eval(cfg, degrees, _csv_floats(args.points))
            ok = all(r["gen_deviation"] < cfg.tol and r["aw_deviation"] < cfg.tol for r in rows)
            emit(rows, cfg.output_format, args.out, {"config": cfg.to_dict()})
            return EXIT_OK if ok else EXIT_TOL
        if args.command == "gram":
            ctx = FamilyContext.build(cfg.params, cfg.n_max)
            rep = gram(cfg.n_max, ctx, cfg.masses, min(cfg.tol, 1e-12))
            rows = [{"i": i, "j": j, "value": float(rep.matrix[i, j])}
                    for i in range(cfg.n_max + 1) for j in range(cfg.n_max + 1)]
            extra = {"config": cfg.to_dict(), "max_offdiag_rel": rep.max_offdiag_rel,
                     "max_diag_dev_rel": rep.max_diag_dev_rel, "norms_mod": rep.norms_mod.tolist(),
                     "pass": rep.max_offdiag_rel <= cfg.tol}
            emit(rows, cfg.output_format, args.out, extra)
            return EXIT_OK if rep.max_offdiag_rel <= cfg.tol else EXIT_TOL
        if args.command == "residuals":
            rows, meta = run_residuals(cfg)
            ok = all(r["pass"] for r in rows)
            emit(rows, cfg.output_format, args.out, {"config": cfg.to_dict(), **meta, "pass": ok})
            return EXIT_OK if ok else EXIT_TOL
        if args.command == "racah-check":
            rows = []
            for t in _csv_floats(args.t):
                for n in range(cfg.n_max + 1):
                    r = racah_identity_check(n, t, cfg.racah, cfg.q)
                    rows.append({"identity_tag": "qracah_relation", "n": n, "point": t, "residual": r,
                                 "tolerance": cfg.tol, "pass": bool(r < cfg.tol)})
            ok = all(r["pass"] for r in rows)
            emit(rows, cfg.output_format, args.out, {"config": cfg.to_dict(), "pass": ok})
            return EXIT_OK if ok else EXIT_TOL
    except NonConvergent as exc:
        print(f"genaw: non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONV
    except (InvalidParameters, ValueError, GenAWError, OSError, json.JSONDecodeError) as exc:
        print(f"genaw: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
