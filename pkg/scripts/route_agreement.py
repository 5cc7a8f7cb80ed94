"""Worst pairwise disagreement between the evaluation routes of the modified family.

Example
-------
    python scripts/route_agreement.py --nmax 10 --points 20
"""
from __future__ import annotations

import argparse
import json

import numpy as np

from genaw import AWParams, FamilyContext, MassConfig
from genaw.gen_aw import (
    gen_eval_5phi4,
    gen_eval_diffrep,
    gen_eval_kernelrep,
    gen_eval_rep,
    shift_rep_coeffs,
)
from genaw.lattice import point_from_qs

MASSES = [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (0.3, 0.7), (10.0, 10.0)]


def routes(n, p, ctx, masses):
    """Values of ``P~_n`` at ``p`` from every available route, keyed by name."""
    out = {"kernel": gen_eval_kernelrep(n, p.x, ctx, masses),
           "difference": gen_eval_diffrep(n, p, ctx, masses)}
    if n >= 1:
        phis = p.x**2 - 1
        a, b, *_ = shift_rep_coeffs(n, p, ctx, masses)
        out["two_term"] = gen_eval_rep(n, p, ctx, masses) / phis
        out["shifted_two_term"] = (a * ctx.p(n, p.x) + b * ctx.p(n, p.x_at(1))) / phis
        out["basic_series"] = gen_eval_5phi4(n, p, ctx, masses) / phis
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--params", default="0.5,0.3,-0.2,-0.4", help="a,b,c,d (complex literals allowed)")
    ap.add_argument("--q", type=float, default=0.5)
    ap.add_argument("--nmax", type=int, default=10)
    ap.add_argument("--points", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    args = ap.parse_args(argv)

    params = AWParams(*(complex(v) for v in args.params.split(",")), args.q)
    ctx = FamilyContext.build(params, args.nmax)
    rng = np.random.default_rng(args.seed)
    rad = rng.uniform(0.4, 1.0, args.points)
    ang = rng.uniform(0.15, np.pi - 0.15, args.points)
    pts = [point_from_qs(r * np.exp(1j * t), args.q) for r, t in zip(rad, ang)]

    rows = []
    for m in MASSES:
        masses = MassConfig(*m)
        for n in range(args.nmax + 1):
            worst = 0.0
            for p in pts:
                vals = list(routes(n, p, ctx, masses).values())
                scale = max(max(map(abs, vals)), 2.0 ** (1 - n))
                worst = max(worst, max(abs(u - v) for u in vals for v in vals) / scale)
            rows.append({"mass_neg": m[0], "mass_pos": m[1], "n": n, "max_rel_dev": worst})

    if args.json:
        print(json.dumps(rows, indent=2))
        return 0
    print(f"{'A':>6} {'B':>6} {'n':>3} {'max rel dev':>12}")
    for r in rows:
        print(f"{r['mass_neg']:6.2f} {r['mass_pos']:6.2f} {r['n']:3d} {r['max_rel_dev']:12.3e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
