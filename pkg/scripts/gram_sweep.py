"""Modified Gram deviation, quadrature level and Hankel conditioning versus degree.

Example
-------
    python scripts/gram_sweep.py --nmax 10 --masses 0.3,0.7
"""
from __future__ import annotations

import argparse

import numpy as np

from genaw import AWParams, FamilyContext, MassConfig
from genaw.verify import gram, moments


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--params", default="0.5,0.3,-0.2,-0.4", help="a,b,c,d")
    ap.add_argument("--q", type=float, default=0.5)
    ap.add_argument("--masses", default="0.3,0.7", help="A,B")
    ap.add_argument("--nmax", type=int, default=10)
    args = ap.parse_args(argv)

    params = AWParams(*(complex(v) for v in args.params.split(",")), args.q)
    masses = MassConfig(*(float(v) for v in args.masses.split(",")))
    ctx = FamilyContext.build(params, args.nmax)
    m = moments(2 * args.nmax, params, masses)

    print(f"{'n':>3} {'offdiag':>10} {'diag dev':>10} {'level':>5} {'cond(H_n)':>10}")
    for n in range(1, args.nmax + 1):
        rep = gram(n, ctx, masses)
        H = np.array([[m[i + j] for j in range(n)] for i in range(n)])
        print(f"{n:3d} {rep.max_offdiag_rel:10.2e} {rep.max_diag_dev_rel:10.2e} {rep.level:5d} "
              f"{np.linalg.cond(H):10.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
