"""Compare the 2n-2 and 2n-4 exponent variants of the basic-series normalizer.

Both variants are evaluated against the kernel representation; only the
2n-2 variant reproduces ``(x^2 - 1) P~_n(x)``.

Example
-------
    python scripts/exponent_variants.py --nmax 8
"""
from __future__ import annotations

import argparse

from genaw import AWParams, FamilyContext, MassConfig
from genaw.gen_aw import gen_eval_5phi4, gen_eval_kernelrep
from genaw.lattice import point_from_qs


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--params", default="0.5,0.3,-0.2,-0.4", help="a,b,c,d")
    ap.add_argument("--q", type=float, default=0.5)
    ap.add_argument("--masses", default="0.3,0.7", help="A,B")
    ap.add_argument("--nmax", type=int, default=8)
    ap.add_argument("--qs", type=complex, default=0.6 + 0.5j, help="lattice point q^s")
    args = ap.parse_args(argv)

    params = AWParams(*(complex(v) for v in args.params.split(",")), args.q)
    masses = MassConfig(*(float(v) for v in args.masses.split(",")))
    ctx = FamilyContext.build(params, args.nmax)
    p = point_from_qs(args.qs, args.q)
    phis = p.x**2 - 1

    print(f"{'n':>3} {'2n-2 rel err':>14} {'2n-4 rel err':>14}")
    for n in range(1, args.nmax + 1):
        ref = phis * gen_eval_kernelrep(n, p.x, ctx, masses)
        good = gen_eval_5phi4(n, p, ctx, masses)
        alt = gen_eval_5phi4(n, p, ctx, masses, printed=True)
        print(f"{n:3d} {abs(good - ref) / abs(ref):14.3e} {abs(alt - ref) / abs(ref):14.3e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
