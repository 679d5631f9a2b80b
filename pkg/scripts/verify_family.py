"""Sweep the closed-form connection and curvature against the oracle.

Runs the full default grid at a chosen truncation and prints worst-case
deviations per degeneracy, plus the scalar-identity checks that everything
else leans on.  Slower and wider than `berry-holonomy verify`.
"""
import argparse
import time

import numpy as np

from berry_holonomy import (
    COMPONENT_KEYS,
    TruncatedSpace,
    UnitaryCache,
    bch_identity_report,
    connection_closed,
    connection_numeric,
    curvature_closed,
    curvature_numeric,
    derivative_identity_report,
    f_squared,
    f_squared_from_wedge,
)
from berry_holonomy.cli import grid_points
from berry_holonomy.numeric import DifferentiationPlan


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dim", type=int, default=128)
    ap.add_argument("--step", type=float, default=1e-4)
    ap.add_argument("--m", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--grid", default="default")
    args = ap.parse_args()

    space = TruncatedSpace(args.dim)
    cache = UnitaryCache(space)
    plan = DifferentiationPlan(h=args.step)
    points = grid_points(args.grid)
    print(f"grid: {len(points)} points, D = {args.dim}, h = {args.step:g}")

    for m in args.m:
        t0 = time.monotonic()
        conn_worst = 0.0
        curv_worst = {k: 0.0 for k in COMPONENT_KEYS}
        wedge_worst = 0.0
        for p in points:
            closed = connection_closed(p, m)
            oracle = connection_numeric(p, m, space, plan, cache)
            conn_worst = max(
                conn_worst,
                float(np.abs(closed.a_lambda - oracle.a_lambda).max()),
                float(np.abs(closed.a_mu - oracle.a_mu).max()),
            )
            cc = curvature_closed(p, m)
            cn = curvature_numeric(p, m, space, plan, cache)
            for k in COMPONENT_KEYS:
                curv_worst[k] = max(
                    curv_worst[k],
                    float(np.abs(cc.components[k] - cn.components[k]).max()),
                )
            wedge_worst = max(
                wedge_worst,
                float(np.abs(f_squared_from_wedge(cc) - f_squared(p.mu, m)).max()),
            )
        dt = time.monotonic() - t0
        print(f"m = {m}  connection worst {conn_worst:.3e}  "
              f"curvature worst {max(curv_worst.values()):.3e}  "
              f"wedge-vs-closed {wedge_worst:.3e}  ({dt:.1f} s)")
        for k, v in curv_worst.items():
            print(f"        {k:>5}: {v:.3e}")

    small = TruncatedSpace(64)
    bch = max(
        bch_identity_report(p.lam, p.mu, small).interior_dev
        for p in points
        if abs(p.lam) <= 0.5 and abs(p.mu) <= 0.5
    )
    ident = max(
        derivative_identity_report(z).interior_dev
        for z in (0.3 + 0.2j, 0.7 - 0.4j, 1.1 + 0.05j)
    )
    print(f"factorization interior worst {bch:.3e}  derivative identities {ident:.3e}")


if __name__ == "__main__":
    main()
