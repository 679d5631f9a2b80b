"""Holonomy-algebra dimension against the curvature span, per degeneracy.

The two quantities answer different questions.  The span counts directions
reachable by curvature contractions alone; the based holonomy algebra also
picks up covariant derivatives of the curvature through the conjugating
transports.  At m = 2 both give 4 = dim u(2).  From m = 3 on they separate:
the span stays at 4 while the loop-generated algebra fills all of u(m), so
the vacuum bundle is irreducible at every m probed here.
"""
import argparse

from berry_holonomy import (
    ParameterPoint,
    curvature_span_dimension,
    holonomy_algebra_dimension,
)

CENTERS = (
    ParameterPoint(0.32 + 0.21j, 0.43 + 0.14j),
    ParameterPoint(0.25 - 0.15j, 0.52 + 0.33j),
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-m", type=int, default=4)
    args = ap.parse_args()

    print(f"{'m':>3} {'loop algebra':>13} {'curvature span':>15} {'dim u(m)':>9}")
    for m in range(2, args.max_m + 1):
        loop_dim = holonomy_algebra_dimension(CENTERS, m)
        span_dim = curvature_span_dimension(CENTERS, m)
        print(f"{m:>3} {loop_dim:>13} {span_dim:>15} {m * m:>9}")


if __name__ == "__main__":
    main()
