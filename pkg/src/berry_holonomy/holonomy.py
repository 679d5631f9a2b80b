"""Parallel transport and holonomy of the closed-form connection.

Transport solves W'(t) = -A(gamma(t); gamma'(t)) W(t) with classical RK4,
piece by piece between the loop's breakpoints, and restores exact unitarity
by one polar projection at the end.  For a small coordinate square of side
eps spanned by tangents (u, v), log W = -F(u, v) eps^2 + O(eps^3); halving
eps divides the residual against the closed curvature by about eight, which
`small_loop_check` reports as a ratio.

`holonomy_algebra_dimension` measures the real dimension of the Lie algebra
generated by small-loop logarithms conjugated back to a common base point.
The conjugation matters: the generated algebra can exceed the span of the
curvature contractions at the loop centers, because transport mixes in
covariant derivatives of the curvature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import logm

from .connection import connection_closed, contract_one_form
from .curvature import PLANE_TANGENTS, contract_two_form, curvature_closed
from .family import ParameterPoint
from .lie import ClosureNotStabilized, real_lie_closure
from .reports import IdentityReport


@dataclass
class LoopPath:
    """A parameterized path in the (lam, mu) parameter space.

    `parameterization` maps t in [0, 1] to a ParameterPoint.  `velocity`
    may give d/dt analytically; otherwise it is approximated by a central
    difference confined to the breakpoint piece containing t, so piecewise
    paths never difference across a corner.
    """

    parameterization: Callable[[float], ParameterPoint]
    samples: int
    closed: bool = True
    velocity: Optional[Callable[[float], Tuple[complex, complex]]] = None
    breakpoints: Tuple[float, ...] = (0.0, 1.0)

    def point_at(self, t: float) -> ParameterPoint:
        return self.parameterization(t)

    def _piece(self, t: float) -> Tuple[float, float]:
        bps = self.breakpoints
        for i in range(len(bps) - 1):
            if t < bps[i + 1] or i == len(bps) - 2:
                return bps[i], bps[i + 1]
        return bps[-2], bps[-1]

    def velocity_at(self, t: float) -> Tuple[complex, complex]:
        if self.velocity is not None:
            return self.velocity(t)
        lo, hi = self._piece(t)
        h = (hi - lo) * 1e-6
        t0 = max(lo, t - h)
        t1 = min(hi, t + h)
        p0 = self.parameterization(t0)
        p1 = self.parameterization(t1)
        inv = 1.0 / (t1 - t0)
        return ((p1.lam - p0.lam) * inv, (p1.mu - p0.mu) * inv)


def lambda_circle(
    radius: float, mu: complex = 0.0, samples: int = 2048, center: complex = 0.0
) -> LoopPath:
    """Circle of given radius in the lam plane at fixed mu."""
    if radius <= 0:
        raise ValueError("radius must be positive")

    def param(t: float) -> ParameterPoint:
        return ParameterPoint(center + radius * np.exp(2j * np.pi * t), mu)

    def vel(t: float) -> Tuple[complex, complex]:
        return (2j * np.pi * radius * np.exp(2j * np.pi * t), 0.0)

    return LoopPath(parameterization=param, samples=samples, closed=True, velocity=vel)


def polygon_loop(
    vertices: Sequence[ParameterPoint], samples_per_side: int = 384, closed: bool = True
) -> LoopPath:
    """Piecewise-linear loop through the vertices, last edge returning to
    the first vertex when closed."""
    verts = list(vertices)
    if len(verts) < 2:
        raise ValueError("need at least two vertices")
    pts = verts + [verts[0]] if closed else verts
    n = len(pts) - 1
    bps = tuple(i / n for i in range(n + 1))

    def param(t: float) -> ParameterPoint:
        if t >= 1.0:
            return pts[-1]
        i = min(int(t * n), n - 1)
        s = t * n - i
        p0, p1 = pts[i], pts[i + 1]
        return ParameterPoint(
            p0.lam + s * (p1.lam - p0.lam), p0.mu + s * (p1.mu - p0.mu)
        )

    def vel(t: float) -> Tuple[complex, complex]:
        i = min(int(t * n), n - 1)
        p0, p1 = pts[i], pts[i + 1]
        return (n * (p1.lam - p0.lam), n * (p1.mu - p0.mu))

    return LoopPath(
        parameterization=param,
        samples=samples_per_side * n,
        closed=closed,
        velocity=vel,
        breakpoints=bps,
    )


def square_loop(
    center: ParameterPoint, plane: str, eps: float, samples_per_side: int = 384
) -> LoopPath:
    """Coordinate square of side eps at `center` in one of the six planes
    named by the curvature component keys."""
    if plane not in PLANE_TANGENTS:
        raise ValueError(f"unknown plane {plane!r}")
    u, v = PLANE_TANGENTS[plane]
    c = np.array([center.lam, center.mu])
    uu = np.array(u, dtype=complex)
    vv = np.array(v, dtype=complex)
    corners = [c, c + eps * uu, c + eps * uu + eps * vv, c + eps * vv]
    verts = [ParameterPoint(w[0], w[1]) for w in corners]
    return polygon_loop(verts, samples_per_side=samples_per_side, closed=True)


@dataclass
class HolonomyResult:
    w: np.ndarray
    path_length: float
    algebra_dim: Optional[int] = None


def transport(loop: LoopPath, m: int, steps: Optional[int] = None) -> np.ndarray:
    """RK4 transport along the full path; one polar projection at the end.

    Velocity lookups are nudged off exact breakpoints (by 1e-9 of the piece
    length, toward the interior) so a stage landing on a corner uses the
    velocity of the side it belongs to.
    """
    total = steps or loop.samples
    w = np.eye(m, dtype=complex)
    bps = loop.breakpoints
    for i in range(len(bps) - 1):
        lo, hi = bps[i], bps[i + 1]
        span = hi - lo
        n = max(1, round(total * span))
        h = span / n
        tiny = span * 1e-9

        def rhs(t: float, mat: np.ndarray) -> np.ndarray:
            tv = min(max(t, lo + tiny), hi - tiny)
            p = loop.point_at(tv)
            dlam, dmu = loop.velocity_at(tv)
            a = contract_one_form(connection_closed(p, m), dlam, dmu)
            return -(a @ mat)

        for k in range(n):
            t = lo + k * h
            k1 = rhs(t, w)
            k2 = rhs(t + h / 2, w + (h / 2) * k1)
            k3 = rhs(t + h / 2, w + (h / 2) * k2)
            k4 = rhs(t + h, w + h * k3)
            w = w + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
    uu, _, vh = np.linalg.svd(w)
    return uu @ vh


def _path_length(loop: LoopPath) -> float:
    n = max(loop.samples, 16)
    acc = 0.0
    for k in range(n):
        t = (k + 0.5) / n
        dlam, dmu = loop.velocity_at(t)
        acc += math.sqrt(abs(dlam) ** 2 + abs(dmu) ** 2)
    return acc / n


def parallel_transport(loop: LoopPath, m: int) -> HolonomyResult:
    """Holonomy of a closed loop."""
    if not loop.closed:
        raise ValueError("holonomy requires a closed loop")
    w = transport(loop, m)
    return HolonomyResult(w=w, path_length=_path_length(loop))


def small_loop_check(
    center: ParameterPoint,
    plane: str,
    eps: float,
    m: int,
    steps_per_side: int = 384,
) -> IdentityReport:
    """log W against -eps^2 F(u, v) at eps and eps/2.

    Third-order remainder means the ratio of the two residuals sits near 8;
    the report carries both residuals and the ratio.
    """
    if not (1e-4 <= eps <= 1e-2):
        raise ValueError("eps out of the supported range")
    u, v = PLANE_TANGENTS[plane]
    f_uv = contract_two_form(curvature_closed(center, m), u, v)

    def residual(e: float) -> float:
        loop = square_loop(center, plane, e, samples_per_side=steps_per_side)
        w = transport(loop, m)
        return float(np.abs(logm(w) + f_uv * e * e).max())

    r_full = residual(eps)
    r_half = residual(eps / 2.0)
    ratio = r_full / r_half if r_half > 0 else float("inf")
    return IdentityReport(
        interior_dev=r_full,
        boundary_dev=r_half,
        D=0,
        buffer=0,
        label="small-loop-residual",
        extras={"ratio": ratio, "plane": plane, "eps": eps},
    )


def _segment_transport(
    p0: ParameterPoint, p1: ParameterPoint, m: int, steps: int
) -> np.ndarray:
    seg = polygon_loop([p0, p1], samples_per_side=steps, closed=False)
    return transport(seg, m)


def holonomy_algebra_dimension(
    centers: Sequence[ParameterPoint],
    m: int,
    budget: int = 6,
    eps: float = 1e-2,
    steps_per_side: int = 128,
    seg_steps: int = 256,
    base: ParameterPoint = ParameterPoint(0.0, 0.0),
) -> int:
    """Real dimension of the algebra generated by based small-loop logs.

    Every center contributes six square loops (one per coordinate plane);
    each log W is conjugated back to `base` along a straight segment before
    entering the closure.  Raises ClosureNotStabilized when commutator
    rounds within `budget` keep finding new directions.
    """
    if len(centers) < 2:
        raise ValueError("need at least two centers")
    els: List[np.ndarray] = []
    for c in centers:
        w_seg = _segment_transport(base, c, m, seg_steps)
        w_seg_i = w_seg.conj().T
        for plane in PLANE_TANGENTS:
            loop = square_loop(c, plane, eps, samples_per_side=steps_per_side)
            lw = logm(transport(loop, m))
            els.append(w_seg_i @ lw @ w_seg)
    dim, stabilized = real_lie_closure(els, max_rounds=budget)
    if not stabilized:
        raise ClosureNotStabilized(dim, budget)
    return dim
