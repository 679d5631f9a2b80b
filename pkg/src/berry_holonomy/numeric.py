"""Finite-difference oracle for the connection and curvature.

Everything here differentiates the full truncated unitary directly, with no
knowledge of the closed-form scalar profiles; agreement between this module
and the closed expressions is the library's primary self-check.

Wirtinger convention: for f of one complex variable,

  d_z f    = (d_x f - i d_y f) / 2
  d_zbar f = (d_x f + i d_y f) / 2,

with d_x, d_y central differences of step h.  Optional one-level Richardson
extrapolation combines steps h and h/2 as (4 D(h/2) - D(h)) / 3.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .connection import ConnectionMatrices
from .curvature import CurvatureForm, curvature_closed, curvature_from_components
from .family import GeneralizedPoint, ParameterPoint
from .fock import TruncatedSpace, displacement, exp_antihermitian, make_operators, squeeze
from .reports import ConvergenceReport, IdentityReport


@dataclass(frozen=True)
class DifferentiationPlan:
    h: float = 1e-4
    scheme: str = "central"
    richardson: bool = False

    def __post_init__(self):
        if not (1e-8 <= self.h <= 1e-2):
            raise ValueError("step size out of the supported range")
        if self.scheme != "central":
            raise ValueError("only central differences are supported")


def wirtinger_derivative(
    f: Callable[[complex], np.ndarray], z0: complex, plan: DifferentiationPlan
) -> Tuple[np.ndarray, np.ndarray]:
    """(d_z f, d_zbar f) at z0 for matrix- or scalar-valued f."""

    def central(h: float):
        fx = (f(z0 + h) - f(z0 - h)) / (2.0 * h)
        fy = (f(z0 + 1j * h) - f(z0 - 1j * h)) / (2.0 * h)
        return 0.5 * (fx - 1j * fy), 0.5 * (fx + 1j * fy)

    if plan.richardson:
        coarse = central(plan.h)
        fine = central(plan.h / 2.0)
        return (
            (4.0 * fine[0] - coarse[0]) / 3.0,
            (4.0 * fine[1] - coarse[1]) / 3.0,
        )
    return central(plan.h)


class UnitaryCache:
    """Memoizes the displacement and squeeze factors by parameter value.

    A central-difference stencil around one parameter reuses the factor for
    the other parameter unchanged, so caching factors (not products) removes
    the dominant eigendecompositions from repeated oracle calls.
    """

    def __init__(self, space: TruncatedSpace):
        self.space = space
        self._disp: Dict[complex, np.ndarray] = {}
        self._sq: Dict[complex, np.ndarray] = {}

    def displacement_matrix(self, lam: complex) -> np.ndarray:
        key = complex(lam)
        got = self._disp.get(key)
        if got is None:
            got = displacement(key, self.space).matrix
            self._disp[key] = got
        return got

    def squeeze_matrix(self, mu: complex) -> np.ndarray:
        key = complex(mu)
        got = self._sq.get(key)
        if got is None:
            got = squeeze(key, self.space).matrix
            self._sq[key] = got
        return got

    def unitary_matrix(self, p: ParameterPoint) -> np.ndarray:
        return self.displacement_matrix(p.lam) @ self.squeeze_matrix(p.mu)


@dataclass
class OracleConnection(ConnectionMatrices):
    D: int = 0
    h: float = 0.0
    estimated_error: float = 0.0


@dataclass
class GeneralizedOracleConnection:
    a: List[np.ndarray]
    a_bar: List[np.ndarray]
    point: GeneralizedPoint
    m: int
    D: int
    h: float


def default_dim(p: Union[ParameterPoint, GeneralizedPoint], m: int) -> int:
    """Smallest power of two at or above the amplitude-driven floor."""
    if isinstance(p, GeneralizedPoint):
        amp2 = sum(abs(z) ** 2 for z in p.lambdas)
    else:
        amp2 = abs(p.lam) ** 2 + abs(p.mu) ** 2
    floor = max(64, 16 * m, math.ceil(16.0 * (1.0 + amp2)))
    return 1 << max(6, (floor - 1).bit_length())


def _two_parameter_oracle(
    p: ParameterPoint,
    m: int,
    space: TruncatedSpace,
    plan: DifferentiationPlan,
    cache: Optional[UnitaryCache],
) -> OracleConnection:
    if cache is not None and cache.space != space:
        raise ValueError("cache bound to a different space")
    if cache is not None:
        unit = lambda q: cache.unitary_matrix(q)
    else:
        unit = lambda q: displacement(q.lam, space).matrix @ squeeze(q.mu, space).matrix
    v0 = np.eye(space.dim, dtype=complex)[:, :m]
    u = unit(p)
    ud = u.conj().T

    def sandwich(mat: np.ndarray) -> np.ndarray:
        return v0.conj().T @ (ud @ mat) @ v0

    du_l, du_lb = wirtinger_derivative(
        lambda z: unit(ParameterPoint(z, p.mu)), p.lam, plan
    )
    du_m, du_mb = wirtinger_derivative(
        lambda z: unit(ParameterPoint(p.lam, z)), p.mu, plan
    )
    a_lam = sandwich(du_l)
    a_mu = sandwich(du_m)
    a_lamb = sandwich(du_lb)
    a_mub = sandwich(du_mb)
    # the conjugate legs must be the negated adjoints; the defect is a
    # direct read of the finite-difference error level
    err = max(
        float(np.abs(a_lamb + a_lam.conj().T).max()),
        float(np.abs(a_mub + a_mu.conj().T).max()),
    )
    return OracleConnection(
        a_lambda=a_lam,
        a_mu=a_mu,
        point=p,
        m=m,
        D=space.dim,
        h=plan.h,
        estimated_error=err,
    )


def _generalized_oracle(
    p: GeneralizedPoint,
    m: int,
    space: TruncatedSpace,
    plan: DifferentiationPlan,
) -> GeneralizedOracleConnection:
    ops = make_operators(space)
    a_op, ad_op = ops.a.matrix, ops.a_dag.matrix
    n = len(p.lambdas)
    ad_pows = []
    a_pows = []
    cur_ad = np.eye(space.dim, dtype=complex)
    cur_a = np.eye(space.dim, dtype=complex)
    for _ in range(n):
        cur_ad = cur_ad @ ad_op
        cur_a = cur_a @ a_op
        ad_pows.append(cur_ad)
        a_pows.append(cur_a)

    def factor(j: int, z: complex) -> np.ndarray:
        g = (z * ad_pows[j] - np.conj(z) * a_pows[j]) / (j + 1)
        return exp_antihermitian(g).matrix

    factors = [factor(j, p.lambdas[j]) for j in range(n)]
    # prefix[k] = E_1 ... E_{k-1}, suffix[k] = E_{k+1} ... E_n, so a stencil
    # around lambda_k rebuilds only the k-th factor
    prefix = [np.eye(space.dim, dtype=complex)]
    for j in range(n - 1):
        prefix.append(prefix[-1] @ factors[j])
    suffix = [np.eye(space.dim, dtype=complex)] * n
    acc = np.eye(space.dim, dtype=complex)
    for j in range(n - 1, -1, -1):
        suffix[j] = acc
        acc = factors[j] @ acc
    u = acc
    ud = u.conj().T
    v0 = np.eye(space.dim, dtype=complex)[:, :m]

    a_list: List[np.ndarray] = []
    abar_list: List[np.ndarray] = []
    for k in range(n):
        f_k = lambda z: prefix[k] @ factor(k, z) @ suffix[k]
        d_z, d_zb = wirtinger_derivative(f_k, p.lambdas[k], plan)
        a_list.append(v0.conj().T @ (ud @ d_z) @ v0)
        abar_list.append(v0.conj().T @ (ud @ d_zb) @ v0)
    return GeneralizedOracleConnection(
        a=a_list, a_bar=abar_list, point=p, m=m, D=space.dim, h=plan.h
    )


def connection_numeric(
    p: Union[ParameterPoint, GeneralizedPoint],
    m: int,
    space: Optional[TruncatedSpace] = None,
    plan: Optional[DifferentiationPlan] = None,
    cache: Optional[UnitaryCache] = None,
):
    """Connection matrices by direct differentiation of the unitary.

    Recomputes the unitary at every stencil node unless a `UnitaryCache`
    is supplied; results are identical either way.
    """
    if m < 1:
        raise ValueError("m must be positive")
    plan = plan or DifferentiationPlan()
    space = space or TruncatedSpace(default_dim(p, m))
    if m >= space.dim:
        raise ValueError("m must be smaller than the space dimension")
    if isinstance(p, GeneralizedPoint):
        return _generalized_oracle(p, m, space, plan)
    return _two_parameter_oracle(p, m, space, plan, cache)


def curvature_numeric(
    p: ParameterPoint,
    m: int,
    space: Optional[TruncatedSpace] = None,
    plan: Optional[DifferentiationPlan] = None,
    cache: Optional[UnitaryCache] = None,
) -> CurvatureForm:
    """Curvature with both derivative levels numeric.

    The outer step (applied to the already-differentiated connection) is
    ten times the inner one; with the default plan that is 1e-3 over 1e-4,
    which balances truncation against subtractive noise in the second
    derivative.
    """
    plan = plan or DifferentiationPlan()
    space = space or TruncatedSpace(default_dim(p, m))
    h_outer = 10.0 * plan.h

    def a_field(q: ParameterPoint):
        oc = connection_numeric(q, m, space, plan, cache)
        return oc.a_lambda, oc.a_mu

    return curvature_from_components(a_field, p, h_outer)


def global_form_check(
    p: ParameterPoint,
    m: int,
    space: Optional[TruncatedSpace] = None,
    plan: Optional[DifferentiationPlan] = None,
) -> IdentityReport:
    """Projector-level curvature against the frame-coordinate components.

    For P = V V+ the gauge-invariant two-form P dP ^ dP, pushed to the
    frame block as V+ (.) V, must reproduce the closed components; the
    lam-lamb and mu-mub wedges are compared.  `interior_dev` is the
    frame-block deviation, `boundary_dev` the full-matrix one (the latter
    includes the orthogonal-complement block, which the frame form does not
    constrain, so it is reported but not expected to be small).
    """
    plan = plan or DifferentiationPlan()
    space = space or TruncatedSpace(default_dim(p, m))

    def frame_at(q: ParameterPoint) -> np.ndarray:
        return (displacement(q.lam, space).matrix @ squeeze(q.mu, space).matrix)[:, :m]

    def proj_at(q: ParameterPoint) -> np.ndarray:
        v = frame_at(q)
        return v @ v.conj().T

    v = frame_at(p)
    proj = v @ v.conj().T
    form = curvature_closed(p, m)

    devs = {}
    for key, leg in (("llb", "lam"), ("mmb", "mu")):
        if leg == "lam":
            f = lambda z: proj_at(ParameterPoint(z, p.mu))
            z0 = p.lam
        else:
            f = lambda z: proj_at(ParameterPoint(p.lam, z))
            z0 = p.mu
        dp_z, dp_zb = wirtinger_derivative(f, z0, plan)
        lhs = proj @ (dp_z @ dp_zb - dp_zb @ dp_z)
        rhs = v @ form.components[key] @ v.conj().T
        frame_dev = float(np.abs(v.conj().T @ (lhs - rhs) @ v).max())
        full_dev = float(np.abs(lhs - rhs).max())
        devs[key] = (frame_dev, full_dev)

    interior = max(d[0] for d in devs.values())
    boundary = max(d[1] for d in devs.values())
    return IdentityReport(
        interior_dev=interior,
        boundary_dev=boundary,
        D=space.dim,
        buffer=0,
        label="global-two-form",
        extras={
            "llb_frame_dev": devs["llb"][0],
            "mmb_frame_dev": devs["mmb"][0],
        },
    )


def convergence_report(
    p: ParameterPoint,
    m: int,
    dims: Sequence[int],
    plan: Optional[DifferentiationPlan] = None,
) -> ConvergenceReport:
    """Connection oracle across increasing truncations.

    Deviations are max-abs differences between consecutive dimensions;
    `converged` means the final difference fell under 1e-8.
    """
    if len(dims) < 2:
        raise ValueError("need at least two dimensions")
    if list(dims) != sorted(set(dims)):
        raise ValueError("dimensions must be strictly increasing")
    if dims[0] < 4 * m:
        raise ValueError("smallest dimension must be at least 4m")
    plan = plan or DifferentiationPlan()
    stacked = []
    for d in dims:
        oc = connection_numeric(p, m, TruncatedSpace(int(d)), plan)
        stacked.append(np.hstack([oc.a_lambda, oc.a_mu]))
    deviations = [
        float(np.abs(stacked[i + 1] - stacked[i]).max()) for i in range(len(stacked) - 1)
    ]
    return ConvergenceReport(
        dims=list(int(d) for d in dims),
        deviations=deviations,
        converged=bool(deviations[-1] < 1e-8),
    )
