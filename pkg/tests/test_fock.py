import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from berry_holonomy import (
    TruncatedSpace,
    bch_identity_report,
    displacement,
    exp_antihermitian,
    make_operators,
    squeeze,
)
from berry_holonomy.fock import displacement_buffer, squeeze_buffer

amplitudes = st.complex_numbers(
    max_magnitude=0.8, allow_nan=False, allow_infinity=False
)


def test_space_too_small():
    with pytest.raises(ValueError):
        TruncatedSpace(1)


def test_ladder_matrix_elements(space64):
    ops = make_operators(space64)
    a = ops.a.matrix
    for n in range(1, 64):
        assert a[n - 1, n] == pytest.approx(math.sqrt(n))
    assert np.count_nonzero(a) == 63
    assert np.abs(ops.a_dag.matrix - a.conj().T).max() == 0.0


def test_commutators_interior(space64):
    """su(1,1) relations and [N, a] = -a hold exactly away from the edge."""
    ops = make_operators(space64)
    a, ad = ops.a.matrix, ops.a_dag.matrix
    kp, km, k3, num = ops.K_plus.matrix, ops.K_minus.matrix, ops.K_3.matrix, ops.N.matrix
    comm = lambda x, y: x @ y - y @ x
    b = 60
    assert np.abs((comm(a, ad) - np.eye(64))[:b, :b]).max() < 1e-12
    assert np.abs((comm(num, a) + a)[:b, :b]).max() < 1e-12
    interior = slice(0, 60)
    assert np.abs((comm(k3, kp) - kp)[interior, interior]).max() < 1e-12
    assert np.abs((comm(k3, km) + km)[interior, interior]).max() < 1e-12
    assert np.abs((comm(km, kp) - 2 * k3)[interior, interior]).max() < 1e-12


def test_k3_diagonal(space64):
    ops = make_operators(space64)
    diag = np.diag(ops.K_3.matrix).real
    assert diag[0] == pytest.approx(0.25)
    assert diag[5] == pytest.approx(0.5 * (5 + 0.5))


@given(amplitudes)
def test_exp_antihermitian_is_unitary(z):
    space = TruncatedSpace(24)
    ops = make_operators(space)
    g = z * ops.a_dag.matrix - np.conj(z) * ops.a.matrix
    u = exp_antihermitian(g)
    assert u.unitarity_defect() < 1e-12


def test_exp_antihermitian_rejects_hermitian_part(space64):
    g = np.eye(64, dtype=complex)
    with pytest.raises(ValueError):
        exp_antihermitian(g)


def test_exp_of_zero_is_identity(space64):
    u = exp_antihermitian(np.zeros((64, 64), dtype=complex))
    assert np.abs(u.matrix - np.eye(64)).max() < 1e-14


def test_displacement_vacuum_is_coherent(space64):
    """D(lam)|0> has entries e^{-|lam|^2/2} lam^n / sqrt(n!)."""
    lam = 0.6 - 0.3j
    col = displacement(lam, space64).matrix[:, 0]
    ref = np.zeros(64, dtype=complex)
    term = math.exp(-abs(lam) ** 2 / 2.0)
    for n in range(40):
        ref[n] = term
        term = term * lam / math.sqrt(n + 1.0)
    assert np.abs(col[:40] - ref[:40]).max() < 1e-12


def test_squeeze_vacuum_even_sector(space64):
    """S(mu)|0> = sech^{1/2}|mu| sum (zeta/2)^n sqrt((2n)!)/n! |2n>.

    Compared on the lower half of the column only; the top rows carry the
    truncation corruption that the factorization report quantifies.
    """
    mu = 0.45 + 0.2j
    x = abs(mu)
    zeta = mu / x * math.tanh(x)
    col = squeeze(mu, space64).matrix[:, 0]
    ref = np.zeros(32, dtype=complex)
    for n in range(16):
        ref[2 * n] = (
            (1.0 / math.cosh(x)) ** 0.5
            * (zeta / 2.0) ** n
            * math.sqrt(math.factorial(2 * n))
            / math.factorial(n)
        )
    assert np.abs(col[:32] - ref).max() < 1e-12
    assert np.abs(col[1:32:2]).max() < 1e-15


@given(amplitudes)
def test_displacement_unitary(z):
    space = TruncatedSpace(32)
    assert displacement(z, space).unitarity_defect() < 1e-12


@given(amplitudes)
def test_squeeze_unitary(z):
    space = TruncatedSpace(32)
    assert squeeze(z, space).unitarity_defect() < 1e-12


def test_zero_arguments_give_identity(space64):
    eye = np.eye(64)
    assert np.abs(displacement(0.0, space64).matrix - eye).max() < 1e-14
    assert np.abs(squeeze(0.0, space64).matrix - eye).max() < 1e-14


def test_buffers_bracketed():
    for z in (0.1, 0.5 + 0.5j, 1.0):
        assert 4 <= displacement_buffer(z, 64) <= 60
        assert 4 <= squeeze_buffer(z, 64) <= 60


def test_factorization_report_structure(space64):
    rep = bch_identity_report(0.3 + 0.2j, 0.25 - 0.1j, space64)
    assert rep.D == 64
    assert rep.interior_dev < 1e-8
    assert rep.boundary_dev > rep.interior_dev
    assert set(rep.extras) == {"displacement", "squeeze"}
    for part in rep.extras.values():
        assert part["interior_dev"] < 1e-8


def test_factorization_interior_small_at_both_sizes():
    # the interior window widens with D (the buffer is relative), so the
    # deviations are not comparable across sizes; both must simply be tiny
    rep32 = bch_identity_report(0.4, 0.3, TruncatedSpace(32))
    rep64 = bch_identity_report(0.4, 0.3, TruncatedSpace(64))
    assert rep32.interior_dev < 1e-8
    assert rep64.interior_dev < 1e-8
