import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinphase.errors import NotAntisymmetric, UnsupportedSpin
from spinphase.phase_space import boost_matrix, spinor_boost
from spinphase.repspace import (
    EPS,
    EPS_LOWER,
    METRIC,
    build_gammas,
    build_rep,
    dual,
    spin_fraction,
    sym_projector,
    symmetric_dimension,
)

GINV = np.linalg.inv(METRIC)


def brute_epsilon(a, b, c, d):
    """Sign of the permutation (a, b, c, d) of (0, 1, 2, 3), by counting inversions."""
    idx = [a, b, c, d]
    if len(set(idx)) < 4:
        return 0
    inv = sum(1 for i in range(4) for j in range(i + 1, 4) if idx[i] > idx[j])
    return -1 if inv % 2 else 1


def test_metric_and_epsilon():
    assert np.array_equal(METRIC @ GINV, np.eye(4))
    assert EPS[0, 1, 2, 3] == 1 and EPS_LOWER[0, 1, 2, 3] == -1
    for idx in itertools.product(range(4), repeat=4):
        assert EPS[idx] == brute_epsilon(*idx)


def test_clifford_exact():
    g = build_gammas()
    for m, n in itertools.product(range(4), repeat=2):
        anti = g[m] @ g[n] + g[n] @ g[m]
        assert np.array_equal(anti, 2 * GINV[m, n] * np.eye(4))
    assert np.array_equal(g[0] @ g[0], np.eye(4))
    assert np.array_equal(g[1] @ g[1], -np.eye(4))


def test_gamma_parity_hermiticity():
    g = build_gammas()
    for m in range(4):
        assert np.array_equal(g[0] @ g[m].conj().T @ g[0], g[m])


def test_dimensions():
    assert symmetric_dimension(1) == 4 and symmetric_dimension(2) == 10
    assert build_rep(0.5).dim == 4 and build_rep(1).dim == 10
    assert build_rep("1/2") is build_rep(0.5)


@pytest.mark.parametrize("s", [0, -0.5, 1.5, 2, 0.3, "abc"])
def test_unsupported_spin(s):
    with pytest.raises(UnsupportedSpin):
        build_rep(s)


def test_spin_fraction_is_exact():
    with pytest.raises(UnsupportedSpin):
        spin_fraction(0.3)
    assert spin_fraction("1/2") == spin_fraction(0.5)


def test_half_spin_is_dirac():
    rep = build_rep(0.5)
    g = build_gammas()
    assert np.array_equal(rep.beta, g)
    assert np.array_equal(rep.parity, g[0])
    assert np.allclose(rep.beta_tensor[1, 2], 0.5j * (g[1] @ g[2] - g[2] @ g[1]), atol=0)


def test_parity_hermiticity_and_involution(rep):
    P = rep.parity
    assert np.allclose(P @ P, np.eye(rep.dim), atol=1e-13)
    for m in range(4):
        assert np.abs(P @ rep.beta[m].conj().T @ P - rep.beta[m]).max() < 1e-13


def test_beta_tensor_is_fresh_commutator(rep):
    b = rep.beta
    for m, n in itertools.product(range(4), repeat=2):
        fresh = 1j * rep.s * (b[m] @ b[n] - b[n] @ b[m])
        assert np.abs(rep.beta_tensor[m, n] - fresh).max() < 1e-14
        assert np.abs(rep.beta_tensor[m, n] + rep.beta_tensor[n, m]).max() < 1e-13


def test_dual_involution_on_matrices(rep):
    assert np.abs(dual(rep.beta_dual) + rep.beta_tensor).max() < 1e-13


def test_spin_one_satisfies_kemmer_algebra():
    # beta^m beta^n beta^l + beta^l beta^n beta^m = beta^m g^{nl} + beta^l g^{nm}
    b = build_rep(1).beta
    for m, n, l in itertools.product(range(4), repeat=3):
        lhs = b[m] @ b[n] @ b[l] + b[l] @ b[n] @ b[m]
        rhs = b[m] * GINV[n, l] + b[l] * GINV[n, m]
        assert np.abs(lhs - rhs).max() < 1e-13


def test_spin_one_spectrum_against_unprojected_oracle():
    rep = build_rep(1)
    m = 1.7
    p_lower = METRIC @ np.array([m, 0, 0, 0])
    g = build_gammas()
    full = sum(0.5 * (np.kron(g[k], np.eye(4)) + np.kron(np.eye(4), g[k])) * p_lower[k]
               for k in range(4))
    ev_full = np.linalg.eigvals(full)
    ev = np.linalg.eigvals(rep.slash([m, 0, 0, 0]))
    assert np.abs(ev.imag).max() < 1e-12
    ev = np.sort(ev.real)
    # every projected eigenvalue appears in the unprojected spectrum
    for v in ev:
        assert np.abs(ev_full - v).min() < 1e-12
    assert np.allclose(ev, np.sort(-ev), atol=1e-12)
    assert np.allclose(ev, [-m] * 3 + [0] * 4 + [m] * 3, atol=1e-12)


def test_half_spin_spectrum_doubly_degenerate():
    rep = build_rep(0.5)
    rng = np.random.default_rng(3)
    for _ in range(10):
        v = rng.uniform(-0.8, 0.8, 3)
        v *= 0.9 / max(np.linalg.norm(v), 0.9)
        m = rng.uniform(0.5, 2)
        p = m * np.concatenate([[1.0], v]) / np.sqrt(1 - v @ v)
        ev = np.sort(np.linalg.eigvals(rep.slash(p)).real)
        assert np.allclose(ev, [-m, -m, m, m], rtol=1e-10)


def test_lorentz_covariance_of_beta(rep):
    v = np.array([0.3, -0.4, 0.2])
    L = boost_matrix(v)
    Sb = spinor_boost(rep, v)
    Si = np.linalg.inv(Sb)
    for m in range(4):
        lhs = Si @ rep.beta[m] @ Sb
        rhs = np.einsum("n,nab->ab", L[m], rep.beta)
        assert np.abs(lhs - rhs).max() < 1e-12


# --- dual ------------------------------------------------------------------


def antisym(rng):
    A = rng.normal(size=(4, 4))
    return A - A.T


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_double_dual(seed):
    T = antisym(np.random.default_rng(seed))
    assert np.abs(dual(dual(T)) + T).max() < 1e-13


def test_dual_single_component_oracle():
    T = np.zeros((4, 4))
    T[1, 2], T[2, 1] = 1.0, -1.0
    D = dual(T)
    # T_{12} = +1 with two spatial lowerings; eps^{0312} = +1
    expected = np.zeros((4, 4))
    for m, n in itertools.product(range(4), repeat=2):
        expected[m, n] = 0.5 * sum(brute_epsilon(m, n, a, b) * (METRIC @ T @ METRIC)[a, b]
                                   for a in range(4) for b in range(4))
    assert np.allclose(D, expected)
    nz = {tuple(i) for i in np.argwhere(np.abs(D) > 0)}
    assert nz == {(0, 3), (3, 0)}


def test_dual_zero_and_rejects_symmetric():
    assert np.array_equal(dual(np.zeros((4, 4))), np.zeros((4, 4)))
    with pytest.raises(NotAntisymmetric):
        dual(np.eye(4))


# --- projector -------------------------------------------------------------


def test_projector_n1_identity():
    assert np.allclose(sym_projector(1), np.eye(4))


def test_projector_isometry_and_antisymmetric_kernel():
    P = sym_projector(2)
    assert P.shape == (16, 10)
    assert np.abs(P.conj().T @ P - np.eye(10)).max() < 1e-13
    rng = np.random.default_rng(0)
    v, w = rng.normal(size=4), rng.normal(size=4)
    anti = np.kron(v, w) - np.kron(w, v)
    assert np.abs(P.conj().T @ anti).max() < 1e-13


def test_rep_is_immutable(rep):
    with pytest.raises(ValueError):
        rep.beta[0, 0, 0] = 2.0
