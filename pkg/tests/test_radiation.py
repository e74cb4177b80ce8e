import numpy as np
import pytest

from spinphase.dynamics import exact_trajectory, zbw_period
from spinphase.errors import DegenerateOperator
from spinphase.phase_space import PhaseState, StateSampler, suite_for
from spinphase.radiation import (
    current,
    diagnose,
    eigen_split,
    eigenstate,
    no_radiation_predicates,
    radiated_rate,
    radiated_rate_series,
    radius_acceleration,
    sector_basis,
)
from spinphase.repspace import METRIC, build_rep

from conftest import mixed_rest_state


def test_current(rep, sampler):
    state = sampler()
    u = suite_for(rep).u.value(state).real
    assert np.allclose(current(state, 0.0), 0)
    assert np.allclose(current(state, 2.0), 2 * current(state, 1.0))
    assert np.allclose(current(state, 1.5), 1.5 * u)
    p = np.array([1.1, 0.2, 0.3, -0.4])
    pure = PhaseState(np.zeros(4), p, eigenstate(rep, p, 1), spin=rep.spin)
    assert np.allclose(current(pure, 0.7), 0.7 * p / np.sqrt(p @ METRIC @ p), atol=1e-12)


def test_rate_at_rest_mixed_state():
    state = mixed_rest_state()
    T = zbw_period(state.p, state.lam, state.spin)
    rate = radiated_rate(state, T / 4, e=1.0)
    assert rate[0] > 0
    acc = radius_acceleration(state, T / 4)
    assert acc @ METRIC @ acc < 0
    assert np.allclose(radiated_rate(state, T / 4, e=3.0), 9 * rate)


def test_acceleration_against_finite_differences(rep, sampler):
    state = sampler()
    T = zbw_period(state.p, state.lam, state.spin)
    h = T * 1e-3
    taus = 0.3 * T + np.array([-h, 0.0, h])
    r = exact_trajectory(state, taus).r
    fd = (r[0] - 2 * r[1] + r[2]) / h**2
    assert np.allclose(radius_acceleration(state, taus[1]), fd, atol=1e-5 * max(1, np.abs(fd).max()))


def test_rate_direction_and_sign(rep, sampler):
    state = sampler()
    T = zbw_period(state.p, state.lam, state.spin)
    taus = np.linspace(0, T, 33)
    rates = radiated_rate_series(state, taus, 1.0)
    traj = exact_trajectory(state, taus)
    for k, tau in enumerate(taus):
        acc = radius_acceleration(state, tau)
        a2 = acc @ METRIC @ acc
        assert a2 <= 1e-15
        assert np.allclose(rates[k], -(2 / 3) * a2 * traj.u[k], atol=1e-12)
    assert np.allclose(rates[5], radiated_rate(state, taus[5]))


def test_eigen_split_pure_and_mixed():
    rep = build_rep(0.5)
    p = np.array([1.0, 0, 0, 0])
    pure = PhaseState(np.zeros(4), p, [1, 0, 0, 0])
    split = eigen_split(pure)
    assert split.purity == pytest.approx(1.0)
    assert split.dominant().label == "particle"
    assert split.dominant().eigenvalue == pytest.approx(1.0)
    mixed = PhaseState(np.zeros(4), p, np.array([1, 0, 1, 0]) / np.sqrt(2))
    split = eigen_split(mixed)
    labels = sorted(s.label for s in split.sectors)
    assert labels == ["antiparticle", "particle"]
    # weights |xi_bar xi| of the two halves are both 1/2
    assert split.purity == pytest.approx(0.5)
    assert np.allclose(split.reconstruct(), mixed.xi, atol=1e-12)


def test_eigen_split_oracle(rep, sampler):
    """Projectors from a direct eigendecomposition reproduce the sector amplitudes."""
    for _ in range(5):
        state = sampler()
        split = eigen_split(state)
        M = rep.slash(state.p)
        w, V = np.linalg.eig(M)
        Vi = np.linalg.inv(V)
        for sec in split.sectors:
            sel = np.abs(w - sec.eigenvalue) < 1e-8
            P = V[:, sel] @ Vi[sel]
            assert np.allclose(P @ state.xi, sec.amplitude, atol=1e-10)
        assert np.allclose(split.reconstruct(), state.xi, atol=1e-12)
        assert 0 < split.purity <= 1


def test_spin_one_reports_zero_sector():
    rep = build_rep(1)
    state = StateSampler(rep, seed=4)()
    split = eigen_split(state)
    labels = sorted(s.label for s in split.sectors)
    assert labels == ["antiparticle", "other", "particle"]
    other = split.sector("other")
    assert other.eigenvalue == pytest.approx(0.0, abs=1e-10)
    assert other.basis.shape[1] == 4 and np.all(other.signature == -1)


# indefinite norm of the +m / -m sectors: (+1, -1) for spin 1/2 but (+1, +1) for spin 1,
# where the zero-eigenvalue sector carries the negative norm
SECTOR_NORMS = {4: (1, -1), 10: (1, 1)}


def test_eigenstate_normalization(rep):
    p = np.array([1.3, 0.1, -0.5, 0.2])
    m = np.sqrt(p @ METRIC @ p)
    n = 2 if rep.dim == 4 else 3
    for sign, norm in zip((1, -1), SECTOR_NORMS[rep.dim]):
        for k in range(n):
            xi = eigenstate(rep, p, sign, k)
            assert np.real(rep.bar(xi) @ xi) == pytest.approx(norm)
            assert np.allclose(rep.slash(p) @ xi, sign * m * xi, atol=1e-12)
    with pytest.raises(IndexError):
        eigenstate(rep, p, 1, n)


def test_lightlike_momentum_is_degenerate(rep):
    with pytest.raises(DegenerateOperator):
        sector_basis(rep, [1.0, 0, 0, 1.0])


def test_no_radiation_equivalence(rep):
    rng = np.random.default_rng(21)
    sampler = StateSampler(rep, seed=21)
    n_pol = 2 if rep.dim == 4 else 3
    seen = set()
    for k in range(50):
        state = sampler()
        if k % 2 == 0:
            xi = eigenstate(rep, state.p, int(rng.choice([-1, 1])), int(rng.integers(n_pol)))
            state = state.replace(xi=xi * rng.uniform(0.5, 2) * np.exp(1j * rng.uniform(0, 6)))
        preds = no_radiation_predicates(state)
        assert len(set(preds)) == 1
        seen.add(preds[0])
    assert seen == {True, False}


def test_diagnose_inconsistency_triad():
    state = mixed_rest_state()
    d = diagnose(state)
    assert d.radiating and d.momentum_drift == 0.0
    assert d.max_rate > 0 and d.rest_frame_rate > 0
    assert d.zbw_frequency == pytest.approx(2.0)
    assert d.purity == pytest.approx(0.5)
    pure = diagnose(PhaseState(np.zeros(4), [1, 0, 0, 0], [0, 1, 0, 0]))
    assert not pure.radiating and pure.max_radius < 1e-12


def test_purity_series_matches_eigen_split(rep):
    from spinphase.radiation import purity_series

    sampler = StateSampler(rep, seed=8)
    states = [sampler() for _ in range(12)]
    series = purity_series(rep, [s.xi for s in states], [s.p for s in states])
    assert np.allclose(series, [eigen_split(s).purity for s in states], atol=1e-14)
    shared = purity_series(rep, [s.xi for s in states], [states[0].p] * 12)
    assert np.allclose(shared, [eigen_split(s, p=states[0].p).purity for s in states], atol=1e-14)
