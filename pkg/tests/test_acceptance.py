"""Acceptance gate: one test per criterion, each recording a pass/fail line.

Run alone with ``pytest tests/test_acceptance.py -v``; the summary lines are
printed at the end of the session.
"""

import time

import numpy as np
import pytest

from spinphase.dynamics import (
    IntegratorConfig,
    exact_trajectory,
    integrate,
    oscillation_frequency,
    propagate_exact,
    zbw_period,
)
from spinphase.em_coupling import FieldConfig, integrate_em
from spinphase.phase_space import (
    PhaseState,
    StateSampler,
    bracket,
    check_z_not_canonical,
    decomposition_residuals,
    hamiltonian,
    suite_for,
    verify_algebra,
)
from spinphase.radiation import eigenstate, no_radiation_predicates, radiated_rate_series
from spinphase.repspace import METRIC, build_rep

HBAR_MEV_S = 6.582119569e-22
DUAL_RATIO = 2.0  # pinned: (1/2) S*_{mn} S^{mn} = DUAL_RATIO * W.r
SPINS = (0.5, 1)


def test_criterion_1_electron_zbw_frequency(acceptance):
    start = time.perf_counter()
    m_mev = 0.511
    rep = build_rep(0.5)
    xi = (eigenstate(rep, [m_mev, 0, 0, 0], 1) + eigenstate(rep, [m_mev, 0, 0, 0], -1)) / np.sqrt(2)
    state = PhaseState(np.zeros(4), [m_mev, 0, 0, 0], xi, lam=1.0)  # energies in MeV, lam = hbar
    T = zbw_period(state.p, state.lam, state.spin)
    traj = exact_trajectory(state, np.linspace(0, 10 * T, 4001))
    omega_si = oscillation_frequency(traj.tau, traj.r) / HBAR_MEV_S
    elapsed = time.perf_counter() - start
    ok = abs(omega_si / 1.5e21 - 1) < 0.05 and elapsed < 1.0
    acceptance(1, ok, f"omega = {omega_si:.4e} 1/s (target 1.5e21 within 5%), {elapsed:.3f} s")
    assert ok


def test_criterion_2_bracket_algebra(acceptance):
    start = time.perf_counter()
    worst = {}
    for s in SPINS:
        rep = build_rep(s)
        report = verify_algebra(rep, StateSampler(rep, seed=2024), 100, raise_on_failure=False)
        for k, v in report.residuals.items():
            worst[f"{k}(s={s})"] = v
    elapsed = time.perf_counter() - start
    ok = max(worst.values()) < 1e-9 and elapsed < 10.0
    acceptance(2, ok, f"max relative residual {max(worst.values()):.2e} over 100 states "
                      f"per spin, {elapsed:.2f} s")
    assert ok


def test_criterion_3_invariant_identities(acceptance):
    worst = {"reconstruction": 0.0, "norm": 0.0, "r_dot_p": 0.0, "W_dot_p": 0.0}
    ratio_dev = 0.0
    for s in SPINS:
        rep = build_rep(s)
        sampler = StateSampler(rep, seed=77)
        for _ in range(100):
            res = decomposition_residuals(rep, sampler())
            for k in worst:
                worst[k] = max(worst[k], res[k])
            ratio_dev = max(ratio_dev, abs(res["dual_ratio"] - DUAL_RATIO))
    ok = max(worst.values()) < 1e-10 and ratio_dev < 1e-8
    acceptance(3, ok, f"identities max {max(worst.values()):.2e}; "
                      f"dual ratio pinned at {DUAL_RATIO} (deviation {ratio_dev:.1e})")
    assert ok


def test_criterion_4_integrator_cross_validation(acceptance):
    rep = build_rep(0.5)
    state = StateSampler(rep, seed=5)()
    T = zbw_period(state.p, state.lam, state.spin)
    x_exact = propagate_exact(state, T).x
    fine = integrate(state, IntegratorConfig("rk4", T / 1e4, T, 10_000)).x[-1]
    agree = np.abs(fine - x_exact).max()
    # the order study needs steps where truncation error dominates roundoff
    errs = [np.abs(integrate(state, IntegratorConfig("rk4", T / n, T, n)).x[-1] - x_exact).max()
            for n in (40, 80)]
    ratio = errs[0] / errs[1]
    ok = agree < 1e-6 and 12 <= ratio <= 20
    acceptance(4, ok, f"|x_rk4 - x_exact| = {agree:.2e} at dt = T/1e4; "
                      f"halving T/40 -> T/80 gains {ratio:.2f}x")
    assert ok


def test_criterion_5_conservation(acceptance):
    worst = {"p": 0.0, "J": 0.0, "W": 0.0, "norm": 0.0, "H": 0.0}
    for s in SPINS:
        rep = build_rep(s)
        sampler = StateSampler(rep, seed=55)
        for _ in range(5):
            state = sampler()
            T = zbw_period(state.p, state.lam, state.spin)
            traj = integrate(state, IntegratorConfig("exact", T / 200, 10 * T))
            worst["p"] = max(worst["p"], np.abs(traj.p - state.p).max())
            worst["J"] = max(worst["J"], np.abs(traj.J - traj.J[0]).max())
            worst["W"] = max(worst["W"], np.abs(traj.W - traj.W[0]).max())
            worst["norm"] = max(worst["norm"], np.abs(traj.spinor_norm - traj.spinor_norm[0]).max())
            worst["H"] = max(worst["H"], np.abs(traj.H - traj.H[0]).max())
    ok = (worst["p"] == 0 and worst["J"] < 1e-9 and worst["W"] < 1e-9
          and worst["norm"] < 1e-11 and worst["H"] < 1e-11)
    acceptance(5, ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))
    assert ok


def test_criterion_6_eigenstate_sector(acceptance):
    rng = np.random.default_rng(6)
    disagreements, worst_pure = 0, 0.0
    n_pure = n_mixed = 0
    for k in range(100):
        s = SPINS[k % 2]
        rep = build_rep(s)
        state = StateSampler(rep, seed=600 + k)()
        pure = k % 4 != 3
        if pure:
            sign = int(rng.choice([1, -1]))
            index = int(rng.integers(2 if s == 0.5 else 3))
            xi = eigenstate(rep, state.p, sign, index) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            state = state.replace(xi=xi)
        preds = no_radiation_predicates(state)
        disagreements += len(set(preds)) != 1
        if pure:
            n_pure += preds[0]
            T = zbw_period(state.p, state.lam, state.spin)
            taus = np.linspace(0, T, 32)
            traj = exact_trajectory(state, taus)
            u = traj.u
            u2 = np.einsum("nm,mk,nk->n", u, METRIC, u)
            dx = traj.x[1:] - traj.x[0]
            galileo = np.abs(dx[:, 1:] / dx[:, :1] - state.p[1:] / state.p[0]).max()
            worst_pure = max(worst_pure, np.abs(traj.r).max(),
                             np.abs(radiated_rate_series(state, taus)).max(),
                             np.abs(u2 - 1).max(), galileo)
        else:
            n_mixed += not preds[0]
    ok = disagreements == 0 and worst_pure < 1e-10 and n_pure == 75 and n_mixed == 25
    acceptance(6, ok, f"{disagreements} disagreements over 100 states "
                      f"({n_pure} pure, {n_mixed} mixed); pure-state residual {worst_pure:.1e}")
    assert ok


def test_criterion_7_hamilton_lagrange(acceptance):
    worst = 0.0
    for k in range(20):
        rep = build_rep(SPINS[k % 2])
        s = suite_for(rep)
        H = hamiltonian(rep)
        state = StateSampler(rep, seed=700 + k)()
        T = zbw_period(state.p, state.lam, state.spin)
        h = T * 1e-4
        traj = exact_trajectory(state, [-h, h])
        for name in ("x", "r", "S"):
            obs = getattr(s, name)
            slope = np.real(bracket(obs, H).value(state))
            series = getattr(traj, name)
            fd = (series[1] - series[0]) / (2 * h)
            scale = max(1.0, np.abs(slope).max())
            worst = max(worst, np.abs(slope - fd).max() / scale)
    ok = worst < 1e-6
    acceptance(7, ok, f"max |{{F,H}} - dF/dtau| = {worst:.2e} for F in x, r, S at 20 states")
    assert ok


def test_criterion_8_z_not_canonical(acceptance):
    xi = np.array([0.6 + 0.1j, 0.2 - 0.3j, 0.5 + 0.2j, -0.1 + 0.4j])
    state = PhaseState([0.1, 0.2, -0.3, 0.4], [1.3, 0.2, -0.1, 0.4], xi, lam=1.0)
    rep = state.rep
    zz = check_z_not_canonical(rep, state)
    xx = np.abs(bracket(suite_for(rep).x, suite_for(rep).x).value(state)).max()
    ok = zz > 1e-3 and xx < 1e-13
    acceptance(8, ok, f"max |{{z,z}}| = {zz:.4f}, max |{{x,x}}| = {xx:.1e}")
    assert ok


def _uniform_b(B, e):
    F = np.zeros((4, 4))
    F[1, 2], F[2, 1] = B, -B
    return FieldConfig("uniform", e, F=F)


def test_criterion_9_em_coupling(acceptance):
    rep = build_rep(0.5)
    p = np.array([np.sqrt(1.25), 0.5, 0.0, 0.0])
    T = zbw_period(p, 1.0, 0.5)

    # (a) e -> 0: deviation from the free trajectory halves with e
    mixed = PhaseState(np.zeros(4), p, np.array([0.8, 0.1j, 0.5, -0.2]))
    cfg = IntegratorConfig("rk4", T / 200, 2 * T, 400)
    free = integrate(mixed, cfg).x[-1]
    errs = [np.abs(integrate_em(mixed, _uniform_b(1.0, e), cfg)[1].x[-1] - free).max()
            for e in (1e-2, 5e-3, 2.5e-3)]
    ratios = [a / b for a, b in zip(errs, errs[1:])]
    linear = all(abs(r - 2) < 0.05 for r in ratios)

    # (b) purity leaves 1 under a weak uniform field, starting from an eigenstate
    pure = PhaseState(np.zeros(4), p, eigenstate(rep, p, 1))
    report, _ = integrate_em(pure, _uniform_b(0.01, 1.0), IntegratorConfig("rk4", T / 2000, T, 20))
    early = report.tau <= 0.45 * T
    decays = (bool(np.all(report.purity[1:] < 1 - 1e-12))
              and bool(np.all(np.diff(report.purity[early]) < 0)))

    # (c) zbw frequency in a weak plane wave stays at sqrt(pi^2)/(lam s)
    wave = FieldConfig.plane_wave(0.05, 0.3, 0.1)
    rep_w, _ = integrate_em(mixed, wave, IntegratorConfig("rk4", T / 400, 10 * T))
    pi0 = rep_w.kinetic[0]
    w_ref = np.sqrt(pi0 @ METRIC @ pi0) / (mixed.lam * rep.s)
    w_dev = abs(rep_w.measured_frequency() / w_ref - 1)

    ok = linear and decays and w_dev < 0.01
    acceptance(9, ok, f"e-halving ratios {ratios[0]:.3f}, {ratios[1]:.3f}; "
                      f"min purity {report.purity.min():.8f}; frequency deviation {w_dev:.2e}")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
