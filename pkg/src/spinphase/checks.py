"""Property suite run by ``spinphase verify``.

Every check returns a :class:`CheckResult`; the suite is a flat list of them so
reports serialize trivially.  Sample counts scale with ``cases``; ``cases=0``
yields an empty suite.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from spinphase.dynamics import (
    IntegratorConfig,
    exact_trajectory,
    integrate,
    zbw_period,
)
from spinphase.phase_space import (
    StateSampler,
    algebra_residuals,
    bracket,
    check_z_not_canonical,
    decomposition_residuals,
    suite_for,
)
from spinphase.radiation import eigenstate, no_radiation_predicates
from spinphase.repspace import METRIC, build_rep

DUAL_RATIO = 2.0  # (1/2 S*S) / (W.r), pinned from the brute-force identity check
BOOST = np.array([0.3, -0.2, 0.5])


@dataclass
class CheckResult:
    name: str
    residual: float
    tolerance: float
    passed: bool

    def as_dict(self):
        d = asdict(self)
        d["residual"] = float(d["residual"])
        return d


def _check(name, residual, tol, upper=True) -> CheckResult:
    residual = float(residual)
    ok = residual <= tol if upper else residual >= tol
    return CheckResult(name, residual, tol, bool(ok and np.isfinite(residual)))


def _spin_tag(s) -> str:
    return "s1/2" if float(s) == 0.5 else "s1"


def algebra_checks(seed: int, cases: int, metric=METRIC):
    out = []
    for s in (0.5, 1):
        rep = build_rep(s)
        tag = _spin_tag(s)
        for boosted in (False, True):
            sampler = StateSampler(rep, seed=seed, boost=BOOST if boosted else None)
            worst = {"WW": 0.0, "Wr": 0.0, "rr": 0.0}
            for _ in range(cases):
                for k, v in algebra_residuals(rep, sampler(), metric).items():
                    worst[k] = max(worst[k], v)
            suffix = "_boosted" if boosted else ""
            out += [_check(f"bracket_{k}_{tag}{suffix}", v, 1e-9) for k, v in worst.items()]
    return out


def identity_checks(seed: int, cases: int):
    out = []
    for s in (0.5, 1):
        rep = build_rep(s)
        sampler = StateSampler(rep, seed=seed + 1)
        worst = {"reconstruction": 0.0, "norm": 0.0, "r_dot_p": 0.0, "W_dot_p": 0.0,
                 "dual_ratio": 0.0}
        for _ in range(cases):
            res = decomposition_residuals(rep, sampler())
            for k in ("reconstruction", "norm", "r_dot_p", "W_dot_p"):
                worst[k] = max(worst[k], res[k])
            worst["dual_ratio"] = max(worst["dual_ratio"], abs(res["dual_ratio"] - DUAL_RATIO))
        tag = _spin_tag(s)
        out += [_check(f"identity_{k}_{tag}", v, 1e-10 if k != "dual_ratio" else 1e-8)
                for k, v in worst.items()]
    return out


def jacobi_checks(seed: int, cases: int):
    rep = build_rep(0.5)
    suite = suite_for(rep)
    sampler = StateSampler(rep, seed=seed + 2)
    rng = np.random.default_rng(seed + 2)
    pool = [suite.x, suite.p_lower, suite.W, suite.r]
    worst = 0.0
    for _ in range(min(cases, 5)):
        state = sampler()
        a, b, c = (pool[i][int(rng.integers(4))] for i in rng.integers(0, 4, size=3))
        total = (bracket(a, bracket(b, c)) + bracket(b, bracket(c, a))
                 + bracket(c, bracket(a, b))).value(state)
        worst = max(worst, float(np.abs(total)))
    return [_check("jacobi", worst, 1e-6)]


def integrator_checks(seed: int, cases: int):
    rep = build_rep(0.5)
    state = StateSampler(rep, seed=seed + 3)()
    T = zbw_period(state.p, state.lam, rep.s)
    exact = integrate(state, IntegratorConfig("exact", T / 1e4, T, 10_000)).x[-1]
    fine = integrate(state, IntegratorConfig("rk4", T / 1e4, T, 10_000)).x[-1]
    err = [np.abs(integrate(state, IntegratorConfig("rk4", T / n, T, n)).x[-1] - exact).max()
           for n in (40, 80)]
    return [
        _check("rk4_vs_exact", np.abs(fine - exact).max(), 1e-6),
        CheckResult("rk4_order", err[0] / err[1], 12.0,
                    bool(12.0 <= err[0] / err[1] <= 20.0)),
    ]


def conservation_checks(seed: int, cases: int):
    out = []
    for s in (0.5, 1):
        rep = build_rep(s)
        state = StateSampler(rep, seed=seed + 4)()
        T = zbw_period(state.p, state.lam, rep.s)
        traj = exact_trajectory(state, np.linspace(0.0, 10 * T, 2001))
        tag = _spin_tag(s)
        out += [
            _check(f"conserved_p_{tag}", np.abs(traj.p - state.p).max(), 0.0),
            _check(f"conserved_J_{tag}", np.abs(traj.J - traj.J[0]).max(), 1e-9),
            _check(f"conserved_W_{tag}", np.abs(traj.W - traj.W[0]).max(), 1e-9),
            _check(f"conserved_norm_{tag}",
                   np.abs(traj.spinor_norm - traj.spinor_norm[0]).max(), 1e-11),
            _check(f"conserved_H_{tag}", np.abs(traj.H - traj.H[0]).max(), 1e-11),
        ]
    return out


def radiation_checks(seed: int, cases: int):
    disagreements = 0
    rng = np.random.default_rng(seed + 5)
    for k in range(cases):
        s = (0.5, 1)[k % 2]
        rep = build_rep(s)
        state = StateSampler(rep, seed=seed + 5 + k)()
        if k % 3 != 2:
            sign = 1 if k % 3 == 0 else -1
            index = int(rng.integers(rep.dim // 2 if s == 0.5 else 3))
            state = state.replace(xi=eigenstate(rep, state.p, sign, index))
        preds = no_radiation_predicates(state)
        disagreements += len(set(preds)) != 1
    return [_check("no_radiation_predicates_disagree", disagreements, 0)]


def canonical_checks(seed: int, cases: int):
    rep = build_rep(0.5)
    state = StateSampler(rep, seed=seed + 6)()
    xx = bracket(suite_for(rep).x, suite_for(rep).x).value(state)
    return [
        _check("z_not_canonical", check_z_not_canonical(rep, state), 1e-3, upper=False),
        _check("x_canonical", np.abs(xx).max(), 1e-13),
    ]


def run_suite(seed: int = 0, cases: int = 20, metric=METRIC):
    """Run every check; an empty list when ``cases == 0``."""
    if cases < 0:
        raise ValueError("cases must be non-negative")
    if cases == 0:
        return []
    results = algebra_checks(seed, cases, metric)
    results += identity_checks(seed, cases)
    results += jacobi_checks(seed, cases)
    results += integrator_checks(seed, cases)
    results += conservation_checks(seed, cases)
    results += radiation_checks(seed, cases)
    results += canonical_checks(seed, cases)
    return results
