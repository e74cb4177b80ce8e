"""Free motion: equations of motion, exact propagator, RK4 and trajectory analysis."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterator

import numpy as np
from scipy.linalg import expm

from spinphase.errors import ConfigError, InconsistentMomentum, ZeroLambda
from spinphase.phase_space import PhaseState, suite_for
from spinphase.repspace import METRIC, RepMatrices

COND_LIMIT = 1e8


def _check_lambda(lam: float):
    if lam == 0.0:
        raise ZeroLambda("lambda must be non-zero")


def zbw_frequency(p, lam: float, s) -> float:
    """Angular frequency ``sqrt(p^2) / (lam s)`` of the radius rotation."""
    p = np.asarray(p, dtype=float)
    return float(np.sqrt(p @ METRIC @ p) / (lam * float(s)))


def zbw_period(p, lam: float, s) -> float:
    return 2.0 * np.pi / zbw_frequency(p, lam, s)


def eom(state: PhaseState):
    """``(xdot, pdot, xidot)`` of the free equations of motion."""
    _check_lambda(state.lam)
    rep = state.rep
    xdot = np.real(rep.bilinear(state.xi, rep.beta))
    xidot = (-1j / state.lam) * (rep.slash(state.p) @ state.xi)
    return xdot, np.zeros(4), xidot


class SpinorPropagator:
    """``exp(-(i/lam) beta.p tau)`` for fixed ``p``.

    Uses the eigendecomposition of ``beta.p`` when its eigenbasis is well
    conditioned, otherwise scaling-and-squaring (:func:`scipy.linalg.expm`).
    """

    def __init__(self, rep: RepMatrices, p, lam: float):
        _check_lambda(lam)
        self.generator = (-1j / lam) * rep.slash(p)
        evals, evecs = np.linalg.eig(rep.slash(p))
        self.condition = float(np.linalg.cond(evecs))
        self.diagonal = self.condition <= COND_LIMIT
        if self.diagonal:
            self._evals = evals
            self._evecs = evecs
            self._inv = np.linalg.inv(evecs)
        self._lam = lam

    def matrix(self, tau: float) -> np.ndarray:
        if self.diagonal:
            phase = np.exp((-1j / self._lam) * self._evals * tau)
            return (self._evecs * phase) @ self._inv
        return expm(self.generator * tau)

    def apply(self, xi, taus) -> np.ndarray:
        """Propagated spinors for every ``tau`` in ``taus``; shape ``(len(taus), D)``."""
        taus = np.atleast_1d(np.asarray(taus, dtype=float))
        if self.diagonal:
            coeff = self._inv @ xi
            phase = np.exp((-1j / self._lam) * np.outer(taus, self._evals))
            return (phase * coeff) @ self._evecs.T
        return np.array([self.matrix(t) @ xi for t in taus])


def closed_form_radius(state: PhaseState, tau):
    """``r(tau) = r(0) cos(w tau) + rdot(0) sin(w tau) / w`` with ``w = sqrt(p^2)/(lam s)``.

    ``rdot(0)`` is the velocity projected orthogonally to ``p``.  Accepts a
    scalar or an array of proper times (result shape ``tau.shape + (4,)``).
    """
    p = state.p
    p2 = state.p2
    if p2 <= 0.0:
        raise ValueError("closed form needs timelike p")
    suite = suite_for(state.rep)
    r0 = np.real(suite.r.value(state))
    u0 = np.real(suite.u.value(state))
    rdot0 = u0 - (u0 @ METRIC @ p) / p2 * p
    w = zbw_frequency(p, state.lam, state.spin)
    t = np.asarray(tau, dtype=float)[..., None]
    return r0 * np.cos(w * t) + rdot0 * (np.sin(w * t) / w)


def propagate_exact(state: PhaseState, tau: float) -> PhaseState:
    """State at proper time ``tau`` from the closed-form solution."""
    _check_lambda(state.lam)
    prop = SpinorPropagator(state.rep, state.p, state.lam)
    xi = prop.apply(state.xi, [tau])[0]
    return state.replace(x=_exact_positions(state, np.array([tau]))[0], xi=xi)


def _exact_positions(state: PhaseState, taus: np.ndarray) -> np.ndarray:
    suite = suite_for(state.rep)
    r0 = np.real(suite.r.value(state))
    slope = float(np.real(suite.f_slope.value(state)))
    center = state.x - r0
    return center + slope * taus[:, None] * state.p + closed_form_radius(state, taus)


# -------------------------------------------------------------- integration


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "exact"  # "exact" | "rk4"
    dt: float = 1e-3
    tau_end: float = 1.0
    stride: int = 1

    def __post_init__(self):
        if self.method not in ("exact", "rk4"):
            raise ConfigError(f"unknown integration method {self.method!r}")
        if not self.dt > 0:
            raise ConfigError("dt must be positive")
        if not self.tau_end >= 0:
            raise ConfigError("tau_end must be non-negative")
        if int(self.stride) < 1:
            raise ConfigError("stride must be >= 1")

    @property
    def n_steps(self) -> int:
        return int(np.ceil(self.tau_end / self.dt - 1e-9))


def rk4_step(f: Callable[[float, np.ndarray], np.ndarray], t: float, y: np.ndarray,
             h: float) -> np.ndarray:
    """One classic fourth-order Runge-Kutta step."""
    k1 = f(t, y)
    k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def pack(state: PhaseState) -> np.ndarray:
    return np.concatenate([state.x, state.p, state.xi]).astype(complex)


def free_rhs(rep: RepMatrices, lam: float):
    """Right-hand side on the packed vector ``(x, p, xi)``."""
    _check_lambda(lam)

    def rhs(t, y):
        xi = y[8:]
        p = y[4:8].real
        xdot = rep.bilinear(xi, rep.beta).real
        xidot = (-1j / lam) * (rep.slash(p) @ xi)
        return np.concatenate([xdot, np.zeros(4), xidot])

    return rhs


def run_rk4(rhs, y0: np.ndarray, cfg: IntegratorConfig):
    """Fixed-step RK4; the last step is shortened to land on ``tau_end``."""
    n = cfg.n_steps
    taus, ys = [0.0], [y0]
    y, t = y0, 0.0
    for k in range(1, n + 1):
        h = min(cfg.dt, cfg.tau_end - t) if k == n else cfg.dt
        y = rk4_step(rhs, t, y, h)
        t = cfg.tau_end if k == n else t + h
        if k % cfg.stride == 0 or k == n:
            taus.append(t)
            ys.append(y)
    return np.array(taus), np.array(ys)


@dataclass(frozen=True)
class TrajectorySample:
    tau: float
    x: np.ndarray
    p: np.ndarray
    xi: np.ndarray
    u: np.ndarray
    r: np.ndarray
    W: np.ndarray
    S: np.ndarray
    H: float


class Trajectory:
    """Sampled trajectory; derived observables are computed on first access."""

    def __init__(self, tau, x, p, xi, lam: float, rep: RepMatrices):
        self.tau = np.asarray(tau, dtype=float)
        self.x = np.asarray(x, dtype=float)
        self.p = np.asarray(p, dtype=float)
        self.xi = np.asarray(xi, dtype=complex)
        self.lam = float(lam)
        self.rep = rep

    def _along(self, name):
        obs = getattr(suite_for(self.rep), name)
        return obs.along(self.x, self.p, self.xi, self.lam, self.rep)

    @cached_property
    def u(self):
        return self._along("u").real

    @cached_property
    def r(self):
        return self._along("r").real

    @cached_property
    def W(self):
        return self._along("W").real

    @cached_property
    def S(self):
        return self._along("S").real

    @cached_property
    def J(self):
        return self._along("J").real

    @cached_property
    def X(self):
        return self._along("X").real

    @cached_property
    def H(self):
        return self._along("H").real

    @cached_property
    def spinor_norm(self):
        return self._along("spinor_norm").real

    def state(self, k: int) -> PhaseState:
        return PhaseState(self.x[k], self.p[k], self.xi[k], self.lam, self.rep.spin)

    def __len__(self):
        return self.tau.size

    def __getitem__(self, k) -> TrajectorySample:
        return TrajectorySample(self.tau[k], self.x[k], self.p[k], self.xi[k], self.u[k],
                                self.r[k], self.W[k], self.S[k], float(self.H[k]))

    def __iter__(self) -> Iterator[TrajectorySample]:
        for k in range(len(self)):
            yield self[k]


def exact_trajectory(state: PhaseState, taus) -> Trajectory:
    taus = np.asarray(taus, dtype=float)
    prop = SpinorPropagator(state.rep, state.p, state.lam)
    xi = prop.apply(state.xi, taus)
    x = _exact_positions(state, taus)
    p = np.broadcast_to(state.p, (taus.size, 4)).copy()
    return Trajectory(taus, x, p, xi, state.lam, state.rep)


def integrate(state: PhaseState, cfg: IntegratorConfig) -> Trajectory:
    """Free trajectory sampled every ``cfg.stride`` steps (plus the end point)."""
    _check_lambda(state.lam)
    if cfg.method == "exact":
        n = cfg.n_steps
        ks = list(range(0, n + 1, cfg.stride))
        if ks[-1] != n:
            ks.append(n)
        taus = np.minimum(np.array(ks, dtype=float) * cfg.dt, cfg.tau_end)
        return exact_trajectory(state, taus)
    taus, ys = run_rk4(free_rhs(state.rep, state.lam), pack(state), cfg)
    return Trajectory(taus, ys[:, :4].real, ys[:, 4:8].real, ys[:, 8:], state.lam, state.rep)


# ----------------------------------------------------------------- analysis


def crossing_times(tau, signal, rising=None) -> np.ndarray:
    """Zero crossings of a sampled signal by linear interpolation.

    ``rising`` selects upward (``True``) or downward (``False``) crossings only.
    """
    tau = np.asarray(tau, dtype=float)
    y = np.asarray(signal, dtype=float)
    mask = np.signbit(y[:-1]) != np.signbit(y[1:])
    if rising is not None:
        mask &= (y[1:] > y[:-1]) == rising
    idx = np.nonzero(mask)[0]
    y0, y1 = y[idx], y[idx + 1]
    return tau[idx] + (tau[idx + 1] - tau[idx]) * y0 / (y0 - y1)


def oscillation_frequency(tau, series, min_range: float = 1e-12) -> float:
    """Angular frequency from zero-crossing timing of the dominant component.

    ``series`` is ``(n,)`` or ``(n, k)``; for several components the one with
    the largest peak-to-peak range is used.  Upward crossings alone are timed
    when there are at least two of them (a small offset then shifts every
    crossing equally); otherwise all crossings are used.  Returns ``nan`` when
    fewer than two crossings are found or the range is below ``min_range``.
    """
    series = np.asarray(series, dtype=float)
    if series.ndim == 2:
        series = series[:, np.argmax(np.ptp(series, axis=0))]
    if series.size < 2 or np.ptp(series) < min_range:
        return float("nan")
    series = series - series.mean()
    up = crossing_times(tau, series, rising=True)
    if up.size >= 2:
        return float(2 * np.pi * (up.size - 1) / (up[-1] - up[0]))
    t = crossing_times(tau, series)
    if t.size < 2:
        return float("nan")
    return float(np.pi * (t.size - 1) / (t[-1] - t[0]))


@dataclass
class Decomposition:
    center: np.ndarray  # X
    f_slope: float
    f0: float
    f_spinless: float  # 1/sqrt(p^2), the slope of a normalized spinless particle
    radius: np.ndarray  # x - X - f p, per sample
    residual: float  # max |X + f p + r_obs - x|


def decompose(traj: Trajectory) -> Decomposition:
    """Split samples into centre, uniform drift along ``p`` and radius."""
    if len(traj) < 2:
        raise ValueError("need at least two samples")
    p = traj.p[0]
    if np.abs(traj.p - p).max() > 1e-12 * max(1.0, np.abs(p).max()):
        raise InconsistentMomentum("momentum varies across samples")
    p2 = float(p @ METRIC @ p)
    center = traj.X[0]
    slope = float(traj.H[0]) / p2
    f0 = float(traj.x[0] @ METRIC @ p) / p2
    f = f0 + slope * (traj.tau - traj.tau[0])
    radius = traj.x - center - f[:, None] * p
    recon = center + f[:, None] * p + traj.r
    residual = float(np.abs(recon - traj.x).max())
    return Decomposition(center, slope, f0, 1.0 / np.sqrt(p2), radius, residual)
