"""Minimal coupling ``p -> p - eA(x)`` to an external electromagnetic potential.

The substituted Hamiltonian is ``H = xi_bar beta^mu (p_mu - e A_mu(x)) xi``.  Its
canonical equations (see ``docs/em_coupling.md``) are::

    xdot^mu  = xi_bar beta^mu xi
    pdot_mu  = e (d_mu A_nu)(x) xdot^nu
    xidot    = -(i/lam) beta^mu (p_mu - e A_mu(x)) xi

``p`` is the canonical momentum.  The kinetic momentum ``pi = p - eA`` obeys
``pidot_mu = e F_{mu nu} xdot^nu`` and is the one used for the radius and the
eigen-sector split during interaction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from spinphase import jet
from spinphase.dynamics import (
    IntegratorConfig,
    Trajectory,
    _check_lambda,
    oscillation_frequency,
    pack,
    run_rk4,
)
from spinphase.errors import ConfigError, StepUnstable
from spinphase.jet import Jet
from spinphase.phase_space import Observable, PhaseState, Point, _H, _r, _u
from spinphase.radiation import purity_series
from spinphase.repspace import METRIC, RepMatrices, mdot

FIELD_KINDS = ("none", "uniform", "plane_wave")


def _cos(v):
    return v.cos() if isinstance(v, Jet) else np.cos(v)


def _vec(v, default=None):
    if v is None:
        return np.zeros(4) if default is None else default
    return np.asarray(v, dtype=float)


@dataclass(frozen=True)
class FieldConfig:
    """External potential with covariant components ``A_mu(x)``.

    ``uniform``:    ``A_nu = -1/2 F_{nu rho} x^rho`` for constant antisymmetric ``F_{mu nu}``.
    ``plane_wave``: ``A_nu = a_nu cos(k_rho x^rho)`` with null ``k`` and ``k.a = 0``.

    ``gauge_shift`` adds a constant ``c_mu`` to ``A`` (the gradient of
    ``chi = c.x``), which leaves the physics unchanged.
    """

    kind: str = "none"
    charge: float = 0.0
    F: np.ndarray = field(default=None)
    amplitude: np.ndarray = field(default=None)
    wave_vector: np.ndarray = field(default=None)
    gauge_shift: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.kind not in FIELD_KINDS:
            raise ConfigError(f"unknown field kind {self.kind!r}")
        F = np.zeros((4, 4)) if self.F is None else np.asarray(self.F, dtype=float)
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "amplitude", _vec(self.amplitude))
        object.__setattr__(self, "wave_vector", _vec(self.wave_vector))
        object.__setattr__(self, "gauge_shift", _vec(self.gauge_shift))
        object.__setattr__(self, "charge", float(self.charge))
        if F.shape != (4, 4) or np.abs(F + F.T).max() > 1e-12 * max(1.0, np.abs(F).max()):
            raise ConfigError("field tensor must be an antisymmetric 4x4 array")
        if self.kind == "plane_wave":
            k, a = self.wave_vector, self.amplitude
            ginv = np.linalg.inv(METRIC)
            scale = max(1.0, float(np.abs(k).max()) ** 2)
            if abs(k @ ginv @ k) > 1e-12 * scale:
                raise ConfigError("plane-wave vector must be null")
            if abs(k @ ginv @ a) > 1e-12 * scale * max(1.0, float(np.abs(a).max())):
                raise ConfigError("plane-wave amplitude must be transverse (k.a = 0)")

    # constructors ---------------------------------------------------------
    @classmethod
    def uniform_magnetic(cls, B: float, charge: float, axis: int = 3, **kw) -> "FieldConfig":
        """``F_{ij} = B`` on the spatial plane orthogonal to ``axis`` (cyclic order)."""
        i, j = {1: (2, 3), 2: (3, 1), 3: (1, 2)}[axis]
        F = np.zeros((4, 4))
        F[i, j], F[j, i] = B, -B
        return cls("uniform", charge, F=F, **kw)

    @classmethod
    def uniform_electric(cls, E: float, charge: float, axis: int = 1, **kw) -> "FieldConfig":
        F = np.zeros((4, 4))
        F[axis, 0], F[0, axis] = E, -E
        return cls("uniform", charge, F=F, **kw)

    @classmethod
    def plane_wave(cls, amplitude: float, omega: float, charge: float, **kw) -> "FieldConfig":
        """Linearly polarized wave along +z, polarized along x."""
        k_upper = np.array([omega, 0.0, 0.0, omega])
        a_lower = np.array([0.0, amplitude, 0.0, 0.0])
        return cls("plane_wave", charge, amplitude=a_lower, wave_vector=METRIC @ k_upper, **kw)

    def with_charge(self, charge: float) -> "FieldConfig":
        return FieldConfig(self.kind, charge, self.F, self.amplitude, self.wave_vector,
                           self.gauge_shift)

    # potential ------------------------------------------------------------
    def potential(self, x):
        """``A_mu(x)`` (covariant); ``x`` may be an array ``(..., 4)`` or a jet."""
        if self.kind == "uniform":
            A = -0.5 * jet.einsum("nr,...r->...n", self.F, x)
        elif self.kind == "plane_wave":
            phase = jet.einsum("r,...r->...", self.wave_vector, x)
            A = _cos(phase)[..., None] * self.amplitude
        else:
            A = 0.0 * x
        return A + self.gauge_shift

    def gradient(self, x) -> np.ndarray:
        """``d_mu A_nu`` at ``x``, shape ``(..., 4, 4)`` (first index: derivative)."""
        x = np.asarray(x, dtype=float)
        batch = x.shape[:-1]
        if self.kind == "uniform":
            return np.broadcast_to(0.5 * self.F, batch + (4, 4))
        if self.kind == "plane_wave":
            phase = x @ self.wave_vector
            return -np.sin(phase)[..., None, None] * np.einsum(
                "m,n->mn", self.wave_vector, self.amplitude)
        return np.zeros(batch + (4, 4))

    def field_tensor(self, x) -> np.ndarray:
        dA = self.gradient(x)
        return dA - np.swapaxes(dA, -1, -2)


NO_FIELD = FieldConfig()


def kinetic_momentum(state: PhaseState, field: FieldConfig) -> np.ndarray:
    """Contravariant ``pi^mu = p^mu - e A^mu(x)``."""
    A_upper = np.linalg.inv(METRIC) @ field.potential(state.x)
    return state.p - field.charge * A_upper


def eom_em(state: PhaseState, field: FieldConfig):
    """``(xdot, pdot, xidot)``; ``pdot`` is returned contravariant like ``state.p``."""
    _check_lambda(state.lam)
    rep = state.rep
    xdot = np.real(rep.bilinear(state.xi, rep.beta))
    pdot_lower = field.charge * field.gradient(state.x) @ xdot
    pi = kinetic_momentum(state, field)
    xidot = (-1j / state.lam) * (rep.slash(pi) @ state.xi)
    return xdot, np.linalg.inv(METRIC) @ pdot_lower, xidot


def em_rhs(rep: RepMatrices, lam: float, field: FieldConfig):
    _check_lambda(lam)
    ginv = np.linalg.inv(METRIC)
    e = field.charge

    def rhs(t, y):
        x, p, xi = y[:4].real, y[4:8].real, y[8:]
        xdot = rep.bilinear(xi, rep.beta).real
        pdot = ginv @ (e * field.gradient(x) @ xdot)
        pi = p - e * (ginv @ field.potential(x))
        xidot = (-1j / lam) * (rep.slash(pi) @ xi)
        return np.concatenate([xdot, pdot, xidot])

    return rhs


def hamiltonian_em(rep: RepMatrices, field: FieldConfig) -> Observable:
    """``xi_bar beta^mu (p_mu - e A_mu(x)) xi`` as a bracket-ready observable."""
    ginv = np.linalg.inv(METRIC)

    def fn(c):
        A_upper = jet.einsum("mn,...n->...m", ginv, field.potential(c.x))
        return _H(c, rep, p=c.p - field.charge * A_upper)

    return Observable.from_coords(fn, "H_em")


# ---------------------------------------------------------------- reporting


def osculating_amplitude(r, rdot, pi, omega):
    """Semi-major axis of the ellipse ``r cos(wt) + (rdot/w) sin(wt)`` (Minkowski lengths).

    ``r`` and ``rdot`` are spacelike and orthogonal to ``pi``, so ``-g`` restricted
    to their span is positive definite.
    """
    a, b = r, rdot / omega[..., None]
    aa = -mdot(a, a)
    bb = -mdot(b, b)
    ab = -mdot(a, b)
    tr, det = aa + bb, aa * bb - ab**2
    lam_max = 0.5 * (tr + np.sqrt(np.maximum(tr**2 - 4 * det, 0.0)))
    return np.sqrt(np.maximum(lam_max, 0.0))


class InteractionReport:
    """Per-sample diagnostics of an interacting trajectory.

    ``kinetic`` holds ``pi`` and ``canonical`` holds ``p``; the radius,
    amplitude and purity are taken with respect to ``pi`` unless the report was
    built with ``use_kinetic=False``.
    """

    def __init__(self, traj: Trajectory, field: FieldConfig, use_kinetic: bool = True):
        self.traj = traj
        self.field = field
        self.use_kinetic = use_kinetic
        ginv = np.linalg.inv(METRIC)
        A_upper = field.potential(traj.x) @ ginv.T
        self.tau = traj.tau
        self.canonical = traj.p
        self.kinetic = traj.p - field.charge * A_upper

    @property
    def momentum(self):
        return self.kinetic if self.use_kinetic else self.canonical

    @cached_property
    def radius(self) -> np.ndarray:
        t = self.traj
        coords = Point.batch(t.x, t.p, t.xi, t.lam, t.rep).seeded(0)
        return np.real(_r(coords, t.rep, p=self.momentum))

    @cached_property
    def velocity(self) -> np.ndarray:
        t = self.traj
        coords = Point.batch(t.x, t.p, t.xi, t.lam, t.rep).seeded(0)
        return np.real(_u(coords, t.rep))

    @cached_property
    def frequency_scale(self) -> np.ndarray:
        """Instantaneous ``sqrt(pi^2) / (lam s)``."""
        m = self.momentum
        return np.sqrt(mdot(m, m)) / (self.traj.lam * self.traj.rep.s)

    @cached_property
    def amplitude(self) -> np.ndarray:
        m = self.momentum
        u = self.velocity
        m2 = mdot(m, m)
        rdot = u - (mdot(u, m) / m2)[:, None] * m
        return osculating_amplitude(self.radius, rdot, m, self.frequency_scale)

    @cached_property
    def radius_norm(self) -> np.ndarray:
        r = self.radius
        return np.sqrt(np.maximum(-mdot(r, r), 0.0))

    @cached_property
    def purity(self) -> np.ndarray:
        return purity_series(self.traj.rep, self.traj.xi, self.momentum)

    def measured_frequency(self) -> float:
        return oscillation_frequency(self.tau, self.radius)

    def rows(self):
        for k in range(self.tau.size):
            yield (self.tau[k], self.amplitude[k], self.purity[k], self.kinetic[k],
                   self.canonical[k])


def integrate_em(state: PhaseState, field: FieldConfig, cfg: IntegratorConfig,
                 use_kinetic: bool = True):
    """RK4 integration of the coupled equations; returns ``(report, trajectory)``."""
    if cfg.method != "rk4":
        raise ConfigError("interacting motion is integrated with rk4 only")
    taus, ys = run_rk4(em_rhs(state.rep, state.lam, field), pack(state), cfg)
    if not np.all(np.isfinite(ys)):
        bad = int(np.argmin(np.all(np.isfinite(ys), axis=1)))
        raise StepUnstable(f"non-finite state at sample {bad} (tau={taus[bad]:.6g})")
    traj = Trajectory(taus, ys[:, :4].real, ys[:, 4:8].real, ys[:, 8:], state.lam, state.rep)
    return InteractionReport(traj, field, use_kinetic), traj


def lorentz_force_oracle(pi0, x0, field: FieldConfig, taus, mass: float):
    """Spinless comparison: ``dpi_mu/dtau = e F_{mu nu} pi^nu / m``, ``dx/dtau = pi/m``."""
    from scipy.integrate import solve_ivp

    ginv = np.linalg.inv(METRIC)
    e = field.charge

    def rhs(t, y):
        x, pi = y[:4], y[4:]
        u = pi / mass
        dpi_lower = e * field.field_tensor(x) @ u
        return np.concatenate([u, ginv @ dpi_lower])

    sol = solve_ivp(rhs, (taus[0], taus[-1]), np.concatenate([x0, pi0]), t_eval=taus,
                    rtol=1e-12, atol=1e-14, method="DOP853")
    return sol.y[:4].T, sol.y[4:].T


__all__ = [
    "FieldConfig", "NO_FIELD", "InteractionReport", "eom_em", "em_rhs", "integrate_em",
    "hamiltonian_em", "kinetic_momentum", "osculating_amplitude", "lorentz_force_oracle",
]
