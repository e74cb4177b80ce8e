"""Electromagnetic current, free-particle radiation rate and eigen-sector analysis."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from spinphase.dynamics import (
    SpinorPropagator,
    closed_form_radius,
    zbw_frequency,
)
from spinphase.errors import DegenerateOperator
from spinphase.phase_space import PhaseState, rest_frame, suite_for
from spinphase.repspace import METRIC, RepMatrices

COND_LIMIT = 1e8


def current(state: PhaseState, e: float) -> np.ndarray:
    """``j^mu = e xi_bar beta^mu xi``."""
    return e * np.real(suite_for(state.rep).u.value(state))


def radius_acceleration(state: PhaseState, tau=0.0) -> np.ndarray:
    """``r''(tau) = -(p^2 / (lam s)^2) r(tau)`` from the closed-form radius."""
    w = zbw_frequency(state.p, state.lam, state.spin)
    return -(w**2) * closed_form_radius(state, tau)


def radiated_rate(state: PhaseState, tau: float = 0.0, e: float = 1.0) -> np.ndarray:
    """Four-momentum radiated per unit proper time at ``tau``.

    ``-(2/3) e^2 (r''.r'') u^mu``, with the contraction read as a scalar
    multiplying the velocity at ``tau``.
    """
    if state.p2 <= 0.0:
        raise ValueError("radiation rate needs timelike p")
    acc = radius_acceleration(state, tau)
    acc2 = float(acc @ METRIC @ acc)
    if tau == 0.0:
        u = np.real(suite_for(state.rep).u.value(state))
    else:
        xi = SpinorPropagator(state.rep, state.p, state.lam).apply(state.xi, [tau])[0]
        u = np.real(state.rep.bilinear(xi, state.rep.beta))
    return -(2.0 / 3.0) * e**2 * acc2 * u


def radiated_rate_series(state: PhaseState, taus, e: float = 1.0) -> np.ndarray:
    """Vectorized :func:`radiated_rate` over an array of proper times."""
    taus = np.asarray(taus, dtype=float)
    w = zbw_frequency(state.p, state.lam, state.spin)
    acc = -(w**2) * closed_form_radius(state, taus)
    acc2 = np.einsum("...m,mn,...n->...", acc, METRIC, acc)
    xi = SpinorPropagator(state.rep, state.p, state.lam).apply(state.xi, taus)
    u = np.real(state.rep.bilinear(xi, state.rep.beta))
    return -(2.0 / 3.0) * e**2 * acc2[:, None] * u


# ------------------------------------------------------------------ sectors


@dataclass
class Sector:
    eigenvalue: float
    label: str  # "particle" | "antiparticle" | "other"
    basis: np.ndarray  # (D, k) columns with xi_bar-norm +-1
    signature: np.ndarray  # (k,) indefinite norms of the basis columns
    amplitude: np.ndarray  # component of xi in this sector, (D,)
    weight: float  # |bar(amplitude) amplitude|


@dataclass
class EigenSplit:
    """Decomposition of a spinor into the eigen-sectors of ``beta.p``.

    ``purity`` is the largest sector weight divided by the sum of weights,
    where a sector weight is the absolute indefinite norm of its component.
    """

    sectors: list = field(default_factory=list)
    purity: float = 1.0
    condition: float = 1.0

    @property
    def components(self):
        return [(s.eigenvalue, s.amplitude) for s in self.sectors]

    def reconstruct(self) -> np.ndarray:
        return sum(s.amplitude for s in self.sectors)

    def dominant(self) -> Sector:
        return max(self.sectors, key=lambda s: s.weight)

    def sector(self, label: str) -> Optional[Sector]:
        for s in self.sectors:
            if s.label == label:
                return s
        return None


def _cluster(values: np.ndarray, tol: float):
    order = np.argsort(values)
    groups, current_group = [], [order[0]]
    for i in order[1:]:
        if abs(values[i] - values[current_group[-1]]) <= tol:
            current_group.append(i)
        else:
            groups.append(current_group)
            current_group = [i]
    groups.append(current_group)
    return groups


def sector_basis(rep: RepMatrices, p, atol: float = 1e-8):
    """Eigen-sectors of ``beta.p``: list of ``(eigenvalue, basis, signature)``.

    Within each sector the basis is orthonormalized with respect to the
    indefinite form ``xi_bar xi`` (definite on every sector for timelike ``p``).
    Raises :class:`DegenerateOperator` for an ill-conditioned eigenbasis.
    """
    p = np.asarray(p, dtype=float)
    mass = np.sqrt(p @ METRIC @ p)
    evals, evecs = np.linalg.eig(rep.slash(p))
    cond = float(np.linalg.cond(evecs))
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise DegenerateOperator(f"eigenbasis of beta.p is ill-conditioned (cond={cond:.2e})")
    out = []
    for group in _cluster(evals.real, atol * max(mass, 1.0)):
        lam = float(np.mean(evals.real[group]))
        v = evecs[:, group]
        gram = v.conj().T @ rep.parity @ v
        gram = 0.5 * (gram + gram.conj().T)
        w, q = np.linalg.eigh(gram)
        if np.any(np.abs(w) < 1e-12):
            raise DegenerateOperator("indefinite norm degenerate on an eigen-sector")
        basis = (v @ q) / np.sqrt(np.abs(w))
        out.append((lam, basis, np.sign(w)))
    return out, cond


def eigen_split(state: PhaseState, p=None) -> EigenSplit:
    """Decompose ``state.xi`` into ``beta.p`` eigen-sectors (``p`` defaults to ``state.p``)."""
    rep = state.rep
    p = state.p if p is None else np.asarray(p, dtype=float)
    mass = np.sqrt(p @ METRIC @ p)
    sectors, cond = sector_basis(rep, p)
    full = np.concatenate([b for _, b, _ in sectors], axis=1)
    coeff = np.linalg.solve(full, state.xi)
    result = []
    start = 0
    for lam, basis, sig in sectors:
        k = basis.shape[1]
        amp = basis @ coeff[start:start + k]
        start += k
        if np.isclose(lam, mass, rtol=1e-8, atol=1e-12):
            label = "particle"
        elif np.isclose(lam, -mass, rtol=1e-8, atol=1e-12):
            label = "antiparticle"
        else:
            label = "other"
        weight = float(abs(np.real(rep.bar(amp) @ amp)))
        result.append(Sector(lam, label, basis, sig, amp, weight))
    total = sum(s.weight for s in result)
    purity = max(s.weight for s in result) / total if total > 0 else float("nan")
    return EigenSplit(result, float(purity), cond)


def purity_series(rep: RepMatrices, xis, ps) -> np.ndarray:
    """Purity of each spinor in ``xis`` (``(n, D)``) against its momentum in ``ps``.

    Equivalent to ``eigen_split(...).purity`` per row, but the sector basis is
    computed once per distinct momentum, so free trajectories cost one
    eigendecomposition.
    """
    xis = np.asarray(xis, dtype=complex)
    ps = np.asarray(ps, dtype=float)
    out = np.empty(len(xis))
    _, first, inverse = np.unique(ps, axis=0, return_index=True, return_inverse=True)
    for group, k0 in enumerate(first):
        rows = np.nonzero(inverse.ravel() == group)[0]
        sectors, _ = sector_basis(rep, ps[k0])
        full = np.concatenate([b for _, b, _ in sectors], axis=1)
        coeff = np.linalg.solve(full, xis[rows].T)  # (D, n)
        weights, start = [], 0
        for _, basis, _ in sectors:
            k = basis.shape[1]
            amp = basis @ coeff[start:start + k]  # (D, n)
            start += k
            weights.append(np.abs(np.einsum("an,ab,bn->n", amp.conj(), rep.parity, amp).real))
        weights = np.array(weights)
        total = weights.sum(axis=0)
        with np.errstate(invalid="ignore", divide="ignore"):
            out[rows] = np.where(total > 0, weights.max(axis=0) / total, np.nan)
    return out


def eigenstate(rep: RepMatrices, p, sign: int = 1, index: int = 0) -> np.ndarray:
    """Basis spinor of the ``sign * sqrt(p^2)`` sector, normalized to ``xi_bar xi = +-1``."""
    p = np.asarray(p, dtype=float)
    mass = np.sqrt(p @ METRIC @ p)
    sectors, _ = sector_basis(rep, p)
    target = sign * mass
    lam, basis, _ = min(sectors, key=lambda s: abs(s[0] - target))
    if not np.isclose(lam, target, rtol=1e-8):
        raise ValueError(f"no eigenvalue {target:+.6g} in the spectrum of beta.p")
    if not 0 <= index < basis.shape[1]:
        raise IndexError(f"polarization index {index} out of range for sector of size "
                         f"{basis.shape[1]}")
    return basis[:, index]


# --------------------------------------------------------------- diagnostics


@dataclass
class RadiationDiagnostics:
    purity: float
    max_radius: float  # max Euclidean |r| over one period
    max_rate: float  # max |dp_rad/dtau| over one period
    momentum_drift: float  # |pdot| (always 0 for free motion)
    rest_frame_rate: float  # max rate of the same state boosted to p_vec = 0
    zbw_frequency: float
    radiating: bool


def no_radiation_predicates(state: PhaseState, e: float = 1.0, n_samples: int = 64,
                            atol: float = 1e-10):
    """Three independently computed 'does not radiate' tests over one zbw period.

    Returns ``(rate_zero, pure, radius_zero)``.
    """
    from spinphase.dynamics import exact_trajectory, zbw_period

    period = zbw_period(state.p, state.lam, state.spin)
    taus = np.linspace(0.0, period, n_samples)
    rate = radiated_rate_series(state, taus, e)
    split = eigen_split(state)
    traj = exact_trajectory(state, taus)
    scale = max(np.abs(state.p).max(), 1.0)
    rate_zero = bool(np.abs(rate).max() < atol * scale)
    pure = bool(split.purity > 1.0 - 1e-12)
    radius_zero = bool(np.abs(traj.r).max() < atol)
    return rate_zero, pure, radius_zero


def diagnose(state: PhaseState, e: float = 1.0, n_samples: int = 128) -> RadiationDiagnostics:
    """Radiation summary of a free state over one zitterbewegung period."""
    from spinphase.dynamics import exact_trajectory, zbw_period

    period = zbw_period(state.p, state.lam, state.spin)
    taus = np.linspace(0.0, period, n_samples)
    rate = radiated_rate_series(state, taus, e)
    traj = exact_trajectory(state, taus)
    rest = rest_frame(state)
    rest_rate = radiated_rate_series(rest, taus, e)
    max_rate = float(np.abs(rate).max())
    return RadiationDiagnostics(
        purity=eigen_split(state).purity,
        max_radius=float(np.linalg.norm(traj.r, axis=1).max()),
        max_rate=max_rate,
        momentum_drift=0.0,
        rest_frame_rate=float(np.abs(rest_rate).max()),
        zbw_frequency=zbw_frequency(state.p, state.lam, state.spin),
        radiating=max_rate > 1e-10,
    )
