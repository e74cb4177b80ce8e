"""Scenario files: parsing, initial-state construction and simulation of one scenario.

A scenario is a YAML mapping; see ``docs/formats.md`` for the full schema.  All
quantities are in natural units (hbar = c = 1); ``mass_mev`` only sets the scale
used to convert frequencies to SI at the reporting edge.
"""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from spinphase.dynamics import (
    IntegratorConfig,
    Trajectory,
    integrate,
    oscillation_frequency,
    zbw_frequency,
)
from spinphase.em_coupling import FieldConfig, InteractionReport, integrate_em
from spinphase.errors import ConfigError
from spinphase.phase_space import PhaseState
from spinphase.radiation import eigenstate
from spinphase.repspace import METRIC, build_rep, spin_fraction

HBAR_MEV_S = 6.582119569e-22  # hbar in MeV s

DEFAULTS = {
    "spin": "1/2",
    "mass": 1.0,
    "mass_mev": None,
    "lambda": 1.0,
    "momentum": [0.0, 0.0, 0.0],
    "position": [0.0, 0.0, 0.0, 0.0],
    "spinor": {"kind": "eigen", "sign": 1, "index": 0},
    "charge": 1.0,
    "integration": {"method": "exact", "periods": 10, "steps_per_period": 1000, "stride": 1},
    "field": {"kind": "none"},
    "seed": 0,
    "output": {"samples": "samples.csv", "audit": "audit.json"},
}


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in (override or {}).items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def _complex(v) -> complex:
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)):
        return complex(v)
    raise ConfigError(f"complex numbers are written as [re, im], got {v!r}")


def _floats(v, n: int, name: str) -> np.ndarray:
    try:
        arr = np.asarray(v, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name} must be a list of {n} numbers") from exc
    if arr.shape != (n,):
        raise ConfigError(f"{name} must have {n} entries, got shape {arr.shape}")
    return arr


@dataclass
class Scenario:
    """Validated scenario with its initial state, integrator and field."""

    raw: dict
    state: PhaseState
    integrator: IntegratorConfig
    field: FieldConfig
    charge: float
    mass_mev: Optional[float]
    seed: int

    @property
    def config_hash(self) -> str:
        return config_hash(self.raw)

    @property
    def energy_unit_mev(self) -> Optional[float]:
        """MeV per natural energy unit, when a physical mass is given."""
        if self.mass_mev is None:
            return None
        return self.mass_mev / float(self.raw["mass"])

    def to_si_frequency(self, omega_natural: float) -> Optional[float]:
        unit = self.energy_unit_mev
        return None if unit is None else omega_natural * unit / HBAR_MEV_S

    @property
    def interacting(self) -> bool:
        return self.field.kind != "none"


def config_hash(raw: dict) -> str:
    blob = json.dumps(raw, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()


def load_config(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    return data


def build_spinor(spec: dict, rep, p, rng: np.random.Generator) -> np.ndarray:
    kind = spec.get("kind", "eigen")
    if kind == "eigen":
        sign = int(spec.get("sign", 1))
        if sign not in (1, -1):
            raise ConfigError("spinor sign must be +1 or -1")
        return eigenstate(rep, p, sign, int(spec.get("index", 0)))
    if kind == "explicit":
        comps = np.array([_complex(c) for c in spec.get("components", [])])
        if comps.size != rep.dim:
            raise ConfigError(f"explicit spinor needs {rep.dim} components, got {comps.size}")
        return comps
    if kind == "mix":
        alpha = _complex(spec.get("alpha", [1.0, 0.0]))
        index = int(spec.get("index", 0))
        plus = eigenstate(rep, p, 1, index)
        minus = eigenstate(rep, p, -1, index)
        return (plus + alpha * minus) / np.sqrt(1.0 + abs(alpha) ** 2)
    if kind == "random":
        v = rng.normal(size=rep.dim) + 1j * rng.normal(size=rep.dim)
        return v / np.linalg.norm(v)
    raise ConfigError(f"unknown spinor kind {kind!r}")


def build_field(spec: dict, charge: float) -> FieldConfig:
    kind = spec.get("kind", "none")
    strength = float(spec.get("strength", 1.0))
    if kind == "none":
        return FieldConfig("none", charge)
    shift = spec.get("gauge_shift")
    shift = None if shift is None else _floats(shift, 4, "field.gauge_shift")
    if kind == "uniform":
        if "F" in spec:
            F = np.asarray(spec["F"], dtype=float)
        else:
            E = _floats(spec.get("E", [0, 0, 0]), 3, "field.E")
            B = _floats(spec.get("B", [0, 0, 0]), 3, "field.B")
            F = np.zeros((4, 4))
            F[0, 1:], F[1:, 0] = E, -E
            F[1, 2], F[2, 3], F[3, 1] = -B[2], -B[0], -B[1]
            F[2, 1], F[3, 2], F[1, 3] = B[2], B[0], B[1]
        return FieldConfig("uniform", charge, F=strength * F, gauge_shift=shift)
    if kind == "plane_wave":
        if "wave_vector" in spec:
            return FieldConfig("plane_wave", charge,
                               amplitude=strength * _floats(spec["amplitude"], 4, "amplitude"),
                               wave_vector=_floats(spec["wave_vector"], 4, "wave_vector"),
                               gauge_shift=shift)
        return FieldConfig.plane_wave(strength * float(spec.get("amplitude", 0.0)),
                                      float(spec.get("omega", 1.0)), charge,
                                      gauge_shift=shift)
    raise ConfigError(f"unknown field kind {kind!r}")


def parse_scenario(data: dict) -> Scenario:
    """Validate a raw config mapping (defaults applied) and build the initial state."""
    raw = _merge(DEFAULTS, data)
    try:
        spin = spin_fraction(raw["spin"])
        rep = build_rep(spin)
        mass = float(raw["mass"])
        lam = float(raw["lambda"])
        charge = float(raw["charge"])
        seed = int(raw["seed"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    if mass <= 0:
        raise ConfigError("mass must be positive")
    if lam == 0:
        raise ConfigError("lambda must be non-zero")
    if "p" in raw:
        p = _floats(raw["p"], 4, "p")
    else:
        pv = _floats(raw["momentum"], 3, "momentum")
        p = np.concatenate([[np.sqrt(mass**2 + pv @ pv)], pv])
    if p @ METRIC @ p <= 0 or p[0] <= 0:
        raise ConfigError("momentum must be timelike and future-pointing")
    x = _floats(raw["position"], 4, "position")
    rng = np.random.default_rng(seed)
    xi = build_spinor(raw["spinor"], rep, p, rng)
    state = PhaseState(x, p, xi, lam, spin)

    integ = raw["integration"]
    omega = zbw_frequency(p, lam, spin)
    period = 2 * np.pi / omega
    tau_end = float(integ["tau_end"]) if "tau_end" in integ else float(integ["periods"]) * period
    dt = float(integ["dt"]) if "dt" in integ else period / float(integ["steps_per_period"])
    cfg = IntegratorConfig(integ.get("method", "exact"), dt, tau_end, int(integ.get("stride", 1)))
    field = build_field(raw["field"], charge)
    if field.kind != "none" and cfg.method != "rk4":
        cfg = IntegratorConfig("rk4", cfg.dt, cfg.tau_end, cfg.stride)
    mass_mev = raw.get("mass_mev")
    return Scenario(raw, state, cfg, field, charge,
                    None if mass_mev is None else float(mass_mev), seed)


def load_scenario(path) -> Scenario:
    return parse_scenario(load_config(path))


# ----------------------------------------------------------------- simulate


@dataclass
class ScenarioResult:
    scenario: Scenario
    trajectory: Trajectory
    report: InteractionReport  # kinetic-momentum diagnostics (== canonical when free)

    def radiation_rate(self) -> np.ndarray:
        """``-(2/3) e^2 (r''.r'') u`` per sample with ``r'' = -w^2 r``."""
        rep = self.report
        w = rep.frequency_scale
        acc = -(w**2)[:, None] * rep.radius
        acc2 = np.einsum("nm,mk,nk->n", acc, METRIC, acc)
        e = self.scenario.charge
        return -(2.0 / 3.0) * e**2 * acc2[:, None] * rep.velocity

    def measured_frequency(self) -> float:
        return oscillation_frequency(self.trajectory.tau, self.report.radius)


def simulate(scn: Scenario) -> ScenarioResult:
    if scn.interacting:
        report, traj = integrate_em(scn.state, scn.field, scn.integrator)
    else:
        traj = integrate(scn.state, scn.integrator)
        report = InteractionReport(traj, FieldConfig("none", scn.charge))
    return ScenarioResult(scn, traj, report)
