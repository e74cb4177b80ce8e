"""Zitterbewegung of a spin-1/2 particle at rest with the electron mass.

Mixing the two energy sectors gives an oscillating radius.  Its frequency is
2m/hbar, about 1.55e21 rad/s.
"""

import numpy as np

from spinphase import PhaseState, build_rep
from spinphase.dynamics import exact_trajectory, oscillation_frequency, zbw_period
from spinphase.radiation import eigenstate
from spinphase.scenario import HBAR_MEV_S

M_MEV = 0.511

rep = build_rep(0.5)
p = np.array([M_MEV, 0.0, 0.0, 0.0])
xi = (eigenstate(rep, p, 1) + eigenstate(rep, p, -1)) / np.sqrt(2)
state = PhaseState(np.zeros(4), p, xi, lam=1.0)

T = zbw_period(p, state.lam, state.spin)
traj = exact_trajectory(state, np.linspace(0.0, 10 * T, 4001))
omega = oscillation_frequency(traj.tau, traj.r)
print(f"omega (natural, MeV)  {omega:.6f}  predicted {2 * M_MEV:.6f}")
print(f"omega (SI, rad/s)     {omega / HBAR_MEV_S:.4e}")
print(f"max |r| (1/MeV)       {np.abs(traj.r).max():.4f}")
