"""An eigenstate entering a weak uniform magnetic field loses sector purity."""

import numpy as np

from spinphase import PhaseState, build_rep
from spinphase.dynamics import IntegratorConfig, zbw_period
from spinphase.em_coupling import FieldConfig, integrate_em
from spinphase.radiation import eigenstate

rep = build_rep(0.5)
p = np.array([np.sqrt(1.25), 0.5, 0.0, 0.0])
state = PhaseState(np.zeros(4), p, eigenstate(rep, p, 1))
T = zbw_period(p, 1.0, 0.5)

for B in (0.001, 0.01, 0.05):
    field = FieldConfig.uniform_magnetic(B, charge=1.0)
    report, _ = integrate_em(state, field, IntegratorConfig("rk4", T / 2000, 2 * T, 100))
    print(f"B={B:<6} min purity {report.purity.min():.8f}  "
          f"max amplitude {report.amplitude.max():.3e}")
