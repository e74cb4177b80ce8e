"""Classical phase space for relativistic spinning particles.

Spinor representation matrices, a Poisson bracket over position, momentum and
commuting spinor variables, free and minimally coupled dynamics, and radiation
diagnostics.
"""

from spinphase.dynamics import (
    IntegratorConfig,
    Trajectory,
    decompose,
    exact_trajectory,
    integrate,
    zbw_frequency,
    zbw_period,
)
from spinphase.em_coupling import FieldConfig, integrate_em
from spinphase.errors import (
    AlgebraViolation,
    ConfigError,
    DegenerateOperator,
    NotAntisymmetric,
    SpinPhaseError,
    StepUnstable,
    UnsupportedSpin,
    ZeroLambda,
)
from spinphase.phase_space import (
    Observable,
    PhaseState,
    StateSampler,
    bracket,
    hamiltonian,
    suite_for,
    verify_algebra,
)
from spinphase.radiation import eigen_split, eigenstate, radiated_rate
from spinphase.repspace import RepMatrices, build_rep

__version__ = "0.1.0"
