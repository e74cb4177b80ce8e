"""Energy eigenstates have no radius and do not radiate.  Mixtures do."""

from spinphase import build_rep
from spinphase.phase_space import StateSampler
from spinphase.radiation import diagnose, eigenstate, no_radiation_predicates

for s in (0.5, 1):
    rep = build_rep(s)
    state = StateSampler(rep, seed=3)()
    for label, xi in [("eigen +", eigenstate(rep, state.p, 1)),
                      ("eigen -", eigenstate(rep, state.p, -1)),
                      ("random ", state.xi)]:
        st = state.replace(xi=xi)
        d = diagnose(st)
        print(f"s={s:<3} {label}  predicates={no_radiation_predicates(st)}  "
              f"purity={d.purity:.4f}  |r|max={d.max_radius:.2e}  rate max={d.max_rate:.2e}")
