"""Enlarged phase space ``(x^mu, p_mu; xi, eta)``, its canonical bracket and observables.

Phase-space functions are :class:`Observable` objects.  They are evaluated on
the real coordinate vector::

    z = (x^0..x^3, p^0..p^3, Re xi, Im xi, Re eta, Im eta)

with exact first and second derivatives supplied by :mod:`spinphase.jet`.
``xi`` and ``eta`` are independent coordinates of the bracket; a
:class:`PhaseState` only stores ``xi`` and fixes ``eta = i lam xi_bar`` when it
is turned into coordinates.  Observables that physically contain ``xi_bar``
are written in terms of ``eta`` (``xi_bar = -i eta / lam``) so that the bracket
sees them as functions of the canonical pair.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Optional

import numpy as np
from scipy.linalg import expm

from spinphase import jet
from spinphase.errors import AlgebraViolation
from spinphase.jet import Jet
from spinphase.repspace import (
    EPS,
    EPS_LOWER,
    METRIC,
    RepMatrices,
    build_rep,
    dual,
    lower,
    mdot,
    spin_fraction,
)

# ----------------------------------------------------------------- the state


@dataclass(frozen=True, eq=False)
class PhaseState:
    """One point of phase space.

    ``p`` is stored contravariant (``p^mu``); ``xi`` has the dimension of the
    representation for ``spin``.
    """

    x: np.ndarray
    p: np.ndarray
    xi: np.ndarray
    lam: float = 1.0
    spin: Fraction = Fraction(1, 2)

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float).reshape(4))
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float).reshape(4))
        object.__setattr__(self, "xi", np.asarray(self.xi, dtype=complex).ravel())
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "spin", spin_fraction(self.spin))
        if self.xi.size != self.rep.dim:
            raise ValueError(
                f"spinor has {self.xi.size} components, spin {self.spin} needs {self.rep.dim}")

    @property
    def rep(self) -> RepMatrices:
        return build_rep(self.spin)

    @property
    def xibar(self) -> np.ndarray:
        return self.rep.bar(self.xi)

    @property
    def eta(self) -> np.ndarray:
        return 1j * self.lam * self.xibar

    @property
    def p2(self) -> float:
        return float(self.p @ METRIC @ self.p)

    @property
    def mass(self) -> float:
        return float(np.sqrt(self.p2))

    def norm(self) -> float:
        """Indefinite spinor norm ``xi_bar xi`` (real)."""
        return float(np.real(self.xibar @ self.xi))

    def normalized(self, sign: Optional[int] = None) -> "PhaseState":
        """Rescale ``xi`` so that ``xi_bar xi = +-1`` (sign taken from the state if omitted)."""
        n = self.norm()
        if n == 0.0:
            raise ValueError("spinor has zero indefinite norm and cannot be normalized")
        if sign is not None and np.sign(n) != np.sign(sign):
            raise ValueError(f"spinor norm {n:+.3e} has the wrong sign for {sign:+d}")
        return replace(self, xi=self.xi / np.sqrt(abs(n)))

    def is_normalized(self, atol: float = 1e-12) -> bool:
        return abs(abs(self.norm()) - 1.0) < atol

    def coords(self, eta=None) -> np.ndarray:
        eta = self.eta if eta is None else np.asarray(eta, dtype=complex)
        return np.concatenate([self.x, self.p, self.xi.real, self.xi.imag, eta.real, eta.imag])

    def replace(self, **changes) -> "PhaseState":
        return replace(self, **changes)


def phase_dim(dim: int) -> int:
    """Number of real coordinates for a spinor of complex dimension ``dim``."""
    return 8 + 4 * dim


# --------------------------------------------------------------- coordinates


@dataclass(frozen=True)
class Point:
    """Coordinates plus the constants needed to evaluate observables."""

    z: np.ndarray
    lam: float
    rep: RepMatrices

    @classmethod
    def of(cls, state: PhaseState, eta=None) -> "Point":
        return cls(state.coords(eta), state.lam, state.rep)

    @classmethod
    def batch(cls, x, p, xi, lam, rep, eta=None) -> "Point":
        """Stack of states (leading axes) for order-0 evaluation only."""
        xi = np.asarray(xi, dtype=complex)
        if eta is None:
            eta = 1j * lam * np.einsum("...a,ab->...b", xi.conj(), rep.parity)
        z = np.concatenate([np.asarray(x, float), np.asarray(p, float), xi.real, xi.imag,
                            eta.real, eta.imag], axis=-1)
        return cls(z, float(lam), rep)

    def seeded(self, order: int) -> "Coords":
        d = self.rep.dim
        if order == 0:
            z = self.z
        else:
            if self.z.ndim != 1:
                raise ValueError("derivatives are only available for a single state")
            z = Jet.seed(self.z, order)
        xi = z[..., 8:8 + d] + 1j * z[..., 8 + d:8 + 2 * d]
        eta = z[..., 8 + 2 * d:8 + 3 * d] + 1j * z[..., 8 + 3 * d:8 + 4 * d]
        return Coords(z[..., 0:4], z[..., 4:8], xi, eta, self.lam, self.rep)


@dataclass(frozen=True)
class Coords:
    """Coordinate jets (or arrays) handed to observable definitions."""

    x: object
    p: object
    xi: object
    eta: object
    lam: float
    rep: RepMatrices

    @property
    def xibar(self):
        return self.eta * (-1j / self.lam)


# ---------------------------------------------------------------- observables

Evaluator = Callable[[Point, int], object]


class Observable:
    """A (possibly tensor-valued) phase-space function with exact derivatives.

    ``symmetry`` is ``None`` or ``"antisymmetric"`` (for rank-2 tensors).
    """

    def __init__(self, evaluator: Evaluator, label: str = "", symmetry: Optional[str] = None):
        self._evaluator = evaluator
        self.label = label
        self.symmetry = symmetry

    @classmethod
    def from_coords(cls, fn: Callable[[Coords], object], label: str = "",
                    symmetry: Optional[str] = None) -> "Observable":
        return cls(lambda point, order: fn(point.seeded(order)), label, symmetry)

    def __repr__(self):
        return f"Observable({self.label!r})"

    # evaluation -----------------------------------------------------------
    def _eval(self, point: Point, order: int) -> Jet:
        return jet.as_jet(self._evaluator(point, order))

    def evaluate(self, state, order: int = 0, eta=None) -> Jet:
        point = state if isinstance(state, Point) else Point.of(state, eta)
        return self._eval(point, order)

    def value(self, state, eta=None) -> np.ndarray:
        return self.evaluate(state, 0, eta).val

    def partials(self, state, eta=None) -> np.ndarray:
        """Gradient w.r.t. the real coordinates, shape ``(N,) + value shape``."""
        return self.evaluate(state, 1, eta).grad

    def hessian(self, state, eta=None) -> np.ndarray:
        return self.evaluate(state, 2, eta).hess

    def along(self, x, p, xi, lam, rep) -> np.ndarray:
        """Values on a stack of states (trajectory arrays with a leading axis)."""
        return self._eval(Point.batch(x, p, xi, lam, rep), 0).val

    # algebra --------------------------------------------------------------
    def _combine(self, other, op, label):
        if isinstance(other, Observable):
            return Observable(lambda pt, k: op(self._eval(pt, k), other._eval(pt, k)), label)
        return Observable(lambda pt, k: op(self._eval(pt, k), other), label)

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b, f"({self.label} + {_lbl(other)})")

    def __radd__(self, other):
        return self + other

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b, f"({self.label} - {_lbl(other)})")

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b, f"{self.label}*{_lbl(other)}")

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        return self._combine(other, lambda a, b: a / b, f"{self.label}/{_lbl(other)}")

    def __neg__(self):
        return Observable(lambda pt, k: -self._eval(pt, k), f"-{self.label}", self.symmetry)

    def __getitem__(self, idx):
        return Observable(lambda pt, k: self._eval(pt, k)[idx], f"{self.label}[{idx}]")

    def lowered(self) -> "Observable":
        """Lower the last (four-vector) index with the metric."""
        return Observable(lambda pt, k: lower(self._eval(pt, k)), f"{self.label}_lower",
                          self.symmetry)

    def symmetry_defect(self, state) -> float:
        v = self.value(state)
        if self.symmetry == "antisymmetric":
            return float(np.abs(v + np.swapaxes(v, -1, -2)).max())
        return 0.0


def _lbl(obj):
    return obj.label if isinstance(obj, Observable) else repr(obj)


def constant(value, label: str = "") -> Observable:
    value = np.asarray(value)
    return Observable(lambda pt, k: value, label or repr(value))


def x_coord(mu: int) -> Observable:
    """``x^mu``."""
    return Observable.from_coords(lambda c: c.x[..., mu], f"x^{mu}")


def p_lower(mu: int) -> Observable:
    """``p_mu``."""
    return Observable.from_coords(lambda c: lower(c.p)[..., mu], f"p_{mu}")


def p_upper(mu: int) -> Observable:
    return Observable.from_coords(lambda c: c.p[..., mu], f"p^{mu}")


def spinor_bilinear(gamma, label: str = "eta.G.xi") -> Observable:
    """``eta Gamma xi`` for a constant matrix ``Gamma``."""
    gamma = np.asarray(gamma, dtype=complex)
    return Observable.from_coords(
        lambda c: jet.einsum("...a,ab,...b->...", c.eta, gamma, c.xi), label)


# -------------------------------------------------------------------- bracket

_LETTERS = string.ascii_lowercase


def _wirtinger(part, start: int, d: int):
    """d/d(w) = 1/2 (d/dRe w - i d/dIm w) for the block of coordinates at ``start``."""
    return 0.5 * (part[start:start + d] - 1j * part[start + d:start + 2 * d])


def poisson(pa: Jet, pb: Jet, dim: int, metric=METRIC) -> Jet:
    """Canonical bracket from two partial-derivative jets (axis 0 = coordinate).

    The result carries the value axes of ``A`` followed by those of ``B``.
    """
    na, nb = pa.ndim - 1, pb.ndim - 1
    if na + nb + 2 > len(_LETTERS):
        raise ValueError("tensor rank too large for bracket")
    sa, sb = _LETTERS[2:2 + na], _LETTERS[2 + na:2 + na + nb]
    out = sa + sb

    def contract(a, b):
        return jet.einsum(f"i{sa},i{sb}->{out}", a, b)

    dxa, dpa = pa[0:4], pa[4:8]
    dxb, dpb = pb[0:4], pb[4:8]
    ginv = np.linalg.inv(metric)
    spacetime = (jet.einsum(f"i{sa},ij,j{sb}->{out}", dxa, ginv, dpb)
                 - jet.einsum(f"i{sa},ij,j{sb}->{out}", dpa, ginv, dxb))
    dxi_a, deta_a = _wirtinger(pa, 8, dim), _wirtinger(pa, 8 + 2 * dim, dim)
    dxi_b, deta_b = _wirtinger(pb, 8, dim), _wirtinger(pb, 8 + 2 * dim, dim)
    spinor = contract(dxi_a, deta_b) - contract(deta_a, dxi_b)
    return spacetime + spinor


def bracket(A: Observable, B: Observable, metric=METRIC) -> Observable:
    """Canonical bracket ``{A, B}`` as a new observable.

    Evaluating the result at derivative order ``k`` evaluates ``A`` and ``B`` at
    order ``k + 1``; jets stop at second order, so ``{A, {B, C}}`` can be
    evaluated but not differentiated further.
    """

    def evaluator(point: Point, order: int):
        if order + 1 > jet.MAX_ORDER:
            raise ValueError("bracket nesting exceeds the available derivative order")
        pa = A._eval(point, order + 1).partials()
        pb = B._eval(point, order + 1).partials()
        return poisson(pa, pb, point.rep.dim, metric)

    return Observable(evaluator, f"{{{A.label}, {B.label}}}")


# ------------------------------------------------------------- observable set


@dataclass(frozen=True)
class ObservableSuite:
    """The standard observables for one representation (upper indices)."""

    x: Observable
    p: Observable
    p_lower: Observable
    p2: Observable
    u: Observable
    S: Observable
    r: Observable
    W: Observable
    L: Observable
    J: Observable
    X: Observable
    z: Observable
    f_slope: Observable
    H: Observable
    spinor_norm: Observable

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def _p2(c):
    return mdot(c.p, c.p)


def _u(c, rep):
    return jet.einsum("...a,mab,...b->...m", c.xibar, rep.beta, c.xi)


def _S(c, rep):
    return (-c.lam * rep.s) * jet.einsum("...a,mnab,...b->...mn", c.xibar, rep.beta_tensor, c.xi)


def _r(c, rep, p=None):
    p = c.p if p is None else p
    s_p = jet.einsum("...mn,...n->...m", _S(c, rep), lower(p))
    return -s_p / mdot(p, p)[..., None]


def _W(c, rep, p=None):
    p = c.p if p is None else p
    bd = jet.einsum("...a,mnab,...b->...mn", c.xibar, rep.beta_dual, c.xi)
    return (c.lam * rep.s) * jet.einsum("...mn,...n->...m", bd, lower(p))


def _L(c):
    return (jet.einsum("...m,...n->...mn", c.x, c.p)
            - jet.einsum("...n,...m->...mn", c.x, c.p))


def _H(c, rep, p=None):
    p = c.p if p is None else p
    bp = jet.einsum("mab,...m->...ab", rep.beta, lower(p))
    bp_xi = jet.einsum("...ab,...b->...a", bp, c.xi)
    return jet.einsum("...a,...a->...", c.xibar, bp_xi)


def observables_suite(rep: RepMatrices) -> ObservableSuite:
    """Build the observable set for ``rep``.

    With ``xi_bar = -i eta / lam``::

        u^mu  = xi_bar beta^mu xi
        S^mn  = -lam s xi_bar beta^{mn} xi
        r^mu  = (lam s / p^2) xi_bar beta^{mn} xi p_n   (= -S^{mn} p_n / p^2)
        W^mu  = lam s xi_bar beta*^{mn} xi p_n
        L^mn  = x^m p^n - x^n p^m,  J = L + S
        X^mu  = J^{mn} p_n / p^2,   z = x - r
        H     = xi_bar beta.p xi,   f_slope = H / p^2
    """
    f = Observable.from_coords

    def J(c):
        return _L(c) + _S(c, rep)

    def X(c):
        return jet.einsum("...mn,...n->...m", J(c), lower(c.p)) / _p2(c)[..., None]

    return ObservableSuite(
        x=f(lambda c: c.x, "x"),
        p=f(lambda c: c.p, "p"),
        p_lower=f(lambda c: lower(c.p), "p_lower"),
        p2=f(_p2, "p2"),
        u=f(lambda c: _u(c, rep), "u"),
        S=f(lambda c: _S(c, rep), "S", "antisymmetric"),
        r=f(lambda c: _r(c, rep), "r"),
        W=f(lambda c: _W(c, rep), "W"),
        L=f(_L, "L", "antisymmetric"),
        J=f(J, "J", "antisymmetric"),
        X=f(X, "X"),
        z=f(lambda c: c.x - _r(c, rep), "z"),
        f_slope=f(lambda c: _H(c, rep) / _p2(c), "f_slope"),
        H=f(lambda c: _H(c, rep), "H"),
        spinor_norm=f(lambda c: jet.einsum("...a,ab,...b->...", c.xibar, np.eye(rep.dim), c.xi),
                      "xibar.xi"),
    )


def hamiltonian(rep: RepMatrices) -> Observable:
    """``H = xi_bar beta^mu p_mu xi``."""
    return Observable.from_coords(lambda c: _H(c, rep), "H")


_SUITES: dict = {}


def suite_for(rep: RepMatrices) -> ObservableSuite:
    """Cached :func:`observables_suite`."""
    key = rep.spin
    if key not in _SUITES:
        _SUITES[key] = observables_suite(rep)
    return _SUITES[key]


# ------------------------------------------------------------------- sampling


def boost_matrix(velocity) -> np.ndarray:
    """Pure Lorentz boost ``Lambda^mu_nu`` taking the rest frame to 3-velocity ``velocity``."""
    v = np.asarray(velocity, dtype=float)
    v2 = float(v @ v)
    if v2 >= 1.0:
        raise ValueError("boost speed must be below 1")
    lam = np.eye(4)
    if v2 == 0.0:
        return lam
    gamma = 1.0 / np.sqrt(1.0 - v2)
    lam[0, 0] = gamma
    lam[0, 1:] = lam[1:, 0] = gamma * v
    lam[1:, 1:] += (gamma - 1.0) * np.outer(v, v) / v2
    return lam


def spinor_boost(rep: RepMatrices, velocity) -> np.ndarray:
    """Spinor matrix accompanying :func:`boost_matrix`.

    ``bar(S xi) beta^mu (S xi) = Lambda^mu_nu bar(xi) beta^nu xi`` with
    ``S = exp(-rapidity * n_i * i s beta^{0i})``.
    """
    v = np.asarray(velocity, dtype=float)
    speed = float(np.linalg.norm(v))
    if speed == 0.0:
        return np.eye(rep.dim, dtype=complex)
    n = v / speed
    gen = sum(n[i] * 1j * rep.s * rep.beta_tensor[0, i + 1] for i in range(3))
    return expm(-np.arctanh(speed) * gen)


def boost_state(state: "PhaseState", velocity) -> "PhaseState":
    """Actively boost ``x``, ``p`` and ``xi`` by the same Lorentz transformation."""
    lam = boost_matrix(velocity)
    return state.replace(x=lam @ state.x, p=lam @ state.p,
                         xi=spinor_boost(state.rep, velocity) @ state.xi)


def rest_frame(state: "PhaseState") -> "PhaseState":
    """The state boosted so that its spatial momentum vanishes."""
    return boost_state(state, -state.p[1:] / state.p[0])


def random_timelike(rng: np.random.Generator, mass_range=(0.5, 2.0), max_speed: float = 0.9):
    m = rng.uniform(*mass_range)
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    speed = rng.uniform(0.0, max_speed)
    return boost_matrix(speed * direction) @ np.array([m, 0.0, 0.0, 0.0])


def random_spinor(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Uniform sample from the unit ball of C^dim."""
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    v /= np.linalg.norm(v)
    return v * rng.uniform() ** (1.0 / (2 * dim))


@dataclass
class StateSampler:
    """Seedable generator of random physical states.

    ``normalize`` may be ``None``, ``+1`` or ``-1`` (the latter two resample until
    the indefinite norm has that sign, then rescale to it).  ``boost`` applies a
    fixed Lorentz boost (given as a 3-velocity) to every sampled state, spinor
    included.
    """

    rep: RepMatrices
    seed: int = 0
    lam: float = 1.0
    normalize: Optional[int] = None
    boost: Optional[np.ndarray] = None
    mass_range: tuple = (0.5, 2.0)
    rng: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        self.rng = np.random.default_rng(self.seed)

    def __call__(self) -> PhaseState:
        rng = self.rng
        p = random_timelike(rng, self.mass_range)
        x = rng.normal(size=4)
        while True:
            xi = random_spinor(rng, self.rep.dim)
            state = PhaseState(x, p, xi, self.lam, self.rep.spin)
            if self.normalize is None:
                break
            if np.sign(state.norm()) == np.sign(self.normalize) and abs(state.norm()) > 1e-3:
                state = state.normalized(self.normalize)
                break
        if self.boost is not None:
            state = boost_state(state, self.boost)
        return state


# ----------------------------------------------------------- algebra checks


@dataclass
class AlgebraReport:
    n: int
    tolerance: float
    residuals: dict  # relation name -> max relative residual over states

    @property
    def passed(self) -> bool:
        return all(v <= self.tolerance for v in self.residuals.values())


def _rel(lhs, rhs, floor: float = 0.0) -> float:
    scale = max(np.abs(lhs).max(), np.abs(rhs).max(), floor, 1e-300)
    return float(np.abs(lhs - rhs).max() / scale)


def algebra_residuals(rep: RepMatrices, state: PhaseState, metric=METRIC) -> dict:
    """Relative residuals of the W/r bracket relations at one state.

    Left sides come from the bracket engine; right sides are direct
    epsilon-contractions of the numeric ``p``, ``W`` and ``r`` (with indices
    lowered by ``metric``, which tests may corrupt deliberately).
    """
    suite = suite_for(rep)
    w_lo, r_lo = suite.W.lowered(), suite.r.lowered()
    point = Point.of(state)
    ww = bracket(w_lo, w_lo).evaluate(point).val
    wr = bracket(w_lo, r_lo).evaluate(point).val
    rr = bracket(r_lo, r_lo).evaluate(point).val

    p = state.p
    W = np.real_if_close(suite.W.value(point))
    r = np.real_if_close(suite.r.value(point))
    eps_lo = np.einsum("abcd,ai,bj,ck,dl->ijkl", EPS, metric, metric, metric, metric)
    p2 = float(p @ metric @ p)
    rhs_ww = np.einsum("mnrl,r,l->mn", eps_lo, p, W)
    rhs_wr = np.einsum("mnrl,r,l->mn", eps_lo, p, r)
    rhs_rr = -rhs_ww / p2**2
    # floors keep the relative residual meaningful when r (or W) vanishes
    pn, wn, rn = np.abs(p).max(), np.abs(W).max(), np.abs(r).max()
    return {"WW": _rel(ww, rhs_ww, pn * wn),
            "Wr": _rel(wr, rhs_wr, pn * rn + wn / pn),
            "rr": _rel(rr, rhs_rr, wn / pn**3)}


def verify_algebra(rep: RepMatrices, sampler: Callable[[], PhaseState], n: int,
                   tol: float = 1e-9, metric=METRIC, raise_on_failure: bool = True
                   ) -> AlgebraReport:
    """Check the W/r bracket relations at ``n`` sampled states.

    Raises :class:`AlgebraViolation` (carrying the report) when any relative
    residual exceeds ``tol`` and ``raise_on_failure`` is set.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    worst = {"WW": 0.0, "Wr": 0.0, "rr": 0.0}
    for _ in range(n):
        res = algebra_residuals(rep, sampler(), metric)
        for k, v in res.items():
            worst[k] = max(worst[k], v)
    report = AlgebraReport(n, tol, worst)
    if raise_on_failure and not report.passed:
        bad = {k: v for k, v in worst.items() if v > tol}
        raise AlgebraViolation(f"bracket relations violated: {bad}", report)
    return report


def check_z_not_canonical(rep: RepMatrices, state: PhaseState) -> float:
    """Largest ``|{z^mu, z^nu}|`` over ``mu < nu`` for ``z = x - r``."""
    z = suite_for(rep).z
    zz = bracket(z, z).value(state)
    iu = np.triu_indices(4, k=1)
    return float(np.abs(zz[iu]).max())


# ------------------------------------------------------------ identity checks


def decomposition_residuals(rep: RepMatrices, state: PhaseState) -> dict:
    """Residuals of the spin-tensor identities at one state.

    ``reconstruction``: ``S^{mn} + (r^m p^n - r^n p^m) - eps^{mnrs} W_r p_s / p^2``;
    ``norm``: ``1/2 S_{mn} S^{mn} - (-W^2/p^2 + p^2 r^2)``;
    ``dual_ratio``: ``(1/2 S*_{mn} S^{mn}) / (W.r)``;
    ``r_dot_p``, ``W_dot_p``: orthogonality.
    """
    suite = suite_for(rep)
    point = Point.of(state)
    S = suite.S.value(point)
    r = suite.r.value(point)
    W = suite.W.value(point)
    p = state.p
    p2 = state.p2
    recon = (S + (np.outer(r, p) - np.outer(p, r))
             - np.einsum("mnrs,r,s->mn", EPS, METRIC @ W, METRIC @ p) / p2)
    s_lower = METRIC @ S @ METRIC
    half_ss = 0.5 * np.sum(s_lower * S)
    norm_rhs = -(W @ METRIC @ W) / p2 + p2 * (r @ METRIC @ r)
    s_dual_lower = METRIC @ dual(S) @ METRIC
    half_sds = 0.5 * np.sum(s_dual_lower * S)
    wr = W @ METRIC @ r
    scale = max(np.abs(S).max(), 1e-300)
    return {
        "reconstruction": float(np.abs(recon).max() / scale),
        "norm": float(abs(half_ss - norm_rhs) / max(abs(half_ss), abs(norm_rhs), 1e-300)),
        "dual_ratio": complex(half_sds / wr) if abs(wr) > 1e-300 else complex("nan"),
        "r_dot_p": float(abs(r @ METRIC @ p) / (np.sqrt(abs(r @ METRIC @ r)) * state.mass
                                                 + 1e-300)),
        "W_dot_p": float(abs(W @ METRIC @ p) / (np.sqrt(abs(W @ METRIC @ W)) * state.mass
                                                 + 1e-300)),
        "_half_SdS": complex(half_sds),
        "_W_dot_r": complex(wr),
    }


__all__ = [
    "PhaseState", "Point", "Coords", "Observable", "ObservableSuite", "StateSampler",
    "AlgebraReport", "bracket", "poisson", "observables_suite", "suite_for", "hamiltonian",
    "x_coord", "p_lower", "p_upper", "spinor_bilinear", "constant", "verify_algebra",
    "algebra_residuals", "check_z_not_canonical", "decomposition_residuals", "boost_matrix",
    "random_timelike", "random_spinor", "spinor_boost", "boost_state", "rest_frame", "phase_dim", "EPS_LOWER",
]
