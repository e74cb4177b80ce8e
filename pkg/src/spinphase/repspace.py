"""Dirac matrices and the spin-s matrices built from tensor products of them.

Conventions used throughout the package:

* metric ``g = diag(+1, -1, -1, -1)``;
* Levi-Civita orientation ``eps^{0123} = +1`` (hence ``eps_{0123} = -1``);
* Dirac basis, ``gamma^0 = diag(I, -I)``, ``gamma^i = [[0, sigma_i], [-sigma_i, 0]]``.

Spin ``s`` uses ``n = 2s`` Dirac factors.  The matrices ``beta^mu`` are the
factor-averaged ``gamma^mu`` restricted to the totally symmetric subspace of
``(C^4)^{(x) n}``, of dimension ``C(n+3, 3)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, sqrt

import numpy as np

from spinphase import jet
from spinphase.errors import NotAntisymmetric, UnsupportedSpin

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])
METRIC.setflags(write=False)

SUPPORTED_SPINS = (Fraction(1, 2), Fraction(1))


def _levi_civita() -> np.ndarray:
    eps = np.zeros((4, 4, 4, 4))
    for perm in itertools.permutations(range(4)):
        # parity of the permutation by counting inversions
        inv = sum(1 for i in range(4) for j in range(i + 1, 4) if perm[i] > perm[j])
        eps[perm] = -1.0 if inv % 2 else 1.0
    return eps


EPS = _levi_civita()  # eps^{mu nu rho sigma}, eps^{0123} = +1
EPS_LOWER = np.einsum("abcd,ai,bj,ck,dl->ijkl", EPS, METRIC, METRIC, METRIC, METRIC)
EPS.setflags(write=False)
EPS_LOWER.setflags(write=False)


def lower(v, metric=METRIC):
    """Lower (or raise) the last index of a four-vector array or jet."""
    return jet.einsum("...n,nm->...m", v, metric)


def mdot(a, b, metric=METRIC):
    """Minkowski product ``a^mu g_{mu nu} b^nu`` over the last axis."""
    return jet.einsum("...m,mn,...n->...", a, metric, b)


def spin_fraction(s) -> Fraction:
    """Normalize a spin label (``0.5``, ``"1/2"``, ``Fraction(1, 2)``, ``1``)."""
    try:
        frac = Fraction(s)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise UnsupportedSpin(f"cannot interpret spin label {s!r}") from exc
    if frac <= 0 or (2 * frac).denominator != 1:
        raise UnsupportedSpin(f"spin must be a positive half-integer, got {s!r}")
    return frac


def symmetric_dimension(n: int) -> int:
    """Dimension of symmetric rank-``n`` tensors over C^4."""
    return comb(n + 3, 3)


def build_gammas() -> np.ndarray:
    """Dirac-basis gamma matrices, shape ``(4, 4, 4)``, first index ``mu`` (upper)."""
    i2 = np.eye(2)
    z2 = np.zeros((2, 2))
    sigma = [
        np.array([[0, 1], [1, 0]], dtype=complex),
        np.array([[0, -1j], [1j, 0]], dtype=complex),
        np.array([[1, 0], [0, -1]], dtype=complex),
    ]
    g0 = np.block([[i2, z2], [z2, -i2]]).astype(complex)
    gammas = [g0] + [np.block([[z2, s], [-s, z2]]) for s in sigma]
    return np.array(gammas)


def sym_projector(n: int) -> np.ndarray:
    """Isometry ``(4**n, D)`` whose columns span the symmetric tensors of rank ``n``.

    Column ``k`` is the normalized symmetrization of ``e_{i1} (x) ... (x) e_{in}``
    for the ``k``-th sorted multi-index ``i1 <= ... <= in``.
    """
    if n < 1:
        raise ValueError(f"factor count must be >= 1, got {n}")
    cols = []
    for multi in itertools.combinations_with_replacement(range(4), n):
        col = np.zeros((4,) * n)
        perms = set(itertools.permutations(multi))
        for perm in perms:
            col[perm] = 1.0
        cols.append(col.ravel() / sqrt(len(perms)))
    return np.array(cols, dtype=complex).T


def dual(T, metric=METRIC, atol: float = 1e-12):
    """Hodge dual of an antisymmetric tensor with upper indices.

    ``T*^{mu nu} = 1/2 eps^{mu nu rho sigma} T_{rho sigma}``.  ``T`` has shape
    ``(4, 4, ...)``; any trailing axes (e.g. matrix indices) are carried along.
    """
    arr = np.asarray(jet.value(T))
    if arr.shape[:2] != (4, 4):
        raise ValueError(f"expected a (4, 4, ...) tensor, got shape {arr.shape}")
    asym = np.abs(arr + np.swapaxes(arr, 0, 1)).max(initial=0.0)
    if asym > atol * max(1.0, np.abs(arr).max(initial=0.0)):
        raise NotAntisymmetric(f"tensor is not antisymmetric (|T + T^T| = {asym:.3e})")
    t_lower = jet.einsum("rs...,ra,sb->ab...", T, metric, metric)
    return 0.5 * jet.einsum("mnab,ab...->mn...", EPS, t_lower)


@dataclass(frozen=True, eq=False)
class RepMatrices:
    """Matrix apparatus for one spin label; immutable after construction."""

    spin: Fraction
    beta: np.ndarray  # beta^mu, (4, D, D)
    beta_tensor: np.ndarray  # beta^{mu nu} = i s [beta^mu, beta^nu], (4, 4, D, D)
    beta_dual: np.ndarray  # beta*^{mu nu}, (4, 4, D, D)
    parity: np.ndarray  # (D, D)
    projector: np.ndarray = field(repr=False)  # (4**n, D)

    @property
    def s(self) -> float:
        return float(self.spin)

    @property
    def n_factors(self) -> int:
        return int(2 * self.spin)

    @property
    def dim(self) -> int:
        return self.beta.shape[-1]

    def slash(self, p) -> np.ndarray:
        """``beta^mu p_mu`` for a contravariant momentum ``p^mu``."""
        return np.einsum("mab,m->ab", self.beta, METRIC @ np.asarray(p, dtype=float))

    def bar(self, xi) -> np.ndarray:
        """Parity adjoint ``xi^dagger . parity`` (row vector)."""
        xi = np.asarray(xi)
        return xi.conj() @ self.parity

    def bilinear(self, xi, matrix) -> np.ndarray:
        """``bar(xi) M xi``; result shape is ``xi.shape[:-1] + matrix.shape[:-2]``."""
        xi = np.asarray(xi)
        matrix = np.asarray(matrix)
        d = self.dim
        flat = np.einsum("...a,kab,...b->...k", self.bar(xi), matrix.reshape(-1, d, d), xi)
        return flat.reshape(xi.shape[:-1] + matrix.shape[:-2])


@lru_cache(maxsize=None)
def _build_rep(spin: Fraction) -> RepMatrices:
    n = int(2 * spin)
    gammas = build_gammas()
    proj = sym_projector(n)
    eye4 = np.eye(4)

    def embed(m, slot):
        out = np.ones((1, 1))
        for k in range(n):
            out = np.kron(out, m if k == slot else eye4)
        return out

    beta_full = [sum(embed(g, k) for k in range(n)) / n for g in gammas]
    beta = np.array([proj.conj().T @ b @ proj for b in beta_full])
    parity_full = np.ones((1, 1))
    for _ in range(n):
        parity_full = np.kron(parity_full, gammas[0])
    parity = proj.conj().T @ parity_full @ proj

    s = float(spin)
    beta_tensor = 1j * s * (np.einsum("mab,nbc->mnac", beta, beta)
                            - np.einsum("nab,mbc->mnac", beta, beta))
    beta_dual = dual(beta_tensor)
    for arr in (beta, beta_tensor, beta_dual, parity, proj):
        arr.setflags(write=False)
    return RepMatrices(spin, beta, beta_tensor, beta_dual, parity, proj)


def build_rep(s) -> RepMatrices:
    """Representation matrices for spin ``s`` (``1/2`` or ``1``); cached per spin."""
    spin = spin_fraction(s)
    if spin not in SUPPORTED_SPINS:
        raise UnsupportedSpin(f"spin {spin} is outside the supported range {{1/2, 1}}")
    return _build_rep(spin)
