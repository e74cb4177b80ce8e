"""Second-order forward-mode automatic differentiation on numpy arrays.

A :class:`Jet` carries a value together with its gradient and Hessian with
respect to ``N`` real seed coordinates.  Derivative axes are stored *in front*
of the value axes::

    val   shape S
    grad  shape (N,) + S
    hess  shape (N, N) + S

so trailing-axis operations (negative ``axis`` arguments, ``...`` in einsum
subscripts, ``jet[..., i]``) act identically on all three arrays.  Values may be
complex; the derivatives are always taken with respect to real coordinates.

The order of a jet is 0 (value only), 1 (value and gradient) or 2.  Mixing jets
of different order truncates to the lowest one.
"""

from __future__ import annotations

import numpy as np

MAX_ORDER = 2


class Jet:
    """Truncated second-order Taylor expansion of an array-valued function."""

    __array_priority__ = 1000  # make ndarray <op> Jet defer to Jet

    __slots__ = ("val", "grad", "hess")

    def __init__(self, val, grad=None, hess=None):
        self.val = np.asarray(val)
        self.grad = None if grad is None else np.asarray(grad)
        self.hess = None if (grad is None or hess is None) else np.asarray(hess)

    # ------------------------------------------------------------------ basics
    @classmethod
    def seed(cls, z, order: int = 1) -> "Jet":
        """Independent coordinates ``z`` (1-d, real) differentiated w.r.t. themselves."""
        z = np.asarray(z, dtype=float)
        if z.ndim != 1:
            raise ValueError("seed coordinates must be a 1-d array")
        if not 0 <= order <= MAX_ORDER:
            raise ValueError(f"jet order must be in [0, {MAX_ORDER}], got {order}")
        n = z.size
        grad = np.eye(n) if order >= 1 else None
        hess = np.zeros((n, n, n)) if order >= 2 else None
        return cls(z, grad, hess)

    @property
    def order(self) -> int:
        if self.grad is None:
            return 0
        return 1 if self.hess is None else 2

    @property
    def shape(self):
        return self.val.shape

    @property
    def ndim(self) -> int:
        return self.val.ndim

    @property
    def nvars(self) -> int:
        return 0 if self.grad is None else self.grad.shape[0]

    def truncate(self, order: int) -> "Jet":
        if order >= self.order:
            return self
        return Jet(self.val, self.grad if order >= 1 else None, self.hess if order >= 2 else None)

    def partials(self) -> "Jet":
        """The gradient as a jet of one order lower, with value shape ``(N,) + S``.

        Axis 0 of the result's value indexes the differentiation variable.
        """
        if self.order == 0:
            raise ValueError("cannot take partials of an order-0 jet")
        return Jet(self.grad, self.hess)

    def __repr__(self):
        return f"Jet(order={self.order}, shape={self.shape}, val={self.val!r})"

    # -------------------------------------------------------------- arithmetic
    def _lift(self, ndim: int) -> "Jet":
        extra = ndim - self.ndim
        if extra <= 0:
            return self
        pad = (1,) * extra
        val = self.val.reshape(pad + self.val.shape)
        grad = None if self.grad is None else self.grad.reshape(
            self.grad.shape[:1] + pad + self.val.shape)
        hess = None if self.hess is None else self.hess.reshape(
            self.hess.shape[:2] + pad + self.val.shape)
        return Jet(val, grad, hess)

    def __neg__(self):
        return Jet(-self.val, _neg(self.grad), _neg(self.hess))

    def __add__(self, other):
        if not isinstance(other, Jet):
            other = np.asarray(other)
            a = self._lift(other.ndim)
            return Jet(a.val + other, a.grad, a.hess)
        order = min(self.order, other.order)
        nd = max(self.ndim, other.ndim)
        a, b = self.truncate(order)._lift(nd), other.truncate(order)._lift(nd)
        grad = None if order < 1 else a.grad + b.grad
        hess = None if order < 2 else a.hess + b.hess
        return Jet(a.val + b.val, grad, hess)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            other = np.asarray(other)
            a = self._lift(other.ndim)
            return Jet(a.val * other, _mul(a.grad, other), _mul(a.hess, other))
        order = min(self.order, other.order)
        nd = max(self.ndim, other.ndim)
        a, b = self.truncate(order)._lift(nd), other.truncate(order)._lift(nd)
        val = a.val * b.val
        grad = hess = None
        if order >= 1:
            grad = a.grad * b.val + a.val * b.grad
        if order >= 2:
            cross = a.grad[:, None] * b.grad[None, :]
            hess = a.hess * b.val + a.val * b.hess + cross + np.swapaxes(cross, 0, 1)
        return Jet(val, grad, hess)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return self * (1.0 / np.asarray(other))

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __getitem__(self, idx):
        if not isinstance(idx, tuple):
            idx = (idx,)
        if Ellipsis not in idx:
            idx = idx + (Ellipsis,)
        # Leading derivative axes are skipped by prefixing full slices; an
        # explicit Ellipsis in idx is already positioned relative to S.
        lead = (slice(None),)
        val = self.val[idx]
        grad = None if self.grad is None else self.grad[lead + idx]
        hess = None if self.hess is None else self.hess[lead * 2 + idx]
        return Jet(val, grad, hess)

    def sum(self, axis=None):
        if axis is None:
            axis = tuple(range(-self.ndim, 0))
        axes = (axis,) if np.isscalar(axis) else tuple(axis)
        axes = tuple(a - self.ndim if a >= 0 else a for a in axes)
        return Jet(self.val.sum(axis=axes),
                   None if self.grad is None else self.grad.sum(axis=axes),
                   None if self.hess is None else self.hess.sum(axis=axes))

    @property
    def real(self) -> "Jet":
        return Jet(self.val.real, _real(self.grad), _real(self.hess))

    @property
    def imag(self) -> "Jet":
        return Jet(self.val.imag, _imag(self.grad), _imag(self.hess))

    def conj(self) -> "Jet":
        return Jet(self.val.conj(), _conj(self.grad), _conj(self.hess))

    # ---------------------------------------------------- elementwise functions
    def _unary(self, f0, f1, f2) -> "Jet":
        """Chain rule for an elementwise scalar function with derivatives f1, f2."""
        v = self.val
        grad = hess = None
        if self.order >= 1:
            d1 = f1(v)
            grad = self.grad * d1
            if self.order >= 2:
                hess = (self.hess * d1
                        + self.grad[:, None] * self.grad[None, :] * f2(v))
        return Jet(f0(v), grad, hess)

    def reciprocal(self) -> "Jet":
        return self._unary(lambda v: 1.0 / v, lambda v: -1.0 / v**2, lambda v: 2.0 / v**3)

    def sqrt(self) -> "Jet":
        return self._unary(np.sqrt, lambda v: 0.5 / np.sqrt(v), lambda v: -0.25 / v**1.5)

    def sin(self) -> "Jet":
        return self._unary(np.sin, np.cos, lambda v: -np.sin(v))

    def cos(self) -> "Jet":
        return self._unary(np.cos, lambda v: -np.sin(v), lambda v: -np.cos(v))

    def exp(self) -> "Jet":
        return self._unary(np.exp, np.exp, np.exp)


def _neg(a):
    return None if a is None else -a


def _mul(a, c):
    return None if a is None else a * c


def _real(a):
    return None if a is None else a.real


def _imag(a):
    return None if a is None else a.imag


def _conj(a):
    return None if a is None else a.conj()


def value(x):
    """Plain array behind ``x`` (jets are unwrapped, constants passed through)."""
    return x.val if isinstance(x, Jet) else np.asarray(x)


def as_jet(x) -> Jet:
    return x if isinstance(x, Jet) else Jet(x)


# ---------------------------------------------------------------------- einsum
_DERIV_LETTERS = "YZ"


def einsum(subscripts: str, *operands):
    """``numpy.einsum`` for a mix of constant arrays and at most two jets.

    Subscripts must be explicit (``'...a,mab,...b->...m'``) and must not use the
    letters ``Y`` or ``Z``, which are reserved for derivative axes.  The result is
    a :class:`Jet` when any operand is one, a plain array otherwise.
    """
    if "->" not in subscripts:
        raise ValueError("einsum subscripts must contain '->'")
    lhs, out = subscripts.replace(" ", "").split("->")
    subs = lhs.split(",")
    if len(subs) != len(operands):
        raise ValueError("number of subscripts does not match operands")
    if any(c in subscripts for c in _DERIV_LETTERS):
        raise ValueError(f"letters {_DERIV_LETTERS!r} are reserved")

    jet_pos = [i for i, op in enumerate(operands) if isinstance(op, Jet)]
    vals = [value(op) for op in operands]
    val = np.einsum(subscripts, *vals)
    if not jet_pos:
        return val
    order = min(operands[i].order for i in jet_pos)
    if len(jet_pos) > 2:
        raise ValueError("einsum supports at most two jet operands")

    def run(tagged, arrays, out_tag):
        s = ",".join(tagged) + "->" + out_tag + out
        return np.einsum(s, *arrays)

    if len(jet_pos) == 1:
        (k,) = jet_pos
        jet = operands[k].truncate(order)
        grad = hess = None
        if order >= 1:
            tags = [("Y" + s if n == k else s) for n, s in enumerate(subs)]
            arrs = [jet.grad if n == k else v for n, v in enumerate(vals)]
            grad = run(tags, arrs, "Y")
        if order >= 2:
            tags = [("YZ" + s if n == k else s) for n, s in enumerate(subs)]
            arrs = [jet.hess if n == k else v for n, v in enumerate(vals)]
            hess = run(tags, arrs, "YZ")
        return Jet(val, grad, hess)

    i, j = jet_pos
    a, b = operands[i].truncate(order), operands[j].truncate(order)

    def pair(ti, ai, tj, aj, out_tag):
        tags, arrs = list(subs), list(vals)
        tags[i], arrs[i] = ti + subs[i], ai
        tags[j], arrs[j] = tj + subs[j], aj
        return run(tags, arrs, out_tag)

    grad = hess = None
    if order >= 1:
        grad = pair("Y", a.grad, "", b.val, "Y") + pair("", a.val, "Y", b.grad, "Y")
    if order >= 2:
        hess = (pair("YZ", a.hess, "", b.val, "YZ")
                + pair("", a.val, "YZ", b.hess, "YZ")
                + pair("Y", a.grad, "Z", b.grad, "YZ")
                + pair("Z", a.grad, "Y", b.grad, "YZ"))
    return Jet(val, grad, hess)


__all__ = ["Jet", "einsum", "value", "as_jet", "MAX_ORDER"]
