"""Forward-mode differentiation with dual numbers.

A :class:`Dual` carries a value together with a tangent vector and every
arithmetic operation propagates both. Seeding the coordinates of a point with
unit tangents therefore yields the exact gradient of any expression composed
from the operations below, at the cost of one evaluation.
"""

from __future__ import annotations

import math

import numpy as np


class Dual:
    __slots__ = ("val", "eps")

    # keep numpy scalars from absorbing duals into object arrays; binary ops
    # then fall back to the __r*__ methods below
    __array_ufunc__ = None

    def __init__(self, val, eps):
        self.val = float(val)
        self.eps = eps  # 1-D float ndarray, owned by the arithmetic below

    def __repr__(self):
        return f"Dual({self.val!r}, {self.eps!r})"

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val + other.val, self.eps + other.eps)
        return Dual(self.val + float(other), self.eps)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val - other.val, self.eps - other.eps)
        return Dual(self.val - float(other), self.eps)

    def __rsub__(self, other):
        return Dual(float(other) - self.val, -self.eps)

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val * other.val,
                        self.val * other.eps + other.val * self.eps)
        c = float(other)
        return Dual(self.val * c, c * self.eps)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            inv = 1.0 / other.val
            return Dual(self.val * inv,
                        (self.eps - (self.val * inv) * other.eps) * inv)
        inv = 1.0 / float(other)
        return Dual(self.val * inv, self.eps * inv)

    def __rtruediv__(self, other):
        c = float(other)
        inv = 1.0 / self.val
        return Dual(c * inv, (-c * inv * inv) * self.eps)

    def __pow__(self, n):
        if isinstance(n, Dual):
            raise TypeError("dual exponents are not supported")
        n = float(n)
        if n == 2.0:
            return Dual(self.val * self.val, (2.0 * self.val) * self.eps)
        v = self.val ** n
        return Dual(v, (n * self.val ** (n - 1.0)) * self.eps)

    def __neg__(self):
        return Dual(-self.val, -self.eps)

    def __pos__(self):
        return self

    # comparisons act on values so domain guards work inside field code
    def __lt__(self, other):
        return self.val < _value(other)

    def __le__(self, other):
        return self.val <= _value(other)

    def __gt__(self, other):
        return self.val > _value(other)

    def __ge__(self, other):
        return self.val >= _value(other)


def _value(x):
    return x.val if isinstance(x, Dual) else float(x)


def value(x):
    """Plain float value of ``x``, whether dual or not."""
    return _value(x)


def seed(coords):
    """Duals for ``coords`` with the identity as tangent basis."""
    coords = np.asarray(coords, dtype=float)
    n = coords.shape[0]
    basis = np.eye(n)
    return [Dual(coords[i], basis[i]) for i in range(n)]


def gradient(func, coords):
    """Exact gradient of ``func`` at ``coords`` by one forward pass."""
    out = func(seed(coords))
    if isinstance(out, Dual):
        return np.array(out.eps, dtype=float)
    # constant expressions degrade to plain floats
    return np.zeros(len(coords))


def sqrt(x):
    if isinstance(x, Dual):
        v = math.sqrt(x.val)
        return Dual(v, (0.5 / v) * x.eps)
    return math.sqrt(x)


def exp(x):
    if isinstance(x, Dual):
        v = math.exp(x.val)
        return Dual(v, v * x.eps)
    return math.exp(x)


def log(x):
    if isinstance(x, Dual):
        return Dual(math.log(x.val), x.eps / x.val)
    return math.log(x)


def sin(x):
    if isinstance(x, Dual):
        return Dual(math.sin(x.val), math.cos(x.val) * x.eps)
    return math.sin(x)


def cos(x):
    if isinstance(x, Dual):
        return Dual(math.cos(x.val), -math.sin(x.val) * x.eps)
    return math.cos(x)


def sinh(x):
    if isinstance(x, Dual):
        return Dual(math.sinh(x.val), math.cosh(x.val) * x.eps)
    return math.sinh(x)


def cosh(x):
    if isinstance(x, Dual):
        return Dual(math.cosh(x.val), math.sinh(x.val) * x.eps)
    return math.cosh(x)


def atan2(y, x):
    if isinstance(y, Dual) or isinstance(x, Dual):
        yv, xv = _value(y), _value(x)
        denom = xv * xv + yv * yv
        ye = y.eps if isinstance(y, Dual) else 0.0
        xe = x.eps if isinstance(x, Dual) else 0.0
        return Dual(math.atan2(yv, xv), (xv * ye - yv * xe) / denom)
    return math.atan2(y, x)
