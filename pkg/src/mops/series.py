"""Truncated Taylor series in the Euler-derivative direction.

A :class:`Jet` of order R stores ``(f, d f, d^2 f / 2!, ..., d^R f / R!)`` where
``d`` is an Euler derivative ``eta d/deta``. Writing ``eta = eta_0 e^eps`` makes
``d`` the ordinary ``eps`` derivative, so jets multiply and divide as
truncated power series in ``eps``. Running the exact factorization over jets
yields exact derivatives of every factor.
"""
from __future__ import annotations

from math import factorial

from gmpy2 import mpq


class Jet:
    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = tuple(coeffs)

    @classmethod
    def constant(cls, x, order):
        return cls((x,) + (mpq(0),) * order)

    @classmethod
    def from_derivatives(cls, derivs):
        """Build from ``(f, d f, d^2 f, ...)``."""
        return cls(d / factorial(r) for r, d in enumerate(derivs))

    @property
    def order(self):
        return len(self.c) - 1

    def derivative(self, r=1):
        return self.c[r] * factorial(r)

    def derivatives(self):
        return [self.derivative(r) for r in range(len(self.c))]

    def _lift(self, other):
        if isinstance(other, Jet):
            if len(other.c) != len(self.c):
                raise ValueError("jet orders differ")
            return other
        return Jet((other,) + (0,) * (len(self.c) - 1))

    def __add__(self, other):
        o = self._lift(other)
        return Jet(x + y for x, y in zip(self.c, o.c))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return Jet(x - y for x, y in zip(self.c, o.c))

    def __rsub__(self, other):
        o = self._lift(other)
        return Jet(y - x for x, y in zip(self.c, o.c))

    def __neg__(self):
        return Jet(-x for x in self.c)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(x * other for x in self.c)
        a, b = self.c, other.c
        n = len(a)
        if len(b) != n:
            raise ValueError("jet orders differ")
        out = []
        for k in range(n):
            s = 0
            for i in range(k + 1):
                x = a[i]
                if x != 0:
                    y = b[k - i]
                    if y != 0:
                        s = s + x * y
            out.append(s)
        return Jet(out)

    __rmul__ = __mul__

    def inverse(self):
        a = self.c
        if a[0] == 0:
            raise ZeroDivisionError("jet with zero constant term is not invertible")
        inv0 = 1 / mpq(a[0])
        b = [inv0]
        for k in range(1, len(a)):
            s = 0
            for j in range(1, k + 1):
                s = s + a[j] * b[k - j]
            b.append(-s * inv0)
        return Jet(b)

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(x / other for x in self.c)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        r = Jet.constant(mpq(1), self.order)
        for _ in range(k):
            r = r * self
        return r

    def __eq__(self, other):
        if isinstance(other, Jet):
            return self.c == other.c
        return self.c[0] == other and all(x == 0 for x in self.c[1:])

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None

    def __abs__(self):
        # only used for magnitude reports: the largest coefficient
        return max(abs(x) for x in self.c)

    def __repr__(self):
        return "Jet(" + ", ".join(str(x) for x in self.c) + ")"


def coefficient(x, r):
    """Taylor coefficient ``r`` of a jet; plain scalars are constants."""
    if isinstance(x, Jet):
        return x.c[r]
    return x if r == 0 else mpq(0)


def derivative(x, r=1):
    return coefficient(x, r) * factorial(r)


def exp_jet(x, order):
    """Jet of ``x e^eps``: all Euler derivatives of a linear parameter equal ``x``."""
    return Jet(mpq(x) / factorial(r) for r in range(order + 1))
