"""
Exact arithmetic in the cyclotomic fields Q(zeta_m), m = p**level.

Elements are kept in the power basis 1, zeta, ..., zeta**(phi(m) - 1),
reduced modulo the m-th cyclotomic polynomial, and always stored at the
smallest level whose field contains them. Equality and hashing are therefore
plain coefficient comparisons.

"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy

_X = sympy.Symbol("x")


@lru_cache(maxsize=None)
def _reduction(m):
    """Lower coefficients c_0, ..., c_(phi-1) of the monic Phi_m."""
    poly = sympy.Poly(sympy.cyclotomic_poly(m, _X), _X)
    coeffs = [int(c) for c in reversed(poly.all_coeffs())]
    return tuple(coeffs[:-1])


def _reduce(dense, m):
    """Reduce a dense exponent list (length m) modulo Phi_m, in place."""
    low = _reduction(m)
    phi = len(low)
    for e in range(m - 1, phi - 1, -1):
        c = dense[e]
        if not c:
            continue
        dense[e] = 0
        shift = e - phi
        for i, ci in enumerate(low):
            if ci:
                dense[shift + i] -= c * ci
    return dense[:phi]


@dataclass(frozen=True)
class Cyclotomic:
    """
    Element of Q(zeta_m) with m = p**level.

    Parameters
    ----------
    p : int
    level : int
        the element lies in Q(zeta_(p**level)) and in no smaller such field
    coefficients : tuple of fractions.Fraction
        power-basis coordinates, length phi(p**level)

    """
    p: int
    level: int
    coefficients: tuple

    @classmethod
    def from_dense(cls, p, level, dense):
        """
        Build an element from coefficients indexed by exponents of zeta_m.

        Parameters
        ----------
        dense : sequence
            coefficient of zeta_m**e at position e; positions beyond m wrap
            around

        """
        m = p ** level
        work = [Fraction(0)] * m
        for e, c in enumerate(dense):
            if c:
                work[e % m] += c
        coeffs = _reduce(work, m)
        return cls._canonical(p, level, coeffs)

    @classmethod
    def _canonical(cls, p, level, coeffs):
        coeffs = list(coeffs)
        while level > 0:
            support = [i for i, c in enumerate(coeffs) if c]
            if level == 1:
                if any(i != 0 for i in support):
                    break
                coeffs = coeffs[:1] or [Fraction(0)]
            else:
                if any(i % p for i in support):
                    break
                coeffs = coeffs[::p][:len(coeffs) // p]
            level -= 1
        if level == 0:
            coeffs = coeffs[:1] or [Fraction(0)]
        return cls(p, level, tuple(Fraction(c) for c in coeffs))

    @classmethod
    def zero(cls, p):
        return cls(p, 0, (Fraction(0),))

    @classmethod
    def one(cls, p):
        return cls(p, 0, (Fraction(1),))

    @classmethod
    def from_rational(cls, p, r):
        return cls(p, 0, (Fraction(r),))

    @classmethod
    def root(cls, p, level, e):
        """zeta_(p**level) ** e."""
        m = p ** level
        dense = [0] * m
        dense[e % m] = 1
        return cls.from_dense(p, level, dense)

    @classmethod
    def from_exponent(cls, e):
        """exp(2 pi i e) for a UnitRootExponent e."""
        order = e.order
        level = 0
        while e.p ** level < order:
            level += 1
        return cls.root(e.p, level, int(e.value * order))

    @property
    def order(self):
        return self.p ** self.level

    def dense(self, level=None):
        """Coefficients indexed by exponents of zeta_(p**level)."""
        if level is None:
            level = self.level
        if level < self.level:
            raise ValueError(
                "cannot embed level {} into level {}".format(self.level, level))
        step = self.p ** (level - self.level)
        out = [Fraction(0)] * (self.p ** level)
        for i, c in enumerate(self.coefficients):
            if c:
                out[i * step] = c
        return out

    def _lift(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic.from_rational(self.p, other)
        if isinstance(other, Cyclotomic):
            if other.p != self.p:
                raise ValueError(
                    "primes differ: {} and {}".format(self.p, other.p))
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        level = max(self.level, other.level)
        a, b = self.dense(level), other.dense(level)
        return Cyclotomic.from_dense(
            self.p, level, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.p, self.level,
                          tuple(-c for c in self.coefficients))

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Cyclotomic.zero(self.p)
            return Cyclotomic(self.p, self.level,
                              tuple(c * other for c in self.coefficients))
        other = self._lift(other)
        if other is NotImplemented:
            return other
        level = max(self.level, other.level)
        m = self.p ** level
        a, b = self.dense(level), other.dense(level)
        out = [Fraction(0)] * m
        nz_b = [(j, y) for j, y in enumerate(b) if y]
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in nz_b:
                out[(i + j) % m] += x * y
        return Cyclotomic.from_dense(self.p, level, out)

    __rmul__ = __mul__

    def conjugate(self):
        m = self.order
        out = [Fraction(0)] * m
        for i, c in enumerate(self.coefficients):
            out[-i % m] += c
        return Cyclotomic.from_dense(self.p, self.level, out)

    def is_zero(self):
        return not any(self.coefficients)

    def is_rational(self):
        return self.level == 0

    def rational(self):
        """The value as a Fraction; raises ValueError if not rational."""
        if self.level != 0:
            raise ValueError("{} is not rational".format(self))
        return self.coefficients[0]

    def to_complex(self):
        m = self.order
        coeffs = np.array([float(c) for c in self.coefficients])
        roots = np.exp(2j * np.pi * np.arange(len(coeffs)) / m)
        return complex(np.dot(coeffs, roots))

    def __str__(self):
        if self.level == 0:
            return str(self.coefficients[0])
        terms = ["{}*z^{}".format(c, i)
                 for i, c in enumerate(self.coefficients) if c]
        return "[{}]_{}".format(" + ".join(terms), self.order)


def cyc_add(a, b):
    return a + b


def cyc_mul(a, b):
    return a * b


def cyc_conj(a):
    return a.conjugate()


def cyc_from_exponent(e):
    return Cyclotomic.from_exponent(e)


def cyc_is_zero(a):
    return a.is_zero()
