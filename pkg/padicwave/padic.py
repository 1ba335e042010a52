"""
Truncated p-adic scalars, vectors and matrices with tracked absolute precision.

A scalar is stored as ``p**exponent * unit`` with ``unit`` coprime to ``p`` and
known modulo ``p**(precision - exponent)``; the zero flag is ``unit == 0``.
Digits are the base-p digits of ``unit`` and always lie in {0, ..., p-1}.

"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .constants import DEFAULT_PRECISION
from .exceptions import PrimeMismatchError, PrecisionError
from .exceptions import SingularMatrixError

logger = logging.getLogger(__name__)

INF = math.inf


def int_valuation(n, p):
    """
    Valuation of a nonzero integer.

    Parameters
    ----------
    n : int
        nonzero integer
    p : int
        prime

    Returns
    -------
    int

    """
    if n == 0:
        raise ValueError("int_valuation: valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def rational_valuation(r, p):
    """Valuation of a rational number; math.inf for zero."""
    r = Fraction(r)
    if r == 0:
        return INF
    return int_valuation(r.numerator, p) - int_valuation(r.denominator, p)


def residue(r, p, level):
    """
    Canonical representative of r modulo p**level * Z_p.

    The result is a rational with p-power denominator whose p-adic digits are
    those of r below ``level``. ``level`` may be negative.

    """
    r = Fraction(r)
    if r == 0:
        return Fraction(0)
    x = PadicScalar.from_rational(r, p, precision=level)
    return x.to_fraction()


@dataclass(frozen=True)
class PadicScalar:
    """
    Element of Q_p known modulo p**precision.

    Parameters
    ----------
    p : int
        prime
    unit : int
        unit part, 0 < unit < p**(precision - exponent), coprime to p; 0 for
        the zero flag
    exponent : int
        valuation of a nonzero scalar; equal to ``precision`` for the zero flag
    precision : int
        absolute precision N (digits known modulo p**N)

    """
    p: int
    unit: int
    exponent: int
    precision: int

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("p: expected an integer >= 2, got {}".format(self.p))
        if self.unit == 0:
            if self.exponent != self.precision:
                raise ValueError("zero flag must carry exponent == precision")
            return
        if self.unit % self.p == 0:
            raise ValueError("unit part is divisible by p={}".format(self.p))
        if self.exponent >= self.precision:
            raise ValueError(
                "exponent {} must be below precision {}".format(
                    self.exponent, self.precision))
        if not 0 < self.unit < self.p ** (self.precision - self.exponent):
            raise ValueError("unit part is not reduced")

    # Construction

    @classmethod
    def zero(cls, p, precision=DEFAULT_PRECISION):
        return cls(p, 0, precision, precision)

    @classmethod
    def from_rational(cls, r, p, precision=DEFAULT_PRECISION):
        """
        Encode a rational whose denominator is coprime to p or a power of p
        (or any mixture of the two).

        """
        r = Fraction(r)
        if r == 0:
            return cls.zero(p, precision)
        num_v = int_valuation(r.numerator, p)
        den_v = int_valuation(r.denominator, p)
        v = num_v - den_v
        if v >= precision:
            return cls.zero(p, precision)
        num = r.numerator // p ** num_v
        den = r.denominator // p ** den_v
        modulus = p ** (precision - v)
        unit = num * pow(den, -1, modulus) % modulus
        return cls(p, unit, v, precision)

    @classmethod
    def from_digits(cls, p, gamma, digits, precision=None):
        """
        Build a scalar from digits d_gamma, d_gamma+1, ... (lowest first).

        Parameters
        ----------
        p : int
        gamma : int
            index of the first digit
        digits : sequence of int
            digits in {0, ..., p-1}
        precision : int or None
            defaults to gamma + len(digits)

        """
        if precision is None:
            precision = gamma + len(digits)
        m = 0
        for i, d in enumerate(digits):
            if not 0 <= d < p:
                raise ValueError(
                    "digit {} outside {{0,...,{}}}".format(d, p - 1))
            m += d * p ** i
        return cls._normalize(p, m, gamma, precision)

    @classmethod
    def parse(cls, text):
        """
        Parse a literal "p:gamma:d_gamma d_gamma+1 ..." (lowest digit first).

        An empty digit list denotes the zero flag with precision gamma.

        """
        try:
            p_text, gamma_text, digit_text = text.strip().split(":")
            p, gamma = int(p_text), int(gamma_text)
            digits = [int(t) for t in digit_text.split()]
        except ValueError:
            raise ValueError(
                'p-adic literal: expected "p:gamma:digits", got "{}"'.format(
                    text))
        if not digits:
            return cls.zero(p, gamma)
        return cls.from_digits(p, gamma, digits)

    @classmethod
    def _normalize(cls, p, m, v, precision):
        if v >= precision:
            return cls.zero(p, precision)
        m %= p ** (precision - v)
        if m == 0:
            return cls.zero(p, precision)
        k = int_valuation(m, p)
        v += k
        if v >= precision:
            return cls.zero(p, precision)
        m //= p ** k
        return cls(p, m % p ** (precision - v), v, precision)

    # Inspection

    def is_zero(self):
        return self.unit == 0

    @property
    def valuation(self):
        return INF if self.unit == 0 else self.exponent

    @property
    def digits(self):
        """Digits d_v, ..., d_(N-1); empty for the zero flag."""
        if self.unit == 0:
            return []
        out, m = [], self.unit
        for _ in range(self.precision - self.exponent):
            m, d = divmod(m, self.p)
            out.append(d)
        return out

    def digit(self, i):
        """Digit at index i (0 below the valuation); requires i < precision."""
        if i >= self.precision:
            raise PrecisionError(
                "digit {} is not known at precision {}".format(
                    i, self.precision))
        if self.unit == 0 or i < self.exponent:
            return 0
        return (self.unit // self.p ** (i - self.exponent)) % self.p

    def is_integral(self):
        return self.unit == 0 or self.exponent >= 0

    def norm(self):
        """|x|_p as an exact rational."""
        if self.unit == 0:
            return Fraction(0)
        return Fraction(self.p) ** (-self.exponent)

    def to_fraction(self):
        """Canonical rational: the sum of all known digits times p**i."""
        if self.unit == 0:
            return Fraction(0)
        return self.unit * Fraction(self.p) ** self.exponent

    def to_integer(self, signed=False):
        """
        Integer lift of an integral scalar modulo p**precision.

        Parameters
        ----------
        signed : bool, default False
            return the representative in (-p**N / 2, p**N / 2] instead of
            [0, p**N)

        Raises
        ------
        ValueError : scalar is not integral

        """
        if not self.is_integral():
            raise ValueError("to_integer: {} is not in Z_p".format(self))
        if self.unit == 0:
            return 0
        n = self.unit * self.p ** self.exponent
        modulus = self.p ** self.precision
        if signed and 2 * n > modulus:
            n -= modulus
        return n

    def truncate(self, precision):
        """Reduce to a lower absolute precision."""
        if precision >= self.precision:
            return self
        if self.unit == 0 or self.exponent >= precision:
            return PadicScalar.zero(self.p, precision)
        unit = self.unit % self.p ** (precision - self.exponent)
        return PadicScalar(self.p, unit, self.exponent, precision)

    def congruent(self, other):
        """True if both agree modulo p**min(precision)."""
        other = self._coerce(other)
        return (self - other).is_zero()

    def to_literal(self):
        if self.unit == 0:
            return "{}:{}:".format(self.p, self.precision)
        return "{}:{}:{}".format(
            self.p, self.exponent, " ".join(str(d) for d in self.digits))

    def __str__(self):
        return self.to_literal()

    def __repr__(self):
        return "PadicScalar('{}')".format(self.to_literal())

    # Arithmetic

    def _coerce(self, other):
        if isinstance(other, PadicScalar):
            if other.p != self.p:
                raise PrimeMismatchError(
                    "primes differ: {} and {}".format(self.p, other.p))
            return other
        if isinstance(other, (int, Fraction)):
            return PadicScalar.from_rational(other, self.p, self.precision)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        precision = min(self.precision, other.precision)
        low = min(self.exponent, other.exponent)
        if low >= precision:
            return PadicScalar.zero(self.p, precision)
        m = (self.unit * self.p ** (self.exponent - low)
             + other.unit * self.p ** (other.exponent - low))
        return PadicScalar._normalize(self.p, m, low, precision)

    __radd__ = __add__

    def __neg__(self):
        if self.unit == 0:
            return self
        modulus = self.p ** (self.precision - self.exponent)
        return PadicScalar(self.p, -self.unit % modulus, self.exponent,
                           self.precision)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        precision = min(self.precision, other.precision,
                        self.precision + other.exponent,
                        other.precision + self.exponent)
        if self.unit == 0 or other.unit == 0:
            return PadicScalar.zero(self.p, precision)
        return PadicScalar._normalize(
            self.p, self.unit * other.unit, self.exponent + other.exponent,
            precision)

    __rmul__ = __mul__

    def inverse(self):
        """
        Multiplicative inverse; loses 2 * valuation digits of precision.

        Raises
        ------
        PrecisionError : scalar is zero at the working precision

        """
        if self.unit == 0:
            raise PrecisionError(
                "cannot invert a value that vanishes modulo {}**{}".format(
                    self.p, self.precision))
        relative = self.precision - self.exponent
        unit = pow(self.unit, -1, self.p ** relative)
        return PadicScalar(self.p, unit, -self.exponent,
                           self.precision - 2 * self.exponent)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = PadicScalar.from_rational(1, self.p, self.precision)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


@dataclass(frozen=True)
class UnitRootExponent:
    """
    Exponent e of the root of unity exp(2 pi i e), reduced modulo 1.

    The denominator of e is a power of p.

    """
    p: int
    value: Fraction

    def __post_init__(self):
        value = Fraction(self.value) % 1
        den = value.denominator
        while den % self.p == 0:
            den //= self.p
        if den != 1:
            raise ValueError(
                "exponent {} does not have a {}-power denominator".format(
                    self.value, self.p))
        object.__setattr__(self, "value", value)

    @property
    def order(self):
        return self.value.denominator

    def __add__(self, other):
        return UnitRootExponent(self.p, self.value + other.value)

    def __neg__(self):
        return UnitRootExponent(self.p, -self.value)

    def __mul__(self, n):
        return UnitRootExponent(self.p, self.value * n)

    def is_trivial(self):
        return self.value == 0

    def to_complex(self):
        return complex(np.exp(2j * np.pi * float(self.value)))


@dataclass(frozen=True, order=True)
class NormExponent:
    """
    A norm value p**(-exponent) kept as its exponent; math.inf encodes 0.

    Ordering compares exponents, so a larger NormExponent is a smaller norm.

    """
    exponent: object
    p: int

    def is_infinite(self):
        return self.exponent == INF

    def value(self):
        if self.exponent == INF:
            return 0.0
        return float(self.p) ** (-float(self.exponent))

    def scaled(self, alpha):
        """Exponent of the norm raised to the power alpha."""
        if self.exponent == INF:
            return INF
        return Fraction(alpha) * self.exponent

    def __str__(self):
        if self.exponent == INF:
            return "inf"
        return str(self.exponent)


@dataclass(frozen=True)
class PadicVector:
    """Vector of PadicScalar sharing one prime and one precision."""
    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError("PadicVector: expected at least one component")
        p = comps[0].p
        if any(c.p != p for c in comps):
            raise PrimeMismatchError("components over different primes")
        precision = min(c.precision for c in comps)
        comps = tuple(c.truncate(precision) for c in comps)
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_rationals(cls, values, p, precision=DEFAULT_PRECISION):
        return cls(tuple(
            PadicScalar.from_rational(v, p, precision) for v in values))

    @classmethod
    def zeros(cls, p, d, precision=DEFAULT_PRECISION):
        return cls(tuple(PadicScalar.zero(p, precision) for _ in range(d)))

    @property
    def p(self):
        return self.components[0].p

    @property
    def precision(self):
        return self.components[0].precision

    @property
    def dim(self):
        return len(self.components)

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    @property
    def valuation(self):
        return min(c.valuation for c in self.components)

    def is_zero(self):
        return all(c.is_zero() for c in self.components)

    def lift(self):
        """Canonical rational representatives of the components."""
        return tuple(c.to_fraction() for c in self.components)

    def _check(self, other):
        if len(other) != len(self):
            raise ValueError(
                "dimension mismatch: {} and {}".format(len(self), len(other)))
        if other.p != self.p:
            raise PrimeMismatchError(
                "primes differ: {} and {}".format(self.p, other.p))

    def __add__(self, other):
        self._check(other)
        return PadicVector(tuple(a + b for a, b in zip(self, other)))

    def __sub__(self, other):
        self._check(other)
        return PadicVector(tuple(a - b for a, b in zip(self, other)))

    def __neg__(self):
        return PadicVector(tuple(-a for a in self))

    def scale(self, c):
        return PadicVector(tuple(a * c for a in self))

    def dot(self, other):
        self._check(other)
        total = PadicScalar.zero(self.p, self.precision)
        for a, b in zip(self, other):
            total = total + a * b
        return total

    def __str__(self):
        return "({})".format(", ".join(str(c) for c in self.components))


@dataclass(frozen=True)
class PadicMatrix:
    """Square matrix of PadicScalar sharing one prime and one precision."""
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("PadicMatrix: expected a square array")
        p = rows[0][0].p
        if any(a.p != p for r in rows for a in r):
            raise PrimeMismatchError("entries over different primes")
        precision = min(a.precision for r in rows for a in r)
        rows = tuple(tuple(a.truncate(precision) for a in r) for r in rows)
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rationals(cls, rows, p, precision=DEFAULT_PRECISION):
        return cls(tuple(
            tuple(PadicScalar.from_rational(a, p, precision) for a in r)
            for r in rows))

    @classmethod
    def identity(cls, p, d, precision=DEFAULT_PRECISION):
        return cls.from_rationals(
            [[int(i == j) for j in range(d)] for i in range(d)], p, precision)

    @property
    def p(self):
        return self.rows[0][0].p

    @property
    def precision(self):
        return self.rows[0][0].precision

    @property
    def dim(self):
        return len(self.rows)

    def __getitem__(self, index):
        i, j = index
        return self.rows[i][j]

    @property
    def valuation(self):
        """Minimum valuation over the entries."""
        return min(a.valuation for r in self.rows for a in r)

    def is_integral(self):
        return all(a.is_integral() for r in self.rows for a in r)

    def lift(self):
        """Rows of canonical rational representatives."""
        return tuple(tuple(a.to_fraction() for a in r) for r in self.rows)

    def to_integers(self, signed=True):
        """Integer rows of an integral matrix (signed lifts by default)."""
        return tuple(tuple(a.to_integer(signed=signed) for a in r)
                     for r in self.rows)

    def residues(self, level):
        """Integer rows reduced modulo p**level; requires integral entries."""
        modulus = self.p ** level
        return tuple(tuple(a.to_integer() % modulus for a in r)
                     for r in self.rows)

    def transpose(self):
        return PadicMatrix(tuple(zip(*self.rows)))

    @property
    def T(self):
        return self.transpose()

    def is_identity(self):
        d = self.dim
        return all((self.rows[i][j] - int(i == j)).is_zero()
                   for i in range(d) for j in range(d))

    def _check(self, other):
        if other.p != self.p:
            raise PrimeMismatchError(
                "primes differ: {} and {}".format(self.p, other.p))
        if other.dim != self.dim:
            raise ValueError(
                "dimension mismatch: {} and {}".format(self.dim, other.dim))

    def apply(self, x):
        self._check(x)
        return PadicVector(tuple(PadicVector(r).dot(x) for r in self.rows))

    def __matmul__(self, other):
        if isinstance(other, PadicVector):
            return self.apply(other)
        self._check(other)
        cols = tuple(zip(*other.rows))
        return PadicMatrix(tuple(
            tuple(PadicVector(r).dot(PadicVector(c)) for c in cols)
            for r in self.rows))

    def __add__(self, other):
        self._check(other)
        return PadicMatrix(tuple(
            tuple(a + b for a, b in zip(r, s))
            for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other):
        self._check(other)
        return PadicMatrix(tuple(
            tuple(a - b for a, b in zip(r, s))
            for r, s in zip(self.rows, other.rows)))

    def __neg__(self):
        return PadicMatrix(tuple(tuple(-a for a in r) for r in self.rows))

    def scale(self, c):
        return PadicMatrix(tuple(tuple(a * c for a in r) for r in self.rows))

    def _pivot(self, rows, col, start):
        candidates = range(start, len(rows))
        return min(candidates, key=lambda r: rows[r][col].valuation)

    def det(self):
        """Determinant by elimination with minimal-valuation pivots."""
        rows = [list(r) for r in self.rows]
        n = len(rows)
        result = PadicScalar.from_rational(1, self.p, self.precision)
        for col in range(n):
            k = self._pivot(rows, col, col)
            pivot = rows[k][col]
            if pivot.is_zero():
                return PadicScalar.zero(self.p, self.precision)
            if k != col:
                rows[k], rows[col] = rows[col], rows[k]
                result = -result
            for r in range(col + 1, n):
                if rows[r][col].is_zero():
                    continue
                factor = rows[r][col] / pivot
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
            result = result * pivot
        return result

    def inverse(self):
        """
        Inverse by Gauss-Jordan elimination.

        Raises
        ------
        SingularMatrixError : a pivot column vanishes at the working precision

        """
        n = self.dim
        one = PadicScalar.from_rational(1, self.p, self.precision)
        zero = PadicScalar.zero(self.p, self.precision)
        rows = [list(r) + [one if i == j else zero for j in range(n)]
                for i, r in enumerate(self.rows)]
        for col in range(n):
            k = self._pivot(rows, col, col)
            if rows[k][col].is_zero():
                raise SingularMatrixError(
                    "matrix is singular modulo {}**{}".format(
                        self.p, self.precision))
            rows[k], rows[col] = rows[col], rows[k]
            pivot_inv = rows[col][col].inverse()
            rows[col] = [a * pivot_inv for a in rows[col]]
            for r in range(n):
                if r == col or rows[r][col].is_zero():
                    continue
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
        return PadicMatrix(tuple(tuple(r[n:]) for r in rows))

    def __pow__(self, j):
        if j < 0:
            return self.inverse() ** (-j)
        result = PadicMatrix.identity(self.p, self.dim, self.precision)
        base = self
        while j:
            if j & 1:
                result = result @ base
            base = base @ base
            j >>= 1
        return result

    def __str__(self):
        return "[{}]".format("; ".join(
            ", ".join(str(a.to_fraction() if not a.is_integral()
                          else a.to_integer(signed=True)) for a in r)
            for r in self.rows))


def add(a, b):
    return a + b


def mul(a, b):
    return a * b


def neg(a):
    return -a


def inv(a):
    return a.inverse()


def valuation(x):
    """Valuation of a scalar or vector (min over components); inf for 0."""
    return x.valuation


def fractional_part(x):
    """
    Fractional part {x} = sum of the digits at negative indices.

    Returns
    -------
    fractions.Fraction
        rational in [0, 1) with p-power denominator; 0 iff x is in Z_p

    """
    if x.unit == 0 or x.exponent >= 0:
        return Fraction(0)
    q = x.p ** (-x.exponent)
    return Fraction(x.unit % q, q)


def character(x):
    """Additive character chi(x) = exp(2 pi i {x}) as a UnitRootExponent."""
    return UnitRootExponent(x.p, fractional_part(x))


def mat_apply(A, x):
    return A.apply(x)


def mat_mul(A, B):
    return A @ B


def mat_inv(A):
    return A.inverse()


def det(A):
    return A.det()


def mat_pow(A, j):
    return A ** j


def mat_transpose(A):
    return A.T


def mat_valuation(A):
    """Minimum entry valuation."""
    return A.valuation


def digits_literal(x):
    return x.to_literal()


def random_scalar(p, rng, precision=DEFAULT_PRECISION, low=-2):
    """
    Sample a scalar with valuation drawn uniformly from [low, precision).

    Parameters
    ----------
    p : int
    rng : numpy.random.Generator
    precision : int
    low : int
        smallest possible valuation

    """
    v = int(rng.integers(low, precision))
    width = precision - v
    digits = [int(rng.integers(0, p)) for _ in range(width)]
    digits[0] = int(rng.integers(1, p))
    return PadicScalar.from_digits(p, v, digits, precision)


def random_vector(p, d, rng, precision=DEFAULT_PRECISION, low=-2):
    return PadicVector(tuple(
        random_scalar(p, rng, precision, low) for _ in range(d)))
