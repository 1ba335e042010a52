"""
Locally constant test functions and the wavelet bases built from a dilation.

A LocallyConstantFunction lives on a finite grid: it is supported in
p**(-L) Z_p^d and constant on cosets of p**M Z_p^d. The cell with key
r in [0, p**(M+L))^d is the coset p**(-L) r + p**M Z_p^d. Values are exact
Cyclotomic numbers; an amplitude exponent h multiplies the whole function by
p**h, which keeps normalisations like p**(j/2) symbolic.

"""

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .constants import MAX_CELLS
from .cyclotomic import Cyclotomic
from .dilation import digit_set, is_dilation, orbit_ball
from .exceptions import GuardError
from .padic import INF, PadicVector, character, fractional_part

logger = logging.getLogger(__name__)


def _as_cyclotomic(p, value):
    if isinstance(value, Cyclotomic):
        return value
    return Cyclotomic.from_rational(p, value)


class LocallyConstantFunction:
    """
    Compactly supported, locally constant function on Q_p^d.

    Parameters
    ----------
    p : int
    dim : int
    L : int
        support level; the support lies in p**(-L) Z_p^d
    M : int
        constancy level; constant on cosets of p**M Z_p^d, M >= -L
    values : dict
        cell key (tuple of int in [0, p**(M+L))) -> Cyclotomic or rational;
        absent keys and zero values mean 0
    amplitude : fractions.Fraction, default 0
        the function is p**amplitude times the tabulated values

    """

    def __init__(self, p, dim, L, M, values, amplitude=0):
        if M + L < 0:
            raise ValueError(
                "constancy level M={} is below -L={}".format(M, -L))
        self.p = p
        self.dim = dim
        self.L = L
        self.M = M
        self.amplitude = Fraction(amplitude)
        bound = p ** (M + L)
        table = {}
        for key, value in values.items():
            key = tuple(int(c) for c in key)
            if len(key) != dim or any(not 0 <= c < bound for c in key):
                raise ValueError(
                    "cell key {} outside [0, {})^{}".format(key, bound, dim))
            value = _as_cyclotomic(p, value)
            if not value.is_zero():
                table[key] = value
        self.values = table

    @classmethod
    def zero(cls, p, dim):
        return cls(p, dim, 0, 0, {})

    @classmethod
    def from_callable(cls, p, dim, L, M, func, amplitude=0):
        """
        Tabulate ``func(key)`` over every cell of the grid (L, M).

        Raises
        ------
        GuardError : the grid has more than MAX_CELLS cells

        """
        count = p ** (dim * (M + L))
        if count > MAX_CELLS:
            raise GuardError("MAX_CELLS", "grid with {} cells".format(count))
        keys = itertools.product(range(p ** (M + L)), repeat=dim)
        return cls(p, dim, L, M, {r: func(r) for r in keys}, amplitude)

    @property
    def cell_measure(self):
        return Fraction(self.p) ** (-self.dim * self.M)

    def __len__(self):
        return len(self.values)

    def items(self):
        return self.values.items()

    def is_zero(self):
        return not self.values

    def point(self, key):
        """Representative p**(-L) key of a cell, as rationals."""
        scale = Fraction(self.p) ** (-self.L)
        return tuple(c * scale for c in key)

    def lookup(self, x):
        """Value (without amplitude) at a rational vector x."""
        modulus = self.p ** (self.M + self.L)
        scale = Fraction(self.p) ** self.L
        key = []
        for c in x:
            y = Fraction(c) * scale
            if y.denominator % self.p == 0:
                return Cyclotomic.zero(self.p)
            key.append(_residue_int(y, modulus))
        return self.values.get(tuple(key), Cyclotomic.zero(self.p))

    def evaluate(self, x):
        """
        Value at a PadicVector, without the amplitude factor.

        Returns
        -------
        Cyclotomic

        """
        if x.valuation < -self.L:
            return Cyclotomic.zero(self.p)
        modulus = self.p ** (self.M + self.L)
        scale = Fraction(self.p) ** self.L
        key = tuple((c * scale).to_integer() % modulus for c in x)
        return self.values.get(key, Cyclotomic.zero(self.p))

    def regrid(self, L, M):
        """The same function tabulated on a finer grid (L, M)."""
        if L < self.L or M < self.M:
            raise ValueError("regrid: ({}, {}) is coarser than ({}, {})".format(
                L, M, self.L, self.M))
        p, d = self.p, self.dim
        shift = p ** (L - self.L)
        step = p ** (L + self.M)
        lifts = list(itertools.product(range(p ** (M - self.M)), repeat=d))
        values = {}
        for r, v in self.values.items():
            base = tuple(c * shift for c in r)
            for z in lifts:
                values[tuple(b + step * t for b, t in zip(base, z))] = v
        return LocallyConstantFunction(p, d, L, M, values, self.amplitude)

    def _absorbed(self):
        """Integer part of the amplitude moved into the values."""
        whole = math.floor(self.amplitude)
        if whole == 0:
            return self
        factor = Fraction(self.p) ** whole
        return LocallyConstantFunction(
            self.p, self.dim, self.L, self.M,
            {r: v * factor for r, v in self.values.items()},
            self.amplitude - whole)

    def normalized(self):
        """
        Canonical form: smallest support and constancy levels, zero cells
        dropped, amplitude reduced to [0, 1).

        """
        f = self._absorbed()
        p, d = f.p, f.dim
        if not f.values:
            return LocallyConstantFunction(p, d, 0, 0, {})
        values, L, M = dict(f.values), f.L, f.M
        siblings = p ** d
        changed = True
        while changed:
            changed = False
            while M + L > 0:
                parent = p ** (M - 1 + L)
                groups = {}
                for r, v in values.items():
                    groups.setdefault(tuple(c % parent for c in r), []).append(v)
                if any(len(vs) != siblings or any(v != vs[0] for v in vs)
                       for vs in groups.values()):
                    break
                values = {q: vs[0] for q, vs in groups.items()}
                M -= 1
                changed = True
            while M + L > 0 and all(c % p == 0 for r in values for c in r):
                values = {tuple(c // p for c in r): v for r, v in values.items()}
                L -= 1
                changed = True
        return LocallyConstantFunction(p, d, L, M, values, f.amplitude)

    def __eq__(self, other):
        if not isinstance(other, LocallyConstantFunction):
            return NotImplemented
        if (self.p, self.dim) != (other.p, other.dim):
            return False
        a, b = self.normalized(), other.normalized()
        return ((a.L, a.M, a.amplitude, a.values)
                == (b.L, b.M, b.amplitude, b.values))

    __hash__ = None

    def _common(self, other):
        if (self.p, self.dim) != (other.p, other.dim):
            raise ValueError("functions over different (p, d)")
        diff = self.amplitude - other.amplitude
        if diff.denominator != 1:
            raise ValueError(
                "amplitudes {} and {} differ by a non-integer".format(
                    self.amplitude, other.amplitude))
        L, M = max(self.L, other.L), max(self.M, other.M)
        a, b = self.regrid(L, M), other.regrid(L, M)
        h = min(self.amplitude, other.amplitude)
        if self.amplitude > h:
            a = a.scale(Fraction(self.p) ** int(diff))
        elif other.amplitude > h:
            b = b.scale(Fraction(self.p) ** int(-diff))
        return a, b, L, M, h

    def __add__(self, other):
        a, b, L, M, h = self._common(other)
        values = dict(a.values)
        for r, v in b.values.items():
            values[r] = values[r] + v if r in values else v
        return LocallyConstantFunction(self.p, self.dim, L, M, values, h)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        """Multiply the values by a Cyclotomic or rational c."""
        return LocallyConstantFunction(
            self.p, self.dim, self.L, self.M,
            {r: v * c for r, v in self.values.items()}, self.amplitude)

    def conjugate(self):
        return LocallyConstantFunction(
            self.p, self.dim, self.L, self.M,
            {r: v.conjugate() for r, v in self.values.items()},
            self.amplitude)

    def support_measure(self):
        return len(self.values) * self.cell_measure

    def to_array(self, L=None, M=None):
        """
        Complex values (amplitude included) on the grid (L, M), indexed by
        cell key.

        Returns
        -------
        numpy.ndarray
            shape (p**(M+L),) * d, complex

        """
        L = self.L if L is None else L
        M = self.M if M is None else M
        count = self.p ** (self.dim * (M + L))
        if count > MAX_CELLS:
            raise GuardError("MAX_CELLS", "grid with {} cells".format(count))
        f = self.regrid(L, M)
        out = np.zeros((self.p ** (M + L),) * self.dim, dtype=complex)
        scale = float(self.p) ** float(self.amplitude)
        for r, v in f.values.items():
            out[r] = v.to_complex() * scale
        return out

    def lines(self):
        """Cell table as text, one cell per line, sorted by key."""
        out = ["p={} d={} L={} M={} amplitude={}".format(
            self.p, self.dim, self.L, self.M, self.amplitude)]
        for r in sorted(self.values):
            out.append("  {} -> {}".format(
                " ".join(str(c) for c in r), self.values[r]))
        return out

    def __repr__(self):
        return "LocallyConstantFunction(p={}, d={}, L={}, M={}, cells={})".format(
            self.p, self.dim, self.L, self.M, len(self.values))


def _residue_int(y, modulus):
    """Integer residue of a p-integral rational modulo ``modulus``."""
    return y.numerator * pow(y.denominator, -1, modulus) % modulus


def _grouped_sum(pairs, p):
    """Sum of a * conj(b) over (a, b) pairs, grouped by distinct value pair."""
    total = Cyclotomic.zero(p)
    for (a, b), count in Counter(pairs).items():
        total = total + a * b.conjugate() * count
    return total


def _absorb(value, exponent, p):
    whole = math.floor(exponent)
    if value.is_zero():
        return value, Fraction(0)
    if whole:
        value = value * Fraction(p) ** whole
    return value, exponent - whole


def inner_product(f, g):
    """
    Exact L2 inner product of two locally constant functions.

    Returns
    -------
    value : Cyclotomic
    exponent : fractions.Fraction
        in [0, 1); the inner product is value * p**exponent

    """
    if (f.p, f.dim) != (g.p, g.dim):
        raise ValueError("functions over different (p, d)")
    if not f.values or not g.values:
        return Cyclotomic.zero(f.p), Fraction(0)
    swapped = f.M < g.M
    if swapped:
        f, g = g, f
    # every cell of f lies inside a single cell of g
    pairs = []
    for r, v in f.values.items():
        w = g.lookup(f.point(r))
        if not w.is_zero():
            pairs.append((v, w))
    if not pairs:
        return Cyclotomic.zero(f.p), Fraction(0)
    value = _grouped_sum(pairs, f.p) * f.cell_measure
    if swapped:
        value = value.conjugate()
    return _absorb(value, f.amplitude + g.amplitude, f.p)


def mean(f):
    """
    Exact integral of f.

    Returns
    -------
    value : Cyclotomic
    exponent : fractions.Fraction
        the integral is value * p**exponent

    """
    total = Cyclotomic.zero(f.p)
    for v, count in Counter(f.values.values()).items():
        total = total + v * count
    return _absorb(total * f.cell_measure, f.amplitude, f.p)


def squared_norm(f):
    """||f||^2 as an exact rational."""
    value, exponent = inner_product(f, f)
    return value.rational() * Fraction(f.p) ** exponent


def riemann_inner_product(f, g, extra=2):
    """
    Float Riemann sum of f * conj(g) at constancy level max(M) + extra.

    Returns
    -------
    complex

    """
    L, M = max(f.L, g.L), max(f.M, g.M) + extra
    a, b = f.to_array(L, M), g.to_array(L, M)
    return complex(np.sum(a * np.conj(b))) * float(f.p) ** (-f.dim * M)


def indicator_ball(ball):
    """
    Indicator function of a deformed ball.

    Parameters
    ----------
    ball : padicwave.metric.Ball

    Returns
    -------
    LocallyConstantFunction

    """
    metric = ball.metric
    p, d = metric.p, metric.dim
    levels = ball.levels
    n = PadicVector.from_rationals(ball.center, p)
    if metric.U is not None:
        n = metric.U_inverse.apply(n)
    vn = n.valuation
    L = -min(min(levels), vn if vn != INF else 0)
    M = max(max(levels), -L)
    modulus = p ** (M + L)
    shifted = tuple(int(c * Fraction(p) ** L) % modulus for c in
                    (s.to_fraction() for s in n))
    if metric.U is not None:
        rows = metric.U_inverse.residues(max(M + L, 1))
    else:
        rows = None
    axes = [[p ** (lev + L) * t for t in range(p ** (M - lev))]
            for lev in levels]
    values = {}
    for z in itertools.product(*axes):
        if rows is not None:
            z = tuple(sum(a * c for a, c in zip(row, z)) for row in rows)
        key = tuple((a + b) % modulus for a, b in zip(shifted, z))
        values[key] = 1
    return LocallyConstantFunction(p, d, L, M, values)


@dataclass(frozen=True)
class WaveletIndex:
    """
    Index (k, j, n) of Psi_{k;jn}.

    Parameters
    ----------
    k : tuple of int
        nonzero representative of Z_p^d / A* Z_p^d
    j : int
        scale
    n : tuple of fractions.Fraction
        translation in [0, 1)^d with p-power denominators

    """
    k: tuple
    j: int
    n: tuple

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(int(c) for c in self.k))
        object.__setattr__(self, "n", tuple(Fraction(c) % 1 for c in self.n))

    def __str__(self):
        return "k=({}) j={} n=({})".format(
            ",".join(str(c) for c in self.k), self.j,
            ",".join(str(c) for c in self.n))


def enumerate_k(A):
    """
    Nonzero representatives of Z_p^d / A* Z_p^d, lexicographic.

    Returns
    -------
    list of tuple of int
        p - 1 vectors when |det A|_p = 1/p

    """
    return digit_set(A.transpose())[1:]


def _check_k(A, k):
    kv = PadicVector.from_rationals(k, A.p, A.precision)
    if A.transpose().inverse().apply(kv).valuation >= 0:
        raise ValueError("k={} represents zero in Z_p^d / A* Z_p^d".format(k))
    return kv


def wavelet(A, idx):
    """
    Psi_{k;jn}(x) = p**(j/2) Psi_k(A**(-j) x - n).

    Supported on A**j (n + Z_p^d) and constant on cosets of A**(j+1) Z_p^d,
    with value chi(k . A**(-1) y) at x = A**j (n + y).

    Parameters
    ----------
    A : PadicMatrix
        dilation with |det A|_p = 1/p
    idx : WaveletIndex

    Returns
    -------
    LocallyConstantFunction

    Raises
    ------
    ValueError : k represents zero

    """
    p, d = A.p, A.dim
    kv = _check_k(A, idx.k)
    j = idx.j
    Aj = A ** j
    Ainv = A.inverse()
    n = PadicVector.from_rationals(idx.n, p, A.precision)
    vn = n.valuation
    vn = 0 if vn == INF else min(vn, 0)
    L = -(Aj.valuation + vn)
    M = max(-(A ** (-(j + 1))).valuation, -L)
    K = max(M - Aj.valuation, 0)
    if p ** (d * K) > MAX_CELLS:
        raise GuardError("MAX_CELLS", "wavelet {} needs {} samples".format(
            idx, p ** (d * K)))
    modulus = p ** (M + L)
    scale = Fraction(p) ** L
    roots = {}
    values = {}
    for y in itertools.product(range(p ** K), repeat=d):
        yv = PadicVector.from_rationals(y, p, A.precision)
        x = Aj.apply(n + yv)
        key = tuple((c * scale).to_integer() % modulus for c in x)
        e = character(Ainv.apply(yv).dot(kv))
        if e not in roots:
            roots[e] = Cyclotomic.from_exponent(e)
        values[key] = roots[e]
    amplitude = Fraction(j * A.det().valuation, 2)
    return LocallyConstantFunction(p, d, L, M, values, amplitude)


def mother_wavelet(A, k):
    """Psi_k(x) = chi(k . A**(-1) x) Omega(|x|_p)."""
    return wavelet(A, WaveletIndex(k, 0, (0,) * A.dim))


@dataclass(frozen=True)
class ExpansionTerm:
    """One term coefficient * indicator(A Z_p^d + digit)."""
    coefficient: object
    digit: tuple
    ball: object = None


def expand_mother(A, k, metric=None):
    """
    Psi_k as a combination of indicators of the p maximal subballs
    A Z_p^d + m_l of Z_p^d, with coefficients chi(k . A**(-1) m_l).

    Parameters
    ----------
    A : PadicMatrix
    k : tuple of int
    metric : DeformedMetric or None
        when given, each term carries the subball as a Ball of this metric

    Returns
    -------
    list of ExpansionTerm
        coefficient is a UnitRootExponent

    """
    kv = _check_k(A, k)
    Ainv = A.inverse()
    terms = []
    for m in digit_set(A):
        mv = PadicVector.from_rationals(m, A.p, A.precision)
        e = character(Ainv.apply(mv).dot(kv))
        ball = None
        if metric is not None:
            shift = tuple(fractional_part(c) for c in Ainv.apply(mv))
            ball = orbit_ball(A, metric, 1, shift)
        terms.append(ExpansionTerm(e, m, ball))
    return terms


def expansion_function(A, terms):
    """Sum of coefficient * indicator(A Z_p^d + m) over expansion terms."""
    p, d = A.p, A.dim
    f = LocallyConstantFunction.zero(p, d)
    for term in terms:
        coset = _digit_coset(A, term.digit)
        f = f + coset.scale(Cyclotomic.from_exponent(term.coefficient))
    return f


def _digit_coset(A, m):
    """Indicator of A Z_p^d + m, tabulated on the grid (0, 1)."""
    p, d = A.p, A.dim
    Ainv = A.inverse()
    mv = PadicVector.from_rationals(m, p, A.precision)

    def func(r):
        rv = PadicVector.from_rationals(r, p, A.precision)
        return int(Ainv.apply(rv - mv).valuation >= 0)

    return LocallyConstantFunction.from_callable(p, d, 0, 1, func)


def translations(A, depth):
    """
    Representatives n = sum_(i=1..depth) A**(-i) m_i of A**(-depth) Z_p^d
    modulo Z_p^d, with digits m_i from digit_set(A).

    Returns
    -------
    list of tuple of fractions.Fraction
        p**depth translations, starting with 0

    """
    p, d = A.p, A.dim
    digits = digit_set(A)
    powers = [A ** (-i) for i in range(1, depth + 1)]
    out = []
    for choice in itertools.product(digits, repeat=depth):
        total = PadicVector.zeros(p, d, A.precision)
        for P, m in zip(powers, choice):
            total = total + P.apply(PadicVector.from_rationals(m, p, A.precision))
        out.append(tuple(fractional_part(c) for c in total))
    return out


def wavelet_indices(A, scales, depth):
    """All (k, j, n) with |j| <= scales and n from translations(A, depth)."""
    ks = enumerate_k(A)
    ns = translations(A, depth)
    return [WaveletIndex(k, j, n)
            for k in ks for j in range(-scales, scales + 1) for n in ns]


@dataclass
class OrthonormalityReport:
    """
    Outcome of orthonormality_suite.

    Attributes
    ----------
    functions : int
    pairs : int
        ordered index pairs (a, b) certified, n**2 for n functions; each
        off-diagonal inner product is computed once and covers (b, a) by
        conjugate symmetry
    failures : list of (WaveletIndex, WaveletIndex, str)
    dilation : bool
        verdict of is_dilation for the supplied metric

    """
    functions: int
    pairs: int
    failures: list
    dilation: bool

    @property
    def passed(self):
        return self.dilation and not self.failures

    def lines(self):
        out = ["functions={} pairs={} dilation={} failures={}".format(
            self.functions, self.pairs, "pass" if self.dilation else "FAIL",
            len(self.failures))]
        out.extend("  <{}, {}> = {}".format(a, b, v)
                   for a, b, v in self.failures)
        return out


def orthonormality_suite(A, metric, scales, depth):
    """
    Check <Psi_a, Psi_b> = delta_ab exactly over all index pairs with
    |j| <= scales and translation depth ``depth``.

    Returns
    -------
    OrthonormalityReport

    """
    dilation = is_dilation(A, metric).verdict
    indices = wavelet_indices(A, scales, depth)
    functions = [wavelet(A, idx) for idx in indices]
    logger.info("orthonormality suite: %d functions", len(functions))
    one = Cyclotomic.one(A.p)
    failures = []
    pairs = 0
    for a in range(len(indices)):
        for b in range(a, len(indices)):
            value, exponent = inner_product(functions[a], functions[b])
            pairs += 1 if a == b else 2
            if a == b:
                ok = value == one and exponent == 0
            else:
                ok = value.is_zero()
            if not ok:
                failures.append((indices[a], indices[b], "{} * p^{}".format(
                    value, exponent)))
    return OrthonormalityReport(len(functions), pairs, failures, dilation)


def parseval_check(A, J):
    """
    Partial Parseval sum over the unit-ball indicator,
    sum_(k; -J <= j < 0) |<Omega, Psi_{k;j0}>|**2, which equals 1 - p**(-J).

    Returns
    -------
    fractions.Fraction

    """
    if J < 1:
        raise ValueError("parseval_check: J must be >= 1, got {}".format(J))
    p, d = A.p, A.dim
    omega = LocallyConstantFunction(p, d, 0, 0, {(0,) * d: 1})
    zero = (0,) * d
    total = Fraction(0)
    for k in enumerate_k(A):
        for j in range(-J, 0):
            value, exponent = inner_product(
                omega, wavelet(A, WaveletIndex(k, j, zero)))
            total += ((value * value.conjugate()).rational()
                      * Fraction(p) ** (2 * exponent))
    return total


def theta():
    """+1 on S Z_2^2 = Z_2 x 2Z_2 and -1 on Z_2 x (1 + 2Z_2)."""
    return LocallyConstantFunction.from_callable(
        2, 2, 0, 1, lambda r: 1 if r[1] % 2 == 0 else -1)


def psi():
    """+1 on Q Z_2^2 = {x_1 + x_2 even} and -1 on Q Z_2^2 + (0, 1)."""
    return LocallyConstantFunction.from_callable(
        2, 2, 0, 1, lambda r: 1 if (r[0] + r[1]) % 2 == 0 else -1)


def random_function(p, dim, L, M, rng, level=1, density=0.5):
    """
    Random test function on the grid (L, M) with values in
    Q(zeta_(p**level)) and small integer coefficients.

    """
    def func(r):
        if rng.random() > density:
            return 0
        e = int(rng.integers(0, p ** level))
        c = int(rng.integers(-2, 3))
        return Cyclotomic.root(p, level, e) * c

    return LocallyConstantFunction.from_callable(p, dim, L, M, func)
