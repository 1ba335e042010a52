"""
Digit expansions with respect to an integer dilation and the map rho to R^d.

With digits n_0 = 0, ..., n_(p-1) representing Z_p^d / A Z_p^d, every x in
Q_p^d is uniquely x = sum_(i >= gamma) A**i x_i, and

    rho(x) = sum_(i >= gamma) A**(-i-1) x_i.

For d = 1, A = [p] and digits {0, ..., p-1} this is the classical Monna map.
rho is measure conserving when the real tile R = rho(Z_p^d) has Lebesgue
measure one and its integer translates overlap in measure zero; both are
estimated here by box counting on truncated series.

"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import Matrix

from .constants import MAX_SERIES_POINTS
from .dilation import digit_set
from .exceptions import DigitError, GuardError, PrecisionError
from .padic import PadicMatrix, PadicVector, int_valuation
from .wavelet import WaveletIndex, wavelet

logger = logging.getLogger(__name__)

# products at or above this magnitude are carried as Python ints
INT64_LIMIT = 2 ** 62


def _integer_rows(A):
    if isinstance(A, PadicMatrix):
        if not A.is_integral():
            raise DigitError("matrix {} has entries outside Z".format(A))
        return A.to_integers(signed=True)
    rows = []
    for r in A:
        row = []
        for a in r:
            a = Fraction(a)
            if a.denominator != 1:
                raise DigitError(
                    "matrix entry {} is not an integer".format(a))
            row.append(int(a))
        rows.append(tuple(row))
    return tuple(rows)


def _det(rows):
    return int(Matrix(rows).det())


def _adjugate(rows):
    return tuple(tuple(int(a) for a in r)
                 for r in Matrix(rows).adjugate().tolist())


def _apply(rows, x):
    return tuple(sum(a * b for a, b in zip(r, x)) for r in rows)


@lru_cache(maxsize=None)
def _inverse_power(rows, i):
    """A**(-i) as rational rows (i may be negative)."""
    M = Matrix(rows)
    P = M.inv() ** i if i >= 0 else M ** (-i)
    return tuple(tuple(Fraction(int(a.p), int(a.q)) for a in r)
                 for r in P.tolist())


@dataclass(frozen=True)
class DigitSystem:
    """
    Integer dilation with a digit set.

    Parameters
    ----------
    p : int
    matrix : tuple of tuple of int
        A, with v_p(det A) = 1
    digits : tuple of tuple of int
        p pairwise inequivalent representatives of Z_p^d / A Z_p^d,
        starting with 0

    Raises
    ------
    DigitError : any of the invariants fails

    """
    p: int
    matrix: tuple
    digits: tuple

    def __post_init__(self):
        rows = _integer_rows(self.matrix)
        object.__setattr__(self, "matrix", rows)
        digits = tuple(tuple(int(c) for c in x) for x in self.digits)
        object.__setattr__(self, "digits", digits)
        p, d = self.p, len(rows)
        det = _det(rows)
        if det == 0 or int_valuation(det, p) != 1:
            raise DigitError(
                "det A = {} must have {}-adic valuation 1".format(det, p))
        if len(digits) != p:
            raise DigitError(
                "expected {} digits, got {}".format(p, len(digits)))
        if any(len(x) != d for x in digits):
            raise DigitError("digits must have dimension {}".format(d))
        if any(digits[0]):
            raise DigitError("the first digit must be 0, got {}".format(
                digits[0]))
        for a, b in itertools.combinations(digits, 2):
            if self.equivalent(a, b):
                raise DigitError(
                    "digits {} and {} are congruent modulo A Z_{}^{}".format(
                        a, b, p, d))

    @classmethod
    def standard(cls, A, p=None):
        """Digits chosen lexicographically (see dilation.digit_set)."""
        if not isinstance(A, PadicMatrix):
            A = PadicMatrix.from_rationals(_integer_rows(A), p)
        return cls(A.p, A.to_integers(signed=True), tuple(digit_set(A)))

    @classmethod
    def alternative(cls, p, step):
        """d = 1, A = [p], digits {0, step, 2 step, ..., (p-1) step}."""
        return cls(p, ((p,),), tuple((i * step,) for i in range(p)))

    @property
    def dim(self):
        return len(self.matrix)

    @property
    def det(self):
        return _det(self.matrix)

    def equivalent(self, a, b):
        """a = b modulo A Z_p^d."""
        adj = _adjugate(self.matrix)
        diff = tuple(x - y for x, y in zip(a, b))
        return all(c % self.p == 0 for c in _apply(adj, diff))

    def digit_of(self, y):
        """The digit congruent to the integer vector y modulo A Z_p^d."""
        for n in self.digits:
            if self.equivalent(y, n):
                return n
        raise DigitError("no digit matches {} modulo A".format(y))

    def padic_matrix(self, precision=None):
        if precision is None:
            return PadicMatrix.from_rationals(self.matrix, self.p)
        return PadicMatrix.from_rationals(self.matrix, self.p, precision)

    def __str__(self):
        return "A={} digits={}".format(
            list(list(r) for r in self.matrix),
            [list(x) for x in self.digits])


@dataclass(frozen=True)
class DigitExpansion:
    """Digits x_gamma, ..., x_depth of sum A**i x_i."""
    gamma: int
    digits: tuple

    @property
    def depth(self):
        return self.gamma + len(self.digits) - 1

    def items(self):
        return zip(itertools.count(self.gamma), self.digits)


def digit_expansion(x, sys, depth):
    """
    Expand x = sum_(i=gamma..depth) A**i x_i modulo A**(depth+1) Z_p^d.

    Follows the residue recursion: x_gamma is the digit of A**(-gamma) x
    modulo A Z_p^d, the remainder is divided by A, and so on.

    Parameters
    ----------
    x : PadicVector
    sys : DigitSystem
    depth : int

    Returns
    -------
    DigitExpansion

    Raises
    ------
    DigitError : a step has no matching digit
    PrecisionError : x does not carry enough digits for ``depth``

    """
    p = sys.p
    # A is exact; carried at x.precision - v(x) so A**g x keeps x.precision
    lost = 0 if x.is_zero() or x.valuation >= 0 else -x.valuation
    A = sys.padic_matrix(x.precision + lost)
    g = 0
    y = x
    while y.valuation < 0:
        y = A.apply(y)
        g += 1
        if g > sys.dim * (x.precision + 1):
            raise PrecisionError("digit_expansion: A**g x never integral")
    precision = y.precision
    steps = depth + g + 1
    if steps > precision:
        raise PrecisionError(
            "digit_expansion: {} digits requested from precision {}".format(
                steps, precision))
    modulus = p ** precision
    z = [c.to_integer() % modulus for c in y]
    adj = _adjugate(sys.matrix)
    det = sys.det
    unit = det // p
    digits = []
    for _ in range(steps):
        n = sys.digit_of(z)
        digits.append(n)
        t = _apply(adj, [a - b for a, b in zip(z, n)])
        if any(c % p for c in t):
            raise DigitError("remainder of {} is not divisible by A".format(z))
        modulus //= p
        inverse = pow(unit, -1, modulus) if modulus > 1 else 0
        z = [(c // p) * inverse % modulus for c in t]
    return DigitExpansion(-g, tuple(digits))


def resum(expansion, sys, precision=None):
    """sum A**i x_i as a PadicVector."""
    A = sys.padic_matrix(precision)
    total = PadicVector.zeros(sys.p, sys.dim, A.precision)
    for i, n in expansion.items():
        v = PadicVector.from_rationals(n, sys.p, A.precision)
        total = total + (A ** i).apply(v)
    return total


def rho(x, sys, depth):
    """
    rho(x) = sum_(i=gamma..depth) A**(-i-1) x_i as exact rationals.

    Parameters
    ----------
    x : PadicVector
    sys : DigitSystem
    depth : int

    Returns
    -------
    tuple of fractions.Fraction

    """
    return rho_of_expansion(digit_expansion(x, sys, depth), sys)


def rho_of_expansion(expansion, sys):
    total = [Fraction(0)] * sys.dim
    for i, n in expansion.items():
        if not any(n):
            continue
        P = _inverse_power(sys.matrix, i + 1)
        total = [t + c for t, c in zip(total, _apply(P, n))]
    return tuple(total)


def monna_1d(x, sys=None):
    """
    eta(x) = sum x_i p**(-i-1) for a scalar x.

    Parameters
    ----------
    x : PadicScalar
    sys : DigitSystem or None
        one-dimensional digit system; None means A = [p] with digits
        {0, ..., p-1}, i.e. the base-p digits of x

    Returns
    -------
    fractions.Fraction

    """
    if sys is None:
        p = x.p
        if x.is_zero():
            return Fraction(0)
        return sum((Fraction(d, 1) * Fraction(p) ** (-i - 1)
                    for i, d in enumerate(x.digits, start=x.exponent)),
                   Fraction(0))
    depth = x.precision - 1
    if not x.is_zero() and x.valuation < 0:
        depth += x.valuation
    return rho(PadicVector((x,)), sys, depth)[0]


def rho_translates(sys, depth):
    """
    rho(n) for n = sum_(i=1..depth) A**(-i) m_i; these are the integer
    vectors sum A**(i-1) m_i.

    """
    out = []
    for choice in itertools.product(sys.digits, repeat=depth):
        total = [0] * sys.dim
        for i, m in enumerate(choice, start=1):
            P = _inverse_power(sys.matrix, 1 - i)
            total = [t + int(c) for t, c in zip(total, _apply(P, m))]
        out.append(tuple(total))
    return out


@dataclass
class RealPointSet:
    """
    Truncated series sum_(i<T) A**(-i-1) x_i as exact rational vectors.

    Attributes
    ----------
    numerators : numpy.ndarray
        shape (p**T, d), int64 or object (Python ints) when int64 would
        overflow
    denominator : int
        common positive denominator
    depth : int
        T
    p : int

    Notes
    -----
    Row i comes from the digit string whose base-p index is i, first digit
    most significant.

    """
    numerators: np.ndarray
    denominator: int
    depth: int
    p: int
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.numerators)

    @property
    def dim(self):
        return self.numerators.shape[1]

    def point(self, i):
        return tuple(Fraction(int(c), self.denominator)
                     for c in self.numerators[i])

    def provenance(self, i):
        """Digit indices x_0, ..., x_(T-1) of row i."""
        out = []
        for _ in range(self.depth):
            i, r = divmod(i, self.p)
            out.append(r)
        return tuple(reversed(out))

    def as_float(self):
        return (self.numerators / float(self.denominator)).astype(np.float64)


def _magnitude(array):
    """max |entry| as a Python int."""
    return int(np.max(np.abs(array))) if array.size else 0


def _exact_dtype(bound):
    return np.int64 if bound < INT64_LIMIT else object


def sample_R(sys, T):
    """
    All p**T truncations of R = {sum_(i>=0) A**(-i-1) x_i}.

    Computed by Horner's rule z <- A z + x_i over integer vectors, then
    point = A**(-T) z with a common denominator |det A|**T. Numerators are
    int64 unless their bound reaches INT64_LIMIT, in which case they are
    kept as Python ints.

    Raises
    ------
    GuardError : p**T exceeds MAX_SERIES_POINTS

    """
    p, d = sys.p, sys.dim
    if T < 1:
        raise ValueError("sample_R: T must be >= 1, got {}".format(T))
    if p ** T > MAX_SERIES_POINTS:
        raise GuardError("MAX_SERIES_POINTS",
                         "{}**{} series points".format(p, T))
    power = Matrix(sys.matrix) ** T
    det = int(power.det())
    adj_rows = [[int(a) for a in r] for r in power.adjugate().tolist()]
    if det < 0:
        det, adj_rows = -det, [[-a for a in r] for r in adj_rows]
    row_sum = max(sum(abs(a) for a in r) for r in sys.matrix)
    largest = max(abs(c) for x in sys.digits for c in x)
    bound = 0
    for _ in range(T):
        bound = row_sum * bound + largest
    bound *= max(sum(abs(a) for a in r) for r in adj_rows)
    dtype = _exact_dtype(bound)
    A = np.array(sys.matrix, dtype=dtype)
    digits = np.array(sys.digits, dtype=dtype)
    z = np.zeros((1, d), dtype=dtype)
    for _ in range(T):
        z = (z @ A.T)[:, None, :] + digits[None, :, :]
        z = z.reshape(-1, d)
    numerators = z @ np.array(adj_rows, dtype=dtype).T
    logger.debug("sample_R: %d points, denominator %d, %s numerators",
                 len(z), det, np.dtype(dtype).name)
    return RealPointSet(numerators, det, T, p,
                        {"matrix": sys.matrix, "digits": sys.digits})


def occupied_cells(points, m, base=None):
    """
    Occupied cell indices floor(x * base**m), one row per distinct cell.

    The products x * base**m are formed with Python ints whenever they could
    leave the int64 range; the cell indices themselves are int64.

    """
    base = points.p if base is None else base
    scale = base ** m
    numerators = points.numerators
    if (_magnitude(numerators) * scale >= INT64_LIMIT
            or points.denominator >= INT64_LIMIT):
        numerators = numerators.astype(object)
    cells = (numerators * scale) // points.denominator
    return np.unique(cells.astype(np.int64), axis=0)


def _encode(cells, lo, span):
    key = np.zeros(len(cells), dtype=np.int64)
    for c in range(cells.shape[1]):
        key = key * span + (cells[:, c] - lo)
    return key


@dataclass(frozen=True)
class MeasureEstimate:
    """Outer and inner box-count estimates at grid exponent m."""
    m: int
    outer: Fraction
    inner: Fraction

    def brackets(self, value):
        return self.inner <= value <= self.outer


def _inverse_norm(points):
    """||A**(-T)||_inf from the sampling denominator data."""
    power = Matrix(points.meta["matrix"]) ** points.depth
    inv = power.inv()
    return max(sum(abs(Fraction(int(a.p), int(a.q))) for a in r)
               for r in inv.tolist())


def estimate_measure(points, m, base=None):
    """
    Box-count estimate of the Lebesgue measure of R.

    The outer estimate counts occupied cells of side base**(-m). The inner
    estimate counts cells all of whose corners lie within delta of a sample,
    delta = ||A**(-T)||_inf * rad(R) bounding the distance from any point of
    R to its truncation.

    Parameters
    ----------
    points : RealPointSet
    m : int
    base : int or None
        defaults to p

    Returns
    -------
    MeasureEstimate

    """
    base = points.p if base is None else base
    d = points.dim
    area = Fraction(1, base ** (d * m))
    occupied = occupied_cells(points, m, base)
    outer = len(occupied) * area
    inner = Fraction(0)
    contraction = _inverse_norm(points)
    if contraction < 1:
        pts = points.as_float()
        radius = float(np.max(np.abs(pts))) / (1 - float(contraction))
        delta = float(contraction) * radius
        inner = _inner_count(pts, delta, base ** m) * area
    else:
        logger.info("estimate_measure: ||A^-T|| >= 1, inner estimate skipped")
    logger.debug("estimate_measure(m=%d): outer=%s inner=%s",
                 m, outer, inner)
    return MeasureEstimate(m, outer, inner)


def _inner_count(pts, delta, scale):
    d = pts.shape[1]
    width = int(np.floor(2 * delta * scale)) + 1
    start = np.ceil((pts - delta) * scale).astype(np.int64)
    found = []
    for offset in itertools.product(range(width + 1), repeat=d):
        cand = start + np.array(offset, dtype=np.int64)
        near = np.all(np.abs(cand / scale - pts) <= delta, axis=1)
        found.append(cand[near])
    vertices = np.unique(np.concatenate(found), axis=0)
    if not len(vertices):
        return 0
    lo = vertices.min() - 1
    span = vertices.max() - lo + 2
    keys = _encode(vertices, lo, span)
    inside = np.ones(len(vertices), dtype=bool)
    for corner in itertools.product((0, 1), repeat=d):
        if not any(corner):
            continue
        shifted = _encode(vertices + np.array(corner, dtype=np.int64),
                          lo, span)
        inside &= np.isin(shifted, keys)
    return int(np.count_nonzero(inside))


def overlap_measure(sys, k, T, m, points=None, base=None):
    """
    Estimated measure of R intersected with R + k: occupied cells shared by
    R and its translate by the integer vector k.

    Returns
    -------
    fractions.Fraction

    """
    if not any(k):
        raise ValueError("overlap_measure: k must be nonzero")
    if points is None:
        points = sample_R(sys, T)
    base = sys.p if base is None else base
    scale = base ** m
    cells = occupied_cells(points, m, base)
    shifted = cells + scale * np.array(k, dtype=np.int64)
    lo = min(cells.min(), shifted.min()) - 1
    span = max(cells.max(), shifted.max()) - lo + 2
    shared = np.intersect1d(_encode(cells, lo, span), _encode(shifted, lo, span))
    return len(shared) * Fraction(1, base ** (points.dim * m))


def det_compatibility(A, p=None):
    """
    True iff |det A|_p = |det A|**(-1), i.e. |det A| is a power of p.

    Parameters
    ----------
    A : PadicMatrix or integer rows
    p : int
        required for integer rows

    """
    if isinstance(A, PadicMatrix):
        p = A.p
    rows = _integer_rows(A)
    det = abs(_det(rows))
    if det == 0:
        return False
    return det == p ** int_valuation(det, p)


def real_image_1d(f, sys):
    """
    Interval description of rho applied to a one-dimensional function.

    A cell c + p**M Z_p maps onto [rho(c), rho(c) + s p**(-M)) when the
    digits are {0, s, ..., (p-1) s}; adjacent intervals with equal values
    are merged.

    Parameters
    ----------
    f : LocallyConstantFunction
        d = 1, rational values
    sys : DigitSystem
        A = [p] with digits in arithmetic progression

    Returns
    -------
    list of (Fraction, Fraction, Fraction)
        (start, end, value), sorted by start

    """
    p = sys.p
    if f.dim != 1 or sys.matrix != ((p,),):
        raise DigitError("real_image_1d needs d = 1 and A = [p]")
    step = sys.digits[1][0]
    if sys.digits != tuple((i * step,) for i in range(p)):
        raise DigitError("digits {} are not an arithmetic progression".format(
            sys.digits))
    g = f._absorbed()
    if g.amplitude:
        raise ValueError(
            "real_image_1d: amplitude p**{} is irrational".format(g.amplitude))
    width = step * Fraction(p) ** (-g.M)
    pieces = []
    for (r,), v in g.values.items():
        if v.is_zero():
            continue
        c = PadicVector.from_rationals([Fraction(r) * Fraction(p) ** (-g.L)], p)
        start = rho(c, sys, g.M - 1)[0] if r else Fraction(0)
        pieces.append((start, start + width, v.rational()))
    pieces.sort()
    merged = []
    for start, end, value in pieces:
        if merged and merged[-1][1] == start and merged[-1][2] == value:
            merged[-1] = (merged[-1][0], end, value)
        else:
            merged.append((start, end, value))
    return merged


def haar_image_check():
    """
    The rho-image of the 2-adic mother wavelet chi(x/2) Omega(|x|_2) is the
    Haar wavelet on [0, 1), and its translate by 1/2 the Haar wavelet on
    [1, 2).

    """
    sys = DigitSystem(2, ((2,),), ((0,), (1,)))
    A = sys.padic_matrix()
    half = Fraction(1, 2)
    mother = wavelet(A, WaveletIndex((1,), 0, (0,)))
    shifted = wavelet(A, WaveletIndex((1,), 0, (half,)))
    return (real_image_1d(mother, sys) == [(0, half, 1), (half, 1, -1)]
            and real_image_1d(shifted, sys)
            == [(1, 1 + half, 1), (1 + half, 2, -1)])


def transform_points(points, matrix, shift):
    """
    Exact affine image matrix * x + shift of a point set.

    Parameters
    ----------
    matrix : rows of rationals
    shift : sequence of rationals

    """
    entries = [Fraction(a) for r in matrix for a in r] + \
        [Fraction(s) for s in shift]
    q = math.lcm(*(a.denominator for a in entries))
    P_rows = [[int(Fraction(a) * q) for a in r] for r in matrix]
    s_vals = [int(Fraction(c) * q) for c in shift]
    bound = (_magnitude(points.numerators)
             * max(sum(abs(a) for a in r) for r in P_rows)
             + max(abs(c) for c in s_vals) * points.denominator)
    dtype = _exact_dtype(max(bound, points.denominator))
    P = np.array(P_rows, dtype=dtype)
    s = np.array(s_vals, dtype=dtype)
    numerators = (points.numerators.astype(dtype) @ P.T
                  + s[None, :] * points.denominator)
    return RealPointSet(numerators, points.denominator * q, points.depth,
                        points.p, dict(points.meta))


def ball_image_points(sys, j, n, T, points=None):
    """
    Truncated samples of rho(A**j (n + Z_p^d)) = A**(-j) (rho(n) + R).

    Parameters
    ----------
    j : int
    n : tuple of int
        rho(n), an integer translate from rho_translates
    T : int

    """
    if points is None:
        points = sample_R(sys, T)
    P = _inverse_power(sys.matrix, j)
    shift = _apply(P, n)
    return transform_points(points, P, shift)


def measure_conservation(sys, j, n, T, m):
    """
    Outer box count of rho(A**j (n + Z_p^d)) next to its Haar measure
    p**(-j).

    Returns
    -------
    estimate : MeasureEstimate
    haar : fractions.Fraction

    """
    image = ball_image_points(sys, j, n, T)
    outer = len(occupied_cells(image, m)) * Fraction(
        1, sys.p ** (sys.dim * m))
    return (MeasureEstimate(m, outer, Fraction(0)),
            Fraction(sys.p) ** (-j))


def default_digits(A, p=None):
    """Lexicographic digits of an integer dilation, as a DigitSystem."""
    return DigitSystem.standard(A, p)
