"""
Deformed ultrametrics on Q_p^d, their balls, and isometry membership.

A metric is given by weight exponents s_l in [0, 1) (coordinate weight
q_l = p**(-s_l)) and an optional conjugating isometry U; the deformed norm of
x is max_l q_l |(Ux)_l|_p, kept as the exponent min_l (v((Ux)_l) + s_l).

Balls containing zero form a doubly infinite chain. With sigma_0 < ... <
sigma_(r-1) the distinct weights, chain position t = k*r + i is the ball

    {x : v((Ux)_l) >= k + [s_l < sigma_i]}

so t = 0 is Z_p^d, t = r is pZ_p^d and every other ball is a translate of a
chain ball.

"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from .constants import DEFAULT_PRECISION, DEFAULT_TRIALS, RESIDUE_DEPTH
from .exceptions import PrimeMismatchError
from .padic import INF, NormExponent, PadicMatrix, PadicVector
from .padic import int_valuation, random_vector, rational_valuation, residue

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DeformedMetric:
    """
    Deformed ultrametric on Q_p^d.

    Parameters
    ----------
    p : int
        prime
    weights : tuple of fractions.Fraction
        weight exponents s_1, ..., s_d, each in [0, 1)
    conjugation : tuple of tuple or None
        rows of an isometry U of the standard metric; the distance is measured
        between U x and U y. The identity is stored as None.

    Raises
    ------
    ValueError : weight outside [0, 1), or U is not a standard isometry

    """
    p: int
    weights: tuple
    conjugation: tuple = None

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("p: expected a prime, got {}".format(self.p))
        weights = tuple(Fraction(s) for s in self.weights)
        if not weights:
            raise ValueError("weights: expected at least one coordinate")
        for s in weights:
            if not 0 <= s < 1:
                raise ValueError(
                    "weight exponent {} outside [0, 1)".format(s))
        object.__setattr__(self, "weights", weights)
        if self.conjugation is not None:
            rows = tuple(tuple(Fraction(a) for a in r)
                         for r in self.conjugation)
            d = len(weights)
            if len(rows) != d or any(len(r) != d for r in rows):
                raise ValueError(
                    "conjugation: expected a {0}x{0} matrix".format(d))
            U = PadicMatrix.from_rationals(rows, self.p)
            if not is_isometry_standard(U):
                raise ValueError(
                    "conjugation {} is not an isometry of Z_{}^{}".format(
                        U, self.p, d))
            if U.is_identity():
                rows = None
            object.__setattr__(self, "conjugation", rows)

    @classmethod
    def standard(cls, p, d):
        return cls(p, (Fraction(0),) * d)

    @property
    def dim(self):
        return len(self.weights)

    @cached_property
    def chain_weights(self):
        """Distinct weights sigma_0 < ... < sigma_(r-1)."""
        return tuple(sorted(set(self.weights)))

    @property
    def period(self):
        return len(self.chain_weights)

    @cached_property
    def blocks(self):
        """Coordinate indices grouped by weight, in increasing weight."""
        return tuple(
            tuple(l for l, s in enumerate(self.weights) if s == sigma)
            for sigma in self.chain_weights)

    def is_complete_flag(self):
        return self.period == self.dim

    @cached_property
    def U(self):
        """Conjugation as a PadicMatrix (None for the identity)."""
        if self.conjugation is None:
            return None
        return PadicMatrix.from_rationals(self.conjugation, self.p)

    @cached_property
    def U_inverse(self):
        if self.conjugation is None:
            return None
        return self.U.inverse()

    def transform(self, x):
        """Coordinates U x in which the weights apply."""
        if x.p != self.p:
            raise PrimeMismatchError(
                "vector over p={} for a metric over p={}".format(x.p, self.p))
        if len(x) != self.dim:
            raise ValueError("dimension mismatch: metric has d={}, "
                             "vector has {}".format(self.dim, len(x)))
        if self.U is None:
            return x
        return self.U.apply(x)

    def norm(self, x):
        """Deformed norm of x as a NormExponent."""
        y = self.transform(x)
        e = min((c.valuation + s for c, s in zip(y, self.weights)),
                default=INF)
        return NormExponent(e, self.p)

    def levels(self, t):
        """Coordinate levels (after U) of the chain ball at position t."""
        k, i = divmod(t, self.period)
        sigma = self.chain_weights[i]
        return tuple(k + (1 if s < sigma else 0) for s in self.weights)

    def threshold(self, t):
        """Norm exponent of the chain ball at position t (its diameter)."""
        k, i = divmod(t, self.period)
        return k + self.chain_weights[i]

    def position_of(self, exponent):
        """Smallest chain position whose threshold is at least exponent."""
        if exponent == INF:
            raise ValueError("no ball has radius zero")
        exponent = Fraction(exponent)
        k = math.floor(exponent)
        for i, sigma in enumerate(self.chain_weights):
            if k + sigma >= exponent:
                return k * self.period + i
        return (k + 1) * self.period

    def conjugated(self, V):
        """
        The metric x -> base(U V x).

        Parameters
        ----------
        V : PadicMatrix or sequence of rows
            standard isometry

        """
        V = _as_rows(V, self.p)
        if self.conjugation is None:
            rows = V
        else:
            U = PadicMatrix.from_rationals(self.conjugation, self.p)
            UV = U @ PadicMatrix.from_rationals(V, self.p)
            rows = _matrix_rows(UV)
        return DeformedMetric(self.p, self.weights, rows)

    def dual(self):
        """
        Frequency-side metric: weights reflected within [sigma_0, sigma_max]
        and conjugation by the inverse transpose of U.

        """
        lo, hi = self.chain_weights[0], self.chain_weights[-1]
        weights = tuple(lo + hi - s for s in self.weights)
        rows = None
        if self.conjugation is not None:
            rows = _matrix_rows(self.U_inverse.transpose())
        return DeformedMetric(self.p, weights, rows)

    def __str__(self):
        text = "p={} s=({})".format(
            self.p, ", ".join(str(s) for s in self.weights))
        if self.conjugation is not None:
            text += " U={}".format(PadicMatrix.from_rationals(
                self.conjugation, self.p))
        return text


def _as_rows(M, p):
    if isinstance(M, PadicMatrix):
        return _matrix_rows(M)
    return tuple(tuple(Fraction(a) for a in r) for r in M)


def _matrix_rows(M):
    """Rational rows of an integral PadicMatrix, using signed lifts."""
    if M.is_integral():
        return tuple(tuple(Fraction(a) for a in r)
                     for r in M.to_integers(signed=True))
    return M.lift()


@lru_cache(maxsize=None)
def _coordinate_residues(metric, depth):
    """U^-1 modulo p**depth as integer rows (None for no conjugation)."""
    if metric.conjugation is None:
        return None
    return metric.U_inverse.residues(depth)


@dataclass(frozen=True)
class Ball:
    """
    Deformed ball n + B_t in the coordinates after conjugation.

    Parameters
    ----------
    metric : DeformedMetric
    position : int
        chain position t
    center : tuple of fractions.Fraction
        canonical representative of the translation, coordinate l reduced
        modulo p**level_l (digits in {0, ..., p-1} below the level)

    """
    metric: DeformedMetric
    position: int
    center: tuple

    @classmethod
    def make(cls, metric, position, center=None):
        """Ball with canonical center; ``center`` is in metric coordinates."""
        levels = metric.levels(position)
        if center is None:
            center = (0,) * metric.dim
        center = tuple(residue(c, metric.p, lev)
                       for c, lev in zip(center, levels))
        return cls(metric, position, center)

    @property
    def levels(self):
        return self.metric.levels(self.position)

    @property
    def diameter(self):
        return NormExponent(self.metric.threshold(self.position),
                            self.metric.p)

    @property
    def measure(self):
        """Haar measure of the ball, exact."""
        return Fraction(self.metric.p) ** (-sum(self.levels))

    def contains(self, x):
        y = self.metric.transform(x)
        return all((c - n).valuation >= lev
                   for c, n, lev in zip(y, self.center, self.levels))

    def contains_ball(self, other):
        if other.metric != self.metric or other.position < self.position:
            return False
        p = self.metric.p
        return all(rational_valuation(a - b, p) >= lev
                   for a, b, lev in zip(other.center, self.center,
                                        self.levels))

    def is_disjoint(self, other):
        return not (self.contains_ball(other) or other.contains_ball(self))

    def residues(self, depth):
        """
        Residue classes modulo p**depth (original coordinates) making up the
        ball.

        Parameters
        ----------
        depth : int
            at least every coordinate level

        Returns
        -------
        frozenset of tuple of int

        Raises
        ------
        ValueError : ball not inside Z_p^d, or depth below a level

        """
        p = self.metric.p
        levels = self.levels
        if min(levels) < 0:
            raise ValueError("ball {} is not contained in Z_{}^{}".format(
                self, p, self.metric.dim))
        if max(levels) > depth:
            raise ValueError(
                "depth {} is below the ball levels {}".format(depth, levels))
        modulus = p ** depth
        axes = [
            [(int(n) + p ** lev * k) % modulus
             for k in range(p ** (depth - lev))]
            for n, lev in zip(self.center, levels)]
        Uinv = _coordinate_residues(self.metric, depth)
        if Uinv is None:
            return frozenset(itertools.product(*axes))
        return frozenset(
            tuple(sum(a * b for a, b in zip(row, y)) % modulus for row in Uinv)
            for y in itertools.product(*axes))

    def __str__(self):
        return "B[t={}]({})".format(
            self.position, ", ".join(str(c) for c in self.center))


def deformed_distance(metric, x, y):
    """
    Deformed distance between two vectors.

    Parameters
    ----------
    metric : DeformedMetric
    x, y : PadicVector

    Returns
    -------
    NormExponent
        exponent min_l (v((U(x - y))_l) + s_l); infinite iff x == y at the
        working precision

    """
    return metric.norm(x - y)


def ball_chain(metric):
    """One period of the chain, from Z_p^d down to pZ_p^d inclusive."""
    return [Ball.make(metric, t) for t in range(metric.period + 1)]


def ball_contains(ball, x):
    return ball.contains(x)


def ball_of(metric, x, radius):
    """
    Closed ball {y : d(x, y) <= p**(-radius)} around x.

    Parameters
    ----------
    radius : NormExponent or rational
        radius as a norm exponent

    """
    if isinstance(radius, NormExponent):
        radius = radius.exponent
    t = metric.position_of(radius)
    y = metric.transform(x)
    return Ball.make(metric, t, y.lift())


def maximal_subballs(ball):
    """
    The balls one chain step below ``ball`` that partition it.

    There are p**b of them, b the size of the weight block refined at this
    step; sorted by center.

    """
    metric = ball.metric
    p = metric.p
    before = ball.levels
    after = metric.levels(ball.position + 1)
    refined = [l for l in range(metric.dim) if after[l] > before[l]]
    out = []
    for digits in itertools.product(range(p), repeat=len(refined)):
        center = list(ball.center)
        for l, d in zip(refined, digits):
            center[l] = center[l] + d * Fraction(p) ** before[l]
        out.append(Ball.make(metric, ball.position + 1, center))
    return out


def parent_ball(ball):
    """Ball one chain step above ``ball`` containing it."""
    return Ball.make(ball.metric, ball.position - 1, ball.center)


def standard_ball(metric, j, n=None):
    """
    The standard ball p**j Z_p^d + n viewed as a deformed ball.

    Parameters
    ----------
    metric : DeformedMetric
    j : int
    n : sequence of rationals or None
        translation in original coordinates

    """
    d = metric.dim
    if n is None:
        n = (0,) * d
    x = PadicVector.from_rationals(n, metric.p, max(DEFAULT_PRECISION, j + 1))
    y = metric.transform(x)
    return Ball.make(metric, j * metric.period, y.lift())


def is_isometry_standard(M):
    """
    True iff M is an isometry of the standard metric.

    Parameters
    ----------
    M : PadicMatrix

    Returns
    -------
    bool
        all entries in Z_p and det a unit

    """
    if not M.is_integral():
        return False
    return M.det().valuation == 0


def is_isometry_deformed(M, metric):
    """
    True iff M is an isometry of the deformed metric.

    M must be a standard isometry whose conjugate U M U^-1 has entry (a, b)
    in pZ_p whenever s_a < s_b (block mod-p triangular).

    Parameters
    ----------
    M : PadicMatrix
    metric : DeformedMetric

    Returns
    -------
    bool

    """
    if not is_isometry_standard(M):
        return False
    if metric.conjugation is not None:
        M = metric.U @ M @ metric.U_inverse
    s = metric.weights
    d = metric.dim
    for a in range(d):
        for b in range(d):
            if s[a] < s[b] and M[a, b].valuation < 1:
                return False
    return True


def isometry_oracle(M, metric, trials=DEFAULT_TRIALS, rng=None,
                    precision=DEFAULT_PRECISION):
    """
    Empirical distance-preservation test on sampled pairs.

    Parameters
    ----------
    M : PadicMatrix
    metric : DeformedMetric
    trials : int
        number of sampled pairs (x, y)
    rng : numpy.random.Generator or None
    precision : int
        digits of the sampled vectors

    Returns
    -------
    bool
        False at the first pair with d(Mx, My) != d(x, y)

    """
    if trials < 1:
        raise ValueError("trials: expected >= 1, got {}".format(trials))
    if rng is None:
        rng = np.random.default_rng()
    if M.is_integral():
        return _modular_oracle(M, metric, trials, rng)
    d = metric.dim
    for _ in range(trials):
        x = random_vector(metric.p, d, rng, precision)
        y = random_vector(metric.p, d, rng, precision)
        if deformed_distance(metric, M.apply(x), M.apply(y)) != \
                deformed_distance(metric, x, y):
            return False
    return True


def _modular_digits(p, d):
    """Largest N with d * p**(2N) below the int64 range."""
    N = 1
    while d * p ** (2 * (N + 1)) < 2 ** 62:
        N += 1
    return N


def _array_valuations(a, p, cap):
    """Entrywise valuations of integers in [0, p**cap); 0 maps to cap."""
    a = a.copy()
    v = np.where(a == 0, cap, 0)
    live = a != 0
    while live.any():
        live &= a % p == 0
        a[live] //= p
        v[live] += 1
    return v


def _scaled_norms(y, metric, cap):
    """Norm exponents of the rows of y, times the common weight denominator."""
    scale = math.lcm(*(s.denominator for s in metric.weights))
    shift = np.array([int(s * scale) for s in metric.weights], dtype=np.int64)
    return np.min(_array_valuations(y, metric.p, cap) * scale + shift, axis=1)


def _modular_oracle(M, metric, trials, rng):
    """
    Vectorised oracle for integral M working modulo p**N.

    Distances depend on differences only, so z = x - y is sampled directly,
    with coordinate valuations below N / 2. A true valuation >= N still
    reads as a mismatch against ||z||, so truncation cannot hide one.

    """
    p, d = metric.p, metric.dim
    N = _modular_digits(p, d)
    modulus = p ** N
    v = rng.integers(0, max(N // 2, 1), size=(trials, d))
    units = rng.integers(0, p ** (N - 1), size=(trials, d)) * p + \
        rng.integers(1, p, size=(trials, d))
    z = (p ** v * units) % modulus
    Mz = z @ np.array(M.residues(N), dtype=np.int64).T % modulus
    if metric.U is not None:
        U = np.array(metric.U.residues(N), dtype=np.int64)
        z = z @ U.T % modulus
        Mz = Mz @ U.T % modulus
    return bool(np.array_equal(_scaled_norms(Mz, metric, N),
                               _scaled_norms(z, metric, N)))


def random_isometry(metric, rng, digits=3):
    """
    Sample a member of the isometry group of ``metric``.

    Entries are drawn modulo p**digits, forced into pZ_p where the block
    structure demands it, and resampled until the determinant is a unit.

    """
    p = metric.p
    d = metric.dim
    s = metric.weights
    modulus = p ** digits
    while True:
        rows = [[int(rng.integers(0, modulus)) for _ in range(d)]
                for _ in range(d)]
        for a in range(d):
            for b in range(d):
                if s[a] < s[b]:
                    rows[a][b] = p * (rows[a][b] % (modulus // p))
        M = PadicMatrix.from_rationals(rows, p)
        if M.det().valuation == 0:
            break
    if metric.conjugation is not None:
        M = metric.U_inverse @ M @ metric.U
    return M


def isometry_sweep(metric, level=RESIDUE_DEPTH, trials=DEFAULT_TRIALS,
                   rng=None, precision=DEFAULT_PRECISION):
    """
    Compare the classifier with the oracle on every d x d matrix modulo
    p**level (entries lifted to their least non-negative representative).

    Returns
    -------
    list of PadicMatrix
        matrices where the two disagree

    """
    if rng is None:
        rng = np.random.default_rng()
    p, d = metric.p, metric.dim
    disagreements = []
    count = 0
    for entries in itertools.product(range(p ** level), repeat=d * d):
        rows = [entries[i * d:(i + 1) * d] for i in range(d)]
        M = PadicMatrix.from_rationals(rows, p, precision)
        predicted = is_isometry_deformed(M, metric)
        observed = isometry_oracle(M, metric, trials, rng, precision)
        count += 1
        if predicted != observed:
            logger.warning("classifier says %s, oracle says %s for %s",
                           predicted, observed, M)
            disagreements.append(M)
    logger.info("isometry sweep: %d classes, %d disagreements",
                count, len(disagreements))
    return disagreements


def group_closure_check(metric, rng, samples=20):
    """
    Products and inverses of sampled isometries stay in the group.

    Returns
    -------
    bool

    """
    for _ in range(samples):
        M = random_isometry(metric, rng)
        N = random_isometry(metric, rng)
        if not is_isometry_deformed(M @ N, metric):
            return False
        if not is_isometry_deformed(M.inverse(), metric):
            return False
    return True


def module_volume(X, p=None):
    """
    Haar measure of the Z_p-module spanned by the columns of X.

    Computed from the p-adic valuations of the Smith invariant factors of X
    over Z, so it equals |det X|_p.

    Parameters
    ----------
    X : PadicMatrix or sequence of rows of rationals
    p : int
        required when X is not a PadicMatrix

    Returns
    -------
    fractions.Fraction

    """
    if isinstance(X, PadicMatrix):
        p = X.p
        rows = _matrix_rows(X)
    else:
        if p is None:
            raise ValueError("module_volume: p is required for rational rows")
        rows = tuple(tuple(Fraction(a) for a in r) for r in X)
    d = len(rows)
    denominator = math.lcm(*(a.denominator for r in rows for a in r))
    integer_rows = [[int(a * denominator) for a in r] for r in rows]
    snf = smith_normal_form(Matrix(integer_rows), domain=ZZ)
    invariants = [int(snf[i, i]) for i in range(d)]
    if any(f == 0 for f in invariants):
        return Fraction(0)
    exponent = sum(int_valuation(f, p) for f in invariants)
    exponent -= d * int_valuation(denominator, p)
    return Fraction(p) ** (-exponent)


def complete_flag(p, d):
    """Complete-flag metric with weights s_l = (d - l) / d, l = 1, ..., d."""
    return DeformedMetric(p, tuple(Fraction(d - 1 - l, d) for l in range(d)))
