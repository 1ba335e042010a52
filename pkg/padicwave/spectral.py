"""
Fourier transform of test functions and the deformed operator D^alpha.

For f on the grid (L, M), F[f](k) = int chi(k . x) f(x) dmu(x) is supported in
p**(-M) Z_p^d and constant on cosets of p**L Z_p^d, so it lives on the grid
(M, L). Each value is the finite character sum

    F[f](p**(-M) s) = p**(-d M) sum_r f(r) zeta**(s . r),   zeta = exp(2 pi i / p**(M+L))

computed exactly in Q(zeta). D^alpha multiplies F[f] by ||k||**alpha; the
result is exact whenever all multiplier exponents share one fractional part,
otherwise a float layer takes over.

"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .constants import FLOAT_TOLERANCE, MAX_CELLS, MAX_FOURIER_DIGITS
from .cyclotomic import Cyclotomic
from .dilation import is_dilation
from .exceptions import GuardError
from .padic import INF, PadicVector
from .wavelet import LocallyConstantFunction, mother_wavelet, wavelet

logger = logging.getLogger(__name__)

LAYERS = ("auto", "exact", "float")


def _guard(f):
    digits = f.M + f.L
    if digits > MAX_FOURIER_DIGITS:
        raise GuardError(
            "MAX_FOURIER_DIGITS",
            "character sum over M + L = {} digits".format(digits))
    count = f.p ** (f.dim * digits)
    if count > MAX_CELLS:
        raise GuardError("MAX_CELLS", "quotient of size {}".format(count))


def _grid(p, dim, digits):
    return np.array(list(itertools.product(range(p ** digits), repeat=dim)),
                    dtype=np.int64).reshape(-1, dim)


def _character_sum(f, sign):
    """Exact transform of f with character chi(sign * k . x)."""
    _guard(f)
    p, d = f.p, f.dim
    digits = f.M + f.L
    m = p ** digits
    keys = _grid(p, d, digits)
    by_value = {}
    for r, v in f.values.items():
        by_value.setdefault(v, []).append(r)
    totals = [Cyclotomic.zero(p)] * len(keys)
    cache = {}
    for v, cells in by_value.items():
        R = np.array(cells, dtype=np.int64)
        E = (sign * (keys @ R.T)) % m
        index = E + m * np.arange(len(keys))[:, None]
        counts = np.bincount(index.ravel(), minlength=len(keys) * m)
        counts = counts.reshape(len(keys), m)
        for i, row in enumerate(counts):
            dense = tuple(int(c) for c in row)
            if dense not in cache:
                cache[dense] = Cyclotomic.from_dense(p, digits, dense)
            totals[i] = totals[i] + v * cache[dense]
    measure = Fraction(p) ** (-d * f.M)
    values = {tuple(int(c) for c in s): t * measure
              for s, t in zip(keys, totals) if not t.is_zero()}
    return LocallyConstantFunction(p, d, f.M, f.L, values, f.amplitude)


def fourier(f):
    """
    F[f](k) = int chi(k . x) f(x) dmu(x), exactly.

    Parameters
    ----------
    f : LocallyConstantFunction

    Returns
    -------
    LocallyConstantFunction
        on the grid (M, L)

    Raises
    ------
    GuardError : M + L exceeds MAX_FOURIER_DIGITS

    """
    return _character_sum(f, 1)


def inverse_fourier(g):
    """F^-1[g](x) = int chi(-k . x) g(k) dmu(k)."""
    return _character_sum(g, -1)


def shifted_unit_ball(A, l):
    """Indicator of -(A*)**(-1) l + Z_p^d."""
    p, d = A.p, A.dim
    lv = PadicVector.from_rationals(l, p, A.precision)
    c = (-A.transpose().inverse().apply(lv))
    v = c.valuation
    L = 0 if v == INF else max(-v, 0)
    modulus = p ** L
    key = tuple((x * Fraction(p) ** L).to_integer() % modulus for x in c)
    return LocallyConstantFunction(p, d, L, 0, {key: 1})


def fourier_mother_predicate(A, l):
    """
    True iff F[Psi_l] is exactly the indicator of -(A*)**(-1) l + Z_p^d.

    """
    return fourier(mother_wavelet(A, l)) == shifted_unit_ball(A, l)


@dataclass(frozen=True)
class SpectralValue:
    """
    ||k||**alpha for a norm p**(-norm_exponent), kept as exponents.

    The value is p**exponent with exponent = -alpha * norm_exponent.

    """
    norm_exponent: Fraction
    alpha: Fraction
    p: int

    @property
    def exponent(self):
        if self.norm_exponent == INF:
            return -INF if self.alpha < 0 else INF
        return -Fraction(self.alpha) * self.norm_exponent

    def value(self):
        return float(self.p) ** float(self.exponent)

    def __mul__(self, other):
        return SpectralValue(-(self.exponent + other.exponent), Fraction(1),
                             self.p)

    def __lt__(self, other):
        return self.exponent < other.exponent

    def __str__(self):
        return "p^({})".format(self.exponent)


@dataclass
class NumericFunction:
    """
    Float counterpart of a LocallyConstantFunction, amplitude included.

    Parameters
    ----------
    p, dim, L, M : int
    values : dict
        cell key -> complex

    """
    p: int
    dim: int
    L: int
    M: int
    values: dict

    @classmethod
    def from_exact(cls, f):
        scale = float(f.p) ** float(f.amplitude)
        return cls(f.p, f.dim, f.L, f.M,
                   {r: v.to_complex() * scale for r, v in f.values.items()})

    def regrid(self, L, M):
        shift = self.p ** (L - self.L)
        step = self.p ** (L + self.M)
        lifts = list(itertools.product(range(self.p ** (M - self.M)),
                                       repeat=self.dim))
        values = {}
        for r, v in self.values.items():
            base = tuple(c * shift for c in r)
            for z in lifts:
                values[tuple(b + step * t for b, t in zip(base, z))] = v
        return NumericFunction(self.p, self.dim, L, M, values)

    def max_difference(self, other):
        """Largest |f - g| over cells, on the common grid."""
        L, M = max(self.L, other.L), max(self.M, other.M)
        a, b = self.regrid(L, M), other.regrid(L, M)
        keys = set(a.values) | set(b.values)
        return max((abs(a.values.get(r, 0) - b.values.get(r, 0))
                    for r in keys), default=0.0)


def _numeric_inverse(p, dim, L, M, values):
    """F^-1 of a float function on the grid (L, M); result on (M, L)."""
    digits = M + L
    m = p ** digits
    keys = _grid(p, dim, digits)
    if not values:
        return NumericFunction(p, dim, M, L, {})
    cells = list(values)
    S = np.array(cells, dtype=np.int64)
    G = np.array([values[s] for s in cells], dtype=complex)
    E = (-(keys @ S.T)) % m
    out = np.exp(2j * np.pi * E / m) @ G * float(p) ** (-dim * M)
    return NumericFunction(p, dim, M, L, {
        tuple(int(c) for c in r): complex(v) for r, v in zip(keys, out)
        if abs(v) > FLOAT_TOLERANCE})


def _frequency_norms(F, metric):
    """Norm exponent of each nonzero cell key of F (k = p**(-L) key)."""
    scale = Fraction(F.p) ** (-F.L)
    out = {}
    for s in F.values:
        k = PadicVector.from_rationals([c * scale for c in s], F.p)
        out[s] = metric.norm(k).exponent
    return out


def apply_D_alpha(f, alpha, metric, layer="auto"):
    """
    D^alpha f = F^-1(||k||**alpha F[f]) with the deformed norm of ``metric``.

    Parameters
    ----------
    f : LocallyConstantFunction
    alpha : rational
    metric : DeformedMetric
        norm on the frequency side
    layer : {"auto", "exact", "float"}
        "auto" is exact when every multiplier exponent -alpha * e has the
        same fractional part, float otherwise

    Returns
    -------
    LocallyConstantFunction or NumericFunction

    Raises
    ------
    ValueError : alpha < 0 and F[f] does not vanish at the zero cell, or the
        exact layer was requested for irrational multipliers

    Notes
    -----
    For alpha > 0 the multiplier is set to 0 on the whole zero cell
    p**L Z_p^d of the frequency grid (L of f), not only at k = 0. The result
    is exact when F[f] vanishes on that cell, as it does for every wavelet.
    Otherwise it is D^alpha of f minus its low-frequency part
    F^-1(F[f] 1_{p**L Z_p^d}), which is only an approximation of D^alpha f.

    """
    if layer not in LAYERS:
        raise ValueError("layer: expected one of {}, got {}".format(
            LAYERS, layer))
    alpha = Fraction(alpha)
    F = fourier(f)
    zero = (0,) * f.dim
    multipliers = {}
    for s, e in _frequency_norms(F, metric).items():
        if e == INF or s == zero:
            if alpha < 0:
                raise ValueError(
                    "D^{}: multiplier is singular at k=0 and F[f](0) != 0"
                    .format(alpha))
            if alpha > 0:
                logger.warning("D^%s: F[f] is nonzero on the zero cell, "
                               "multiplier set to 0 there", alpha)
                multipliers[s] = None
            else:
                multipliers[s] = Fraction(0)
            continue
        multipliers[s] = -alpha * e
    exponents = {x for x in multipliers.values() if x is not None}
    shares = len({x - (x.numerator // x.denominator) for x in exponents}) <= 1
    if layer == "exact" and not shares:
        raise ValueError("D^{}: multiplier exponents have different "
                         "fractional parts".format(alpha))
    if layer == "exact" or (layer == "auto" and shares):
        phase = min((x - (x.numerator // x.denominator) for x in exponents),
                    default=Fraction(0))
        values = {}
        for s, v in F.values.items():
            x = multipliers[s]
            if x is None:
                continue
            values[s] = v * Fraction(F.p) ** int(x - phase)
        G = LocallyConstantFunction(F.p, F.dim, F.L, F.M, values,
                                    F.amplitude + phase)
        return inverse_fourier(G)
    logger.info("D^%s: using the float layer", alpha)
    numeric = NumericFunction.from_exact(F)
    values = {}
    for s, v in numeric.values.items():
        x = multipliers[s]
        if x is None:
            continue
        values[s] = v * float(F.p) ** float(x)
    return _numeric_inverse(F.p, F.dim, F.L, F.M, values)


def frequency_metric(A, metric):
    """
    The metric on the frequency side: ``metric`` if A* is a dilation for
    it, otherwise ``metric.dual()``.

    """
    if is_dilation(A.transpose(), metric).verdict:
        logger.debug("frequency metric: %s", metric)
        return metric
    dual = metric.dual()
    if not is_dilation(A.transpose(), dual).verdict:
        logger.warning("A* is a dilation for neither %s nor its dual", metric)
    logger.debug("frequency metric: dual %s", dual)
    return dual


def eigenvalue(A, metric, idx, alpha, frequency=None):
    """
    ||(A*)**(-j-1) k||**alpha for the wavelet index idx, with the norm of
    ``frequency`` (default frequency_metric(A, metric)).

    Returns
    -------
    SpectralValue

    """
    fm = frequency_metric(A, metric) if frequency is None else frequency
    kv = PadicVector.from_rationals(idx.k, A.p, A.precision)
    k = (A.transpose() ** (-(idx.j + 1))).apply(kv)
    return SpectralValue(fm.norm(k).exponent, Fraction(alpha), A.p)


def eigen_residual(A, metric, idx, alpha, layer="auto", frequency=None):
    """
    Compare D^alpha Psi_{k;jn} with eigenvalue * Psi_{k;jn}.

    Parameters
    ----------
    frequency : DeformedMetric or None
        norm used inside D^alpha; defaults to frequency_metric(A, metric)

    Returns
    -------
    exact : bool
        whether the exact layer was used
    residual : float
        0.0 for an exact match, the largest cell difference otherwise
        (math.inf for an exact mismatch)

    """
    if frequency is None:
        frequency = frequency_metric(A, metric)
    psi = wavelet(A, idx)
    lam = eigenvalue(A, metric, idx, alpha, frequency)
    result = apply_D_alpha(psi, alpha, frequency, layer)
    expected = LocallyConstantFunction(
        psi.p, psi.dim, psi.L, psi.M, psi.values,
        psi.amplitude + lam.exponent)
    if isinstance(result, LocallyConstantFunction):
        return True, (0.0 if result == expected else INF)
    residual = result.max_difference(NumericFunction.from_exact(expected))
    return False, residual


def eigen_check(A, metric, idx, alpha, layer="auto", frequency=None):
    """
    D^alpha Psi_{k;jn} == ||(A*)**(-j-1) k||**alpha Psi_{k;jn}, exactly or
    within FLOAT_TOLERANCE per cell.

    """
    exact, residual = eigen_residual(A, metric, idx, alpha, layer, frequency)
    if exact:
        return residual == 0.0
    return residual < FLOAT_TOLERANCE
