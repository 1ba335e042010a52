"""
Dilations of deformed metrics, checked as exact residue-set identities.

A matrix A is a dilation for a metric when it maps every ball centered at
zero onto the maximal subball centered at zero of that ball. Since the chain
is periodic up to multiplication by p, it suffices to check the r balls of
one period. Both sides are finite unions of residue classes modulo p**D,
so each check reduces to an inclusion of residue sets plus a comparison of
Haar measures.

"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .constants import MATRIX_Q, MATRIX_S, MAX_RESIDUE_DEPTH, RESIDUE_DEPTH
from .exceptions import SingularMatrixError
from .metric import Ball, ball_chain, is_isometry_standard
from .padic import PadicMatrix, PadicVector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResidueSet:
    """
    Union of residue classes c + p**depth Z_p^d.

    Parameters
    ----------
    p : int
    dim : int
    depth : int
    classes : frozenset of tuple of int
        representatives in [0, p**depth)^d

    """
    p: int
    dim: int
    depth: int
    classes: frozenset

    @classmethod
    def from_ball(cls, ball, depth=RESIDUE_DEPTH):
        return cls(ball.metric.p, ball.metric.dim, depth,
                   ball.residues(depth))

    @classmethod
    def coset(cls, p, dim, depth, level, shift=None):
        """p**level Z_p^d + shift."""
        modulus = p ** depth
        if shift is None:
            shift = (0,) * dim
        axes = [[(s + p ** level * k) % modulus
                 for k in range(p ** (depth - level))] for s in shift]
        return cls(p, dim, depth, frozenset(itertools.product(*axes)))

    @property
    def modulus(self):
        return self.p ** self.depth

    @property
    def measure(self):
        return Fraction(len(self.classes), self.p ** (self.dim * self.depth))

    def refine(self, depth):
        """The same set described modulo p**depth (depth >= self.depth)."""
        if depth < self.depth:
            raise ValueError("refine: depth {} below {}".format(
                depth, self.depth))
        step = self.modulus
        lifts = list(itertools.product(range(self.p ** (depth - self.depth)),
                                       repeat=self.dim))
        classes = frozenset(
            tuple(c + step * k for c, k in zip(cls_, lift))
            for cls_ in self.classes for lift in lifts)
        return ResidueSet(self.p, self.dim, depth, classes)

    def image(self, A):
        """
        Residue classes met by A applied to the set.

        Parameters
        ----------
        A : PadicMatrix
            integral matrix

        """
        rows = A.residues(self.depth)
        m = self.modulus
        return ResidueSet(self.p, self.dim, self.depth, frozenset(
            tuple(sum(a * x for a, x in zip(row, c)) % m for row in rows)
            for c in self.classes))

    def __or__(self, other):
        if other.depth != self.depth:
            depth = max(self.depth, other.depth)
            return self.refine(depth) | other.refine(depth)
        return ResidueSet(self.p, self.dim, self.depth,
                          self.classes | other.classes)

    def __len__(self):
        return len(self.classes)


@dataclass(frozen=True)
class Identity:
    """Outcome of one set identity A * source = target."""
    name: str
    holds: bool
    witness: tuple = None

    def __str__(self):
        text = "{}: {}".format(self.name, "pass" if self.holds else "FAIL")
        if self.witness is not None:
            text += " witness={}".format(self.witness)
        return text


def set_identity(A, source, target):
    """
    Decide A * source == target exactly.

    The image of a class c + p**D Z_p^d lies in A c + p**D Z_p^d, so the
    image is inside ``target`` iff every image class is; equality then
    follows from mu(source) |det A|_p == mu(target).

    Returns
    -------
    holds : bool
    witness : tuple or None
        ("outside", x) for a source point mapped outside the target, or
        ("missed", y) for a target point not in the image

    """
    depth = max(source.depth, target.depth)
    source, target = source.refine(depth), target.refine(depth)
    for c in sorted(source.classes):
        y = image_class(A, c, depth)
        if y not in target.classes:
            return False, ("outside", c)
    ratio = A.det().norm()
    if source.measure * ratio == target.measure:
        return True, None
    return False, _missed_point(A, source, target)


def image_class(A, c, depth):
    m = A.p ** depth
    return tuple(sum(a * x for a, x in zip(row, c)) % m
                 for row in A.residues(depth))


def _missed_point(A, source, target):
    """A target class outside the image, searched at increasing depth."""
    v = A.det().valuation
    depth = source.depth
    limit = min(source.depth + v, MAX_RESIDUE_DEPTH)
    while True:
        s, t = source.refine(depth), target.refine(depth)
        missed = sorted(t.classes - s.image(A).classes)
        if missed:
            return ("missed", missed[0])
        if depth >= limit:
            logger.info("no missed class found up to depth %d", depth)
            return ("measure", str(source.measure * A.det().norm()))
        depth += 1
        logger.debug("residue depth raised to %d", depth)


@dataclass(frozen=True)
class BallAction:
    """A chain ball, the ball it should map onto, and the verdict."""
    ball: Ball
    expected: Ball
    matched: bool
    witness: tuple = None

    def __str__(self):
        text = "{} -> {}: {}".format(
            self.ball, self.expected, "pass" if self.matched else "FAIL")
        if self.witness is not None:
            text += " witness={}".format(self.witness)
        return text


@dataclass(frozen=True)
class DilationCertificate:
    """
    Verdict of is_dilation with one entry per chain ball of a period.

    Parameters
    ----------
    matrix : PadicMatrix
    metric : DeformedMetric
    verdict : bool
    actions : tuple of BallAction
    reason : str
        determinant or integrality failure, empty otherwise

    """
    matrix: PadicMatrix
    metric: object
    verdict: bool
    actions: tuple = field(default_factory=tuple)
    reason: str = ""

    def __bool__(self):
        return self.verdict

    def lines(self):
        out = ["A={} metric=[{}] verdict={}".format(
            self.matrix, self.metric, "pass" if self.verdict else "FAIL")]
        if self.reason:
            out.append("  reason: {}".format(self.reason))
        out.extend("  {}".format(a) for a in self.actions)
        return out


def required_det_valuation(metric):
    """
    Determinant valuation a dilation must have: d / r for a chain of period
    r with equal block sizes, None when the blocks differ in size.

    """
    sizes = {len(b) for b in metric.blocks}
    if len(sizes) != 1:
        return None
    return sizes.pop()


def is_dilation(A, metric, depth=RESIDUE_DEPTH):
    """
    Check that A maps each chain ball of one period onto the next one.

    Parameters
    ----------
    A : PadicMatrix
    metric : DeformedMetric
    depth : int
        residue depth D of the set identities

    Returns
    -------
    DilationCertificate

    Raises
    ------
    SingularMatrixError : det A vanishes at the working precision

    """
    det = A.det()
    if det.is_zero():
        raise SingularMatrixError("is_dilation: A is singular")
    if not A.is_integral():
        return DilationCertificate(A, metric, False,
                                   reason="entry outside Z_p")
    reason = ""
    required = required_det_valuation(metric)
    if required is None or det.valuation != required:
        reason = "v(det A) = {}, required {}".format(det.valuation, required)
        logger.info("is_dilation: %s", reason)
    chain = ball_chain(metric)
    actions = []
    for ball, expected in zip(chain, chain[1:]):
        source = ResidueSet.from_ball(ball, depth)
        target = ResidueSet.from_ball(expected, depth)
        holds, witness = set_identity(A, source, target)
        actions.append(BallAction(ball, expected, holds, witness))
    verdict = not reason and all(a.matched for a in actions)
    logger.debug("is_dilation(%s, %s) = %s", A, metric, verdict)
    return DilationCertificate(A, metric, verdict, tuple(actions), reason)


def cyclic_dilation(p, d):
    """
    Cyclic substitution of the coordinate basis: ones on the superdiagonal
    and p in the lower-left corner. For d = 1 this is [p].

    """
    rows = [[0] * d for _ in range(d)]
    for i in range(d - 1):
        rows[i][i + 1] = 1
    rows[d - 1][0] = p
    return PadicMatrix.from_rationals(rows, p)


def s_matrix():
    return PadicMatrix.from_rationals(MATRIX_S, 2)


def quincunx():
    return PadicMatrix.from_rationals(MATRIX_Q, 2)


def s_dilation_classify(A):
    """
    Congruence test for dilations of the 2-adic metric s.

    Parameters
    ----------
    A : PadicMatrix
        2 x 2 over p = 2

    Returns
    -------
    bool
        True iff A = [[a, b], [c, d]] is integral with a, d even, b odd and
        c = 2 mod 4

    Raises
    ------
    ValueError : A is not a 2 x 2 matrix over p = 2

    """
    if A.p != 2 or A.dim != 2:
        raise ValueError(
            "s_dilation_classify: expected a 2x2 matrix over p=2, got "
            "{0}x{0} over p={1}".format(A.dim, A.p))
    if not A.is_integral():
        return False
    (a, b), (c, d) = A.residues(2)
    return a % 2 == 0 and b % 2 == 1 and c % 4 == 2 and d % 2 == 0


def conjugate_dilation(A, U):
    """
    U^-1 A U, a dilation for the metric x -> m(U x) whenever A is one for m.

    Raises
    ------
    ValueError : U is not a standard isometry

    """
    if not is_isometry_standard(U):
        raise ValueError("conjugate_dilation: U = {} is not in O_d".format(U))
    return U.inverse() @ A @ U


def _coset(level, shift=(0, 0)):
    return ResidueSet.coset(2, 2, 2, level, shift)


def verify_s_actions():
    """The ball actions of S on Z_2^2, Z_2 x 2Z_2 and Z_2 x (1 + 2Z_2)."""
    S = s_matrix()
    strip = ResidueSet(2, 2, 2, frozenset(
        c for c in _coset(0).classes if c[1] % 2 == 0))
    odd = ResidueSet(2, 2, 2, frozenset(
        c for c in _coset(0).classes if c[1] % 2 == 1))
    checks = [
        ("S Z^2 = Z x 2Z", _coset(0), strip),
        ("S (Z x 2Z) = 2Z^2", strip, _coset(1)),
        ("S (Z x (1+2Z)) = (1,0) + 2Z^2", odd, _coset(1, (1, 0))),
    ]
    return [Identity(name, *set_identity(S, src, dst))
            for name, src, dst in checks]


def verify_quincunx_actions():
    """
    The quincunx ball actions modulo 4Z_2^2 and the matrix identities
    Q^2 = [[0, -2], [2, 0]], Q^4 = -4E, |det Q|_2 = 1/2.

    Returns
    -------
    list of Identity

    """
    Q = quincunx()
    even = _coset(1)
    diagonal = even | _coset(1, (1, 1))
    off = _coset(1, (0, 1)) | _coset(1, (1, 0))
    checks = [
        ("Q Z^2 = 2Z^2 u (2Z^2+(1,1))", Q, _coset(0), diagonal),
        ("Q (2Z^2 u (2Z^2+(1,1))) = 2Z^2", Q, diagonal, even),
        ("Q ((2Z^2+(0,1)) u (2Z^2+(1,0))) = 2Z^2+(1,1)", Q, off,
         _coset(1, (1, 1))),
        ("Q^2 Z^2 = 2Z^2", Q ** 2, _coset(0), even),
    ]
    out = [Identity(name, *set_identity(M, src, dst))
           for name, M, src, dst in checks]
    Q2 = PadicMatrix.from_rationals([[0, -2], [2, 0]], 2)
    E4 = PadicMatrix.from_rationals([[-4, 0], [0, -4]], 2)
    out.append(Identity("Q^2 = [[0,-2],[2,0]]", (Q ** 2 - Q2).valuation
                        >= Q.precision))
    out.append(Identity("Q^4 = -4E", (Q ** 4 - E4).valuation >= Q.precision))
    out.append(Identity("|det Q|_2 = 1/2", Q.det().norm() == Fraction(1, 2)))
    return out


def ball_image(A, ball):
    """Predicted image A (n + B_t) = A n + B_(t+1) of a ball under a dilation."""
    metric = ball.metric
    n = PadicVector.from_rationals(ball.center, metric.p, A.precision)
    if metric.U is not None:
        n = metric.U_inverse.apply(n)
    An = metric.transform(A.apply(n))
    return Ball.make(metric, ball.position + 1, An.lift())


def _balls_at(metric, t):
    """All balls at chain position t (levels >= 0) inside Z_p^d."""
    levels = metric.levels(t)
    axes = [range(metric.p ** lev) for lev in levels]
    return [Ball.make(metric, t, c) for c in itertools.product(*axes)]


def is_ball_morphism(A, metric, positions=(1, 2)):
    """
    Every ball inside Z_p^d at the given chain positions maps onto a ball.

    Returns
    -------
    bool

    """
    for t in positions:
        for ball in _balls_at(metric, t):
            expected = ball_image(A, ball)
            depth = max(max(expected.levels), 1)
            holds, witness = set_identity(
                A, ResidueSet.from_ball(ball, depth),
                ResidueSet.from_ball(expected, depth))
            if not holds:
                logger.info("ball %s does not map onto %s: %s",
                            ball, expected, witness)
                return False
    return True


def zero_ball_orbit_check(A, metric, depth=RESIDUE_DEPTH):
    """
    A^j Z_p^d equals the chain ball at position j for j over one period.

    Returns
    -------
    list of Identity

    """
    unit = ResidueSet.coset(metric.p, metric.dim, depth, 0)
    out = []
    for ball in ball_chain(metric):
        j = ball.position
        holds, witness = set_identity(
            A ** j, unit, ResidueSet.from_ball(ball, depth))
        out.append(Identity("A^{} Z^d = {}".format(j, ball), holds, witness))
    return out


def orbit_ball(A, metric, j, n):
    """
    The ball A^j (n + Z_p^d).

    Parameters
    ----------
    A : PadicMatrix
        dilation for ``metric``
    j : int
    n : sequence of rationals
        translation, a representative of Q_p^d / Z_p^d

    Returns
    -------
    Ball

    """
    x = PadicVector.from_rationals(n, metric.p, A.precision)
    y = metric.transform((A ** j).apply(x))
    return Ball.make(metric, j, y.lift())


def digit_set(A):
    """
    Lexicographically first representatives of Z_p^d / A Z_p^d.

    A vector x lies in A Z_p^d iff A^-1 x is integral; candidates run over
    {0, ..., p**v - 1}^d with v = v(det A).

    Returns
    -------
    list of tuple of int
        p**v representatives, the first being 0

    """
    p, d = A.p, A.dim
    v = A.det().valuation
    if v < 0 or not A.is_integral():
        raise ValueError("digit_set: A must be integral, got {}".format(A))
    Ainv = A.inverse()
    out = []
    for x in itertools.product(range(p ** v), repeat=d):
        xv = PadicVector.from_rationals(x, p, A.precision)
        if all(Ainv.apply(xv - PadicVector.from_rationals(
                y, p, A.precision)).valuation < 0 for y in out):
            out.append(x)
        if len(out) == p ** v:
            break
    return out


def s_dilation_sweep(metric):
    """
    Compare s_dilation_classify with is_dilation on all 256 matrices
    modulo 4, entries lifted to their least non-negative representative.

    Returns
    -------
    list of PadicMatrix
        matrices where the two verdicts differ

    """
    disagreements = []
    for entries in itertools.product(range(4), repeat=4):
        A = PadicMatrix.from_rationals([entries[:2], entries[2:]], 2)
        try:
            observed = is_dilation(A, metric).verdict
        except SingularMatrixError:
            observed = False
        if observed != s_dilation_classify(A):
            disagreements.append(A)
    logger.info("s-dilation sweep: %d disagreements", len(disagreements))
    return disagreements
