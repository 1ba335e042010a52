from os.path import isfile

from sympy import isprime

from .. import config, constants
from ..dilation import conjugate_dilation, cyclic_dilation
from ..metric import DeformedMetric, complete_flag
from ..padic import PadicMatrix
from .io import parse_matrix, parse_metric, parse_rational, parse_vector, \
    read_metric


def check_prime(p):
    """
    Check that p is a prime number.

    Parameters
    ----------
    p : int or str

    Returns
    -------
    p : int

    Raises
    ------
    ValueError : p is not a prime

    """
    try:
        p = int(p)
    except (TypeError, ValueError):
        raise ValueError('prime: "{}" is not an integer'.format(p))
    if not isprime(p):
        raise ValueError("prime: {} is not a prime number".format(p))
    return p


def check_positive(name, value):
    """Check that ``value`` is a positive integer; return it as int."""
    try:
        value = int(value)
    except (TypeError, ValueError):
        raise ValueError('{}: "{}" is not an integer'.format(name, value))
    if value < 1:
        raise ValueError("{} must be positive, got {}".format(name, value))
    return value


def check_alpha(alpha):
    """
    Parse the order of the Vladimirov operator.

    Parameters
    ----------
    alpha : str, int or Fraction
        rational, e.g. "1/2"

    Returns
    -------
    alpha : fractions.Fraction

    Raises
    ------
    ValueError : alpha is not a non-negative rational

    """
    alpha = parse_rational(alpha)
    if alpha < 0:
        raise ValueError("alpha must be non-negative, got {}".format(alpha))
    return alpha


def check_matrix(matrix, p, d):
    """
    Resolve a matrix alias or inline literal to a PadicMatrix.

    Parameters
    ----------
    matrix : str
        one of the aliases S, Q, U, UQU (U Q U^-1), cyclic (case-insensitive),
        or rows such as "1,-1;1,1"
    p : int
    d : int

    Returns
    -------
    A : PadicMatrix

    Raises
    ------
    ValueError : unknown alias, alias unavailable for (p, d), or a literal of
        the wrong size

    """
    name = constants.MATRIX_ALIASES.get(str(matrix).strip().lower())
    if name == "cyclic":
        return cyclic_dilation(p, d)
    if name is not None:
        if (p, d) != (2, 2):
            raise ValueError(
                'matrix "{}" is defined for p=2, d=2 only'.format(name))
        Q = PadicMatrix.from_rationals(constants.MATRIX_Q, 2)
        U = PadicMatrix.from_rationals(constants.MATRIX_U, 2)
        named = {
            "S": PadicMatrix.from_rationals(constants.MATRIX_S, 2),
            "Q": Q,
            "U": U,
            "UQU": conjugate_dilation(Q, U.inverse()),
        }
        return named[name]
    try:
        rows = parse_matrix(matrix)
    except ValueError:
        raise ValueError(
            '"{}" is neither a matrix alias ({}) nor a matrix literal'.format(
                matrix, ", ".join(sorted(set(
                    constants.MATRIX_ALIASES.values())))))
    if len(rows) != d:
        raise ValueError("matrix {} is not {}x{}".format(matrix, d, d))
    return PadicMatrix.from_rationals(rows, p)


def check_metric(metric, p=None, d=None):
    """
    Resolve a metric description.

    Parameters
    ----------
    metric : str or None
        a packaged name (standard, s, q, flag), a path to a description file,
        or inline weights "w_1,...,w_d" optionally followed by "|" and the rows
        of a conjugation; None gives the standard metric
    p, d : int or None
        prime and dimension of the run; the standard and flag metrics are
        rebuilt for them when they differ from the packaged files

    Returns
    -------
    metric : DeformedMetric

    Raises
    ------
    ValueError : unknown name, malformed description, or a prime or dimension
        that disagrees with (p, d)

    """
    if metric is None:
        metric = "standard"
    key = str(metric).strip().lower()
    if key in config.METRIC_FILES:
        resolved = read_metric(config.METRIC_FILES[key])
        p = resolved.p if p is None else p
        d = resolved.dim if d is None else d
        if (resolved.p, resolved.dim) != (p, d):
            if key == "standard":
                resolved = DeformedMetric.standard(p, d)
            elif key == "flag":
                resolved = complete_flag(p, d)
    elif isfile(metric):
        resolved = read_metric(metric)
    else:
        if p is None:
            raise ValueError(
                "inline metric \"{}\" needs a prime".format(metric))
        weights, _, conjugation = str(metric).partition("|")
        text = "prime: {}\nweights: {}\n".format(
            p, " ".join(str(s) for s in parse_vector(weights)))
        if conjugation.strip():
            text += "conjugation: {}\n".format(conjugation)
        resolved = parse_metric(text, source="--metric")
    if p is not None and resolved.p != p:
        raise ValueError("metric is over p={} but the run uses p={}".format(
            resolved.p, p))
    if d is not None and resolved.dim != d:
        raise ValueError("metric has dimension {} but the run uses d={}".format(
            resolved.dim, d))
    return resolved


def check_digits(digits, d):
    """
    Parse a digit list "0,0;0,1" (vectors separated by ";").

    Returns
    -------
    tuple of tuple of int

    Raises
    ------
    ValueError : non-integer entries or vectors of the wrong dimension

    """
    out = []
    for item in str(digits).split(";"):
        if not item.strip():
            continue
        vec = parse_vector(item)
        if len(vec) != d or any(c.denominator != 1 for c in vec):
            raise ValueError(
                'digit "{}" is not an integer vector of dimension {}'.format(
                    item.strip(), d))
        out.append(tuple(int(c) for c in vec))
    if not out:
        raise ValueError("digits: empty list")
    return tuple(out)


def check_layer(layer):
    """Check the evaluation layer of D^alpha ("auto", "exact" or "float")."""
    if layer not in ("auto", "exact", "float"):
        raise ValueError(
            'layer: expected "auto", "exact" or "float", got "{}"'.format(
                layer))
    return layer
