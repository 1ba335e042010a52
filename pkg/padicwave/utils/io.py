"""
Plain-text formats: rational and matrix literals, metric description files,
structured reports and CSV export of Monna point sets.

A metric description file holds ``key: value`` lines; ``#`` starts a comment.

    prime: 2
    dimension: 2
    weights: 1/2 0
    conjugation: 1 0; 1 1

"""

import logging
from fractions import Fraction

import numpy as np

from ..metric import DeformedMetric
from ..padic import PadicScalar

logger = logging.getLogger(__name__)

METRIC_KEYS = ("prime", "dimension", "weights", "conjugation")


def parse_rational(text):
    """
    Parse "a", "a/b" or a terminating decimal into a Fraction.

    Raises
    ------
    ValueError : text is not a rational literal

    """
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError('"{}" is not a rational number'.format(text))


def parse_vector(text):
    """Comma or whitespace separated rationals."""
    items = str(text).replace(",", " ").split()
    if not items:
        raise ValueError("empty vector literal")
    return tuple(parse_rational(t) for t in items)


def parse_matrix(text):
    """
    Parse rows separated by ";" with entries separated by "," or spaces,
    e.g. "1,-1;1,1".

    Returns
    -------
    tuple of tuple of Fraction

    Raises
    ------
    ValueError : rows are ragged or the matrix is not square

    """
    rows = tuple(parse_vector(r) for r in str(text).split(";") if r.strip())
    if not rows:
        raise ValueError("empty matrix literal")
    if any(len(r) != len(rows) for r in rows):
        raise ValueError('"{}" is not a square matrix'.format(text))
    return rows


def parse_padic(text, precision=None):
    """
    Parse a "p:gamma:digits" literal, optionally re-encoded at ``precision``.

    """
    x = PadicScalar.parse(text)
    if precision is not None:
        x = PadicScalar.from_rational(x.to_fraction(), x.p, precision)
    return x


def format_matrix(rows):
    return ";".join(",".join(str(a) for a in r) for r in rows)


def _parse_fields(lines, source):
    fields = {}
    for number, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ValueError(
                '{}, line {}: expected "key: value", got "{}"'.format(
                    source, number, line))
        key, value = (s.strip() for s in line.split(":", 1))
        if key not in METRIC_KEYS:
            raise ValueError("{}, line {}: unknown key \"{}\"".format(
                source, number, key))
        fields[key] = value
    return fields


def parse_metric(text, source="<metric>"):
    """
    Build a DeformedMetric from the contents of a description file.

    Raises
    ------
    ValueError : missing keys, or weights that do not match the dimension

    """
    fields = _parse_fields(text.splitlines(), source)
    for key in ("prime", "weights"):
        if key not in fields:
            raise ValueError("{}: missing \"{}\"".format(source, key))
    p = int(fields["prime"])
    weights = parse_vector(fields["weights"])
    if "dimension" in fields and int(fields["dimension"]) != len(weights):
        raise ValueError("{}: dimension {} but {} weights".format(
            source, fields["dimension"], len(weights)))
    conjugation = None
    if fields.get("conjugation"):
        conjugation = parse_matrix(fields["conjugation"])
    return DeformedMetric(p, weights, conjugation)


def read_metric(path):
    with open(path) as f:
        text = f.read()
    logger.debug("read metric description %s", path)
    return parse_metric(text, source=path)


def dump_metric(metric):
    lines = [
        "prime: {}".format(metric.p),
        "dimension: {}".format(metric.dim),
        "weights: {}".format(" ".join(str(s) for s in metric.weights)),
    ]
    if metric.conjugation is not None:
        lines.append("conjugation: {}".format(
            "; ".join(" ".join(str(a) for a in r)
                      for r in metric.conjugation)))
    return "\n".join(lines) + "\n"


def write_metric(metric, path):
    with open(path, "w") as f:
        f.write(dump_metric(metric))


class Report:
    """
    Structured text report: a title, then ``key: value`` fields and
    ``PASS``/``FAIL`` check lines in insertion order.

    """

    def __init__(self, title):
        self.title = title
        self.lines = []
        self.failures = 0

    def field(self, key, value):
        self.lines.append("{}: {}".format(key, value))

    def check(self, name, passed, detail=None):
        line = "{} {}".format("PASS" if passed else "FAIL", name)
        if detail is not None:
            line += " ({})".format(detail)
        self.lines.append(line)
        if not passed:
            self.failures += 1

    def extend(self, lines, indent="  "):
        self.lines.extend(indent + line for line in lines)

    def section(self, name):
        self.lines.append("[{}]".format(name))

    @property
    def passed(self):
        return self.failures == 0

    def render(self):
        out = ["# {}".format(self.title)] + self.lines
        out.append("result: {}".format(
            "pass" if self.passed else
            "fail ({} failed)".format(self.failures)))
        return "\n".join(out) + "\n"


def write_report(report, path=None, stream=None):
    """Write a rendered report to ``path`` if given, else to ``stream``."""
    text = report.render()
    if path is not None:
        with open(path, "w") as f:
            f.write(text)
        logger.info("report written to %s", path)
    elif stream is not None:
        stream.write(text)
    return text


def export_points(points, path, m=None, digits=10):
    """
    CSV export of a RealPointSet, one vector per line, with a ``#`` header
    recording A, the digits, T and m.

    Parameters
    ----------
    points : padicwave.monna.RealPointSet
    path : str
    m : int or None
        grid exponent of the accompanying estimate
    digits : int
        decimal places written per coordinate

    """
    header = [
        "A: {}".format(format_matrix(points.meta.get("matrix", ()))),
        "digits: {}".format(" ".join(
            ",".join(str(c) for c in x)
            for x in points.meta.get("digits", ()))),
        "T: {}".format(points.depth),
    ]
    if m is not None:
        header.append("m: {}".format(m))
    np.savetxt(path, points.as_float(), delimiter=",",
               fmt="%.{}f".format(digits), header="\n".join(header))
    logger.info("%d points written to %s", len(points), path)


def export_intervals(pieces, path, header=()):
    """CSV export of (start, end, value) triples from real_image_1d."""
    with open(path, "w") as f:
        for line in header:
            f.write("# {}\n".format(line))
        f.write("start,end,value\n")
        for start, end, value in pieces:
            f.write("{},{},{}\n".format(start, end, value))
