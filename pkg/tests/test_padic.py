from dataclasses import replace
from fractions import Fraction

import pytest

from padicwave import constants, padic
from padicwave.exceptions import PrecisionError, PrimeMismatchError
from padicwave.exceptions import SingularMatrixError
from padicwave.padic import (
    INF, NormExponent, PadicMatrix, PadicScalar, PadicVector,
    UnitRootExponent, character, fractional_part, int_valuation,
    random_scalar, rational_valuation, residue)


prime_params = [2, 3, 5]
prime_ids = [' p = {} '.format(p) for p in prime_params]
prime_fixture = pytest.fixture(scope="module", ids=prime_ids,
                               params=prime_params)


@prime_fixture
def p(request):
    return request.param


def test_from_rational_digits():
    x = PadicScalar.from_rational(Fraction(1, 3), 2, 8)
    assert x.digits == [1, 1, 0, 1, 0, 1, 0, 1]
    assert (x * 3).congruent(1)

    assert PadicScalar.from_rational(-1, 3, 5).digits == [2] * 5


def test_valuation_and_norm():
    x = PadicScalar.from_rational(Fraction(3, 4), 2)
    assert x.valuation == -2
    assert x.norm() == 4
    assert not x.is_integral()

    assert rational_valuation(Fraction(9, 2), 3) == 2
    assert rational_valuation(0, 5) == INF
    assert PadicScalar.zero(7).valuation == INF

    with pytest.raises(ValueError):
        int_valuation(0, 2)


def test_literal():
    x = PadicScalar.from_rational(Fraction(1, 2), 2, 8)
    assert x.to_literal() == "2:-1:1 0 0 0 0 0 0 0 0"
    assert PadicScalar.parse(x.to_literal()) == x

    assert PadicScalar.parse("3:4:").is_zero()
    with pytest.raises(ValueError):
        PadicScalar.parse("2:x:1")
    with pytest.raises(ValueError):
        PadicScalar.from_digits(2, 0, [2])


def test_field_identities(p, rng):
    for _ in range(50):
        x, y, z = (random_scalar(p, rng) for _ in range(3))
        assert ((x + y) - y).congruent(x)
        assert (x * (y + z)).congruent(x * y + x * z)
        assert (x * y).congruent(y * x)
        assert (x * x.inverse()).congruent(1)


case_params = [200, pytest.param(constants.PROPERTY_CASES,
                                 marks=pytest.mark.slow)]
case_ids = [' short ', ' full ']


@pytest.mark.parametrize('cases', case_params, ids=case_ids)
def test_character_additivity(p, rng, cases):
    for _ in range(cases):
        x, y = random_scalar(p, rng, low=-4), random_scalar(p, rng, low=-4)
        assert character(x + y) == character(x) + character(y)
        assert character(-x) == -character(x)


def _low_valuation(p, rng):
    """Valuation in [-8, 8) with 40 known digits, so products stay nonzero."""
    return replace(random_scalar(p, rng, precision=8, low=-8), precision=40)


@pytest.mark.parametrize('cases', case_params, ids=case_ids)
def test_valuation_additivity(p, rng, cases):
    zero = PadicScalar.zero(p)
    for _ in range(cases):
        x, y = _low_valuation(p, rng), _low_valuation(p, rng)
        assert (x * y).valuation == x.valuation + y.valuation
        assert (x * y).norm() == x.norm() * y.norm()
        assert (x * zero).valuation == INF


def test_precision_tracking():
    a = PadicScalar.from_rational(1, 2, 5)
    b = PadicScalar.from_rational(1, 2, 8)
    assert (a + b).precision == 5

    # min(Na, Nb, Na + vb, Nb + va)
    a = PadicScalar.from_rational(Fraction(1, 4), 2, 10)
    b = PadicScalar.from_rational(1, 2, 6)
    assert (a * b).precision == 4

    x = PadicScalar.from_rational(4, 2, 10).inverse()
    assert x.precision == 6
    assert x.to_fraction() == Fraction(1, 4)


def test_arithmetic_errors():
    with pytest.raises(PrecisionError):
        PadicScalar.zero(2).inverse()
    with pytest.raises(PrimeMismatchError):
        PadicScalar.from_rational(1, 2) + PadicScalar.from_rational(1, 3)
    with pytest.raises(PrecisionError):
        PadicScalar.from_rational(1, 2, 4).digit(4)


def test_integer_lift():
    x = PadicScalar.from_rational(-5, 3, 6)
    assert x.to_integer(signed=True) == -5
    assert x.to_integer() == 3 ** 6 - 5

    with pytest.raises(ValueError):
        PadicScalar.from_rational(Fraction(1, 3), 3).to_integer()


def test_residue():
    r = Fraction(7, 4)
    assert residue(r, 2, 1) == r
    assert residue(r, 2, 0) == Fraction(3, 4)
    assert residue(r, 2, -1) == Fraction(1, 4)
    assert residue(0, 2, 3) == 0


def test_fractional_part_and_character():
    assert fractional_part(
        PadicScalar.from_rational(Fraction(5, 4), 2)) == Fraction(1, 4)
    assert fractional_part(
        PadicScalar.from_rational(Fraction(-1, 2), 2)) == Fraction(1, 2)
    assert fractional_part(PadicScalar.from_rational(Fraction(1, 3), 2)) == 0

    e = character(PadicScalar.from_rational(Fraction(3, 8), 2))
    assert e.order == 8
    assert e.value == Fraction(3, 8)


def test_unit_root_exponent():
    assert UnitRootExponent(2, Fraction(5, 4)).value == Fraction(1, 4)
    assert (UnitRootExponent(3, Fraction(1, 3)) * 3).is_trivial()
    with pytest.raises(ValueError):
        UnitRootExponent(3, Fraction(1, 2))


def test_norm_exponent_order():
    assert NormExponent(1, 2) > NormExponent(0, 2)
    assert NormExponent(INF, 2).value() == 0.0
    assert NormExponent(INF, 2).is_infinite()
    assert not NormExponent(0, 2).is_infinite()
    assert NormExponent(Fraction(1, 2), 2).scaled(2) == 1


def test_vector():
    x = PadicVector.from_rationals([Fraction(1, 2), 4], 2)
    assert x.valuation == -1
    assert (x - x).is_zero()
    assert x.dot(x).to_fraction() == Fraction(1, 4) + 16

    with pytest.raises(PrimeMismatchError):
        PadicVector((PadicScalar.from_rational(1, 2),
                     PadicScalar.from_rational(1, 3)))


def test_matrix_inverse_and_det(Q, U):
    assert Q.det().to_integer() == 2
    assert Q.det().valuation == 1
    assert (Q @ Q.inverse()).is_identity()
    assert Q.inverse().scale(2).to_integers() == ((1, 1), (-1, 1))

    assert (U @ Q @ U.inverse()).to_integers() == ((2, -1), (2, 0))
    assert PadicMatrix.identity(3, 3).is_identity()


def test_matrix_powers(Q):
    assert (Q ** 2).to_integers() == ((0, -2), (2, 0))
    assert (Q ** 4).to_integers() == ((-4, 0), (0, -4))
    assert (Q ** -1 @ Q).is_identity()


def test_singular_matrix():
    M = PadicMatrix.from_rationals([[1, 2], [2, 4]], 3)
    assert M.det().is_zero()
    with pytest.raises(SingularMatrixError):
        M.inverse()


def test_functional_forms(Q):
    a = PadicScalar.from_rational(3, 2, 8)
    b = PadicScalar.from_rational(Fraction(1, 2), 2, 8)
    assert padic.add(a, b) == a + b
    assert padic.mul(a, b).to_fraction() == Fraction(3, 2)
    assert padic.neg(a) == -a
    assert padic.inv(b).to_fraction() == 2
    assert padic.valuation(b) == -1
    assert padic.digits_literal(b) == b.to_literal()

    x = PadicVector.from_rationals([1, 0], 2)
    assert padic.valuation(x) == 0
    assert padic.mat_apply(Q, x).lift() == (1, 1)
    assert padic.mat_mul(Q, Q).to_integers() == \
        padic.mat_pow(Q, 2).to_integers()
    assert padic.mat_mul(Q, padic.mat_inv(Q)).is_identity()
    assert padic.det(Q).to_integer() == 2
    assert padic.mat_transpose(Q).to_integers() == ((1, 1), (-1, 1))
    assert padic.mat_valuation(padic.mat_pow(Q, 4)) == 2


if __name__ == '__main__':
    pytest.main([str(__file__.replace('\\', '/')), '-v'])
