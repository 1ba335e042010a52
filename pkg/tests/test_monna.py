import itertools
from fractions import Fraction

import pytest

from padicwave import constants
from padicwave.exceptions import DigitError, GuardError, PrecisionError
from padicwave.monna import (
    DigitSystem, ball_image_points, default_digits, det_compatibility,
    digit_expansion, estimate_measure, haar_image_check, measure_conservation,
    monna_1d, occupied_cells, overlap_measure, real_image_1d, resum, rho,
    rho_translates, sample_R)
from padicwave.padic import PadicScalar, PadicVector, random_scalar
from padicwave.padic import random_vector
from padicwave.wavelet import WaveletIndex, mother_wavelet, wavelet

HALF = Fraction(1, 2)


@pytest.fixture(scope="module")
def binary():
    return DigitSystem(2, ((2,),), ((0,), (1,)))


@pytest.fixture(scope="module")
def twin_dragon(Q):
    return DigitSystem.standard(Q)


def test_digit_system(Q):
    system = DigitSystem.standard(Q)
    assert system.matrix == ((1, -1), (1, 1))
    assert system.digits == ((0, 0), (0, 1))
    assert system.det == 2
    assert system.dim == 2
    assert system.digit_of((1, 0)) == (0, 1)
    assert system.digit_of((1, 1)) == (0, 0)

    assert default_digits(Q) == system
    assert DigitSystem.alternative(3, 2).digits == ((0,), (2,), (4,))


@pytest.mark.parametrize('matrix, digits', [
    (((4,),), ((0,), (1,))),
    (((2,),), ((0,), (1,), (3,))),
    (((2,),), ((1,), (0,))),
    (((2,),), ((0,), (2,))),
    (((Fraction(1, 2),),), ((0,), (1,))),
    (((1, -1), (1, 1)), ((0, 0), (1,))),
], ids=[' det 4 ', ' three digits ', ' nonzero first digit ',
        ' congruent digits ', ' fractional matrix ', ' ragged digits '])
def test_digit_system_invariants(matrix, digits):
    with pytest.raises(DigitError):
        DigitSystem(2, matrix, digits)


def test_expansion_resums(twin_dragon, rng):
    for _ in range(10):
        x = random_vector(2, 2, rng, precision=20, low=0)
        expansion = digit_expansion(x, twin_dragon, 15)
        assert expansion.gamma == 0
        assert expansion.depth == 15
        # Q**16 = 256 E
        assert (resum(expansion, twin_dragon) - x).valuation >= 8


def test_expansion_of_fractions(binary):
    x = PadicVector.from_rationals([Fraction(3, 4)], 2, 8)
    expansion = digit_expansion(x, binary, 5)
    assert expansion.gamma == -2
    assert expansion.digits[:3] == ((1,), (1,), (0,))
    with pytest.raises(PrecisionError):
        digit_expansion(x, binary, 6)


def test_rho(binary, twin_dragon):
    x = PadicVector.from_rationals([3], 2, 8)
    assert rho(x, binary, 7) == (Fraction(3, 4),)
    y = PadicVector.from_rationals([0, 1], 2, 20)
    assert rho(y, twin_dragon, 5) == (HALF, HALF)


def test_monna_1d(binary, rng):
    assert monna_1d(PadicScalar.from_rational(3, 2, 8)) == Fraction(3, 4)
    assert monna_1d(PadicScalar.from_rational(-1, 2, 8)) == \
        1 - Fraction(1, 256)
    assert monna_1d(PadicScalar.from_rational(HALF, 2, 8)) == 1
    assert monna_1d(PadicScalar.zero(2)) == 0
    assert monna_1d(PadicScalar.from_rational(Fraction(3, 4), 2, 8),
                    binary) == 3

    for _ in range(20):
        x = random_scalar(2, rng, precision=10, low=0)
        assert monna_1d(x, binary) == monna_1d(x)


def test_rho_translates(binary, twin_dragon):
    assert rho_translates(binary, 2) == [(0,), (2,), (1,), (3,)]
    assert len(set(rho_translates(twin_dragon, 3))) == 8


def test_sample_points(binary, twin_dragon):
    points = sample_R(binary, 4)
    assert len(points) == 16
    assert points.denominator == 16
    assert [points.point(i)[0] for i in range(16)] == \
        [Fraction(i, 16) for i in range(16)]
    assert points.provenance(5) == (0, 1, 0, 1)

    points = sample_R(twin_dragon, 2)
    assert points.point(1) == (HALF, 0)
    assert points.as_float().shape == (4, 2)


def test_sample_guard(binary):
    with pytest.raises(GuardError):
        sample_R(binary, 23)
    with pytest.raises(ValueError):
        sample_R(binary, 0)


def test_unit_interval(binary):
    points = sample_R(binary, 12)
    for m in range(1, 12):
        estimate = estimate_measure(points, m)
        assert estimate.outer == 1
        assert 1 - Fraction(2, 2 ** m) <= estimate.inner <= 1
        assert estimate.brackets(1)
    assert overlap_measure(binary, (1,), 12, 6, points) == 0
    with pytest.raises(ValueError):
        overlap_measure(binary, (0,), 12, 6, points)


def test_wide_digits_fail():
    wide = DigitSystem(2, ((2,),), ((0,), (3,)))
    outer = estimate_measure(sample_R(wide, 12), 6).outer
    assert outer > constants.FAILED_AREA_BOUND
    assert outer == 3


def test_estimates_decrease(twin_dragon):
    points = sample_R(twin_dragon, 12)
    outer = [estimate_measure(points, m).outer for m in range(2, 7)]
    assert outer == sorted(outer, reverse=True)
    assert outer[-1] >= 1
    for k in ((1, 0), (0, 1), (1, 1)):
        shared = [overlap_measure(twin_dragon, k, 12, m, points)
                  for m in range(2, 7)]
        assert shared == sorted(shared, reverse=True)


@pytest.mark.slow
def test_twin_dragon_tile(twin_dragon):
    T, m = constants.MONNA_DEFAULTS[2]
    points = sample_R(twin_dragon, T)
    fine = estimate_measure(points, m)
    coarse = estimate_measure(points, m - 1)
    low, high = constants.AREA_RANGE
    assert low <= fine.outer <= high
    assert fine.inner <= 1 <= fine.outer
    assert fine.outer <= coarse.outer

    neighbours = [k for k in itertools.product((-1, 0, 1), repeat=2) if any(k)]
    assert len(neighbours) == 8
    for k in neighbours:
        now = overlap_measure(twin_dragon, k, T, m, points)
        before = overlap_measure(twin_dragon, k, T, m - 1, points)
        assert now <= constants.OVERLAP_BOUND
        assert now <= before


@pytest.mark.parametrize('T, m', [
    (12, 35),
    pytest.param(*constants.MONNA_DEFAULTS[1], marks=pytest.mark.slow),
], ids=[' T=12 m=35 ', ' T=22 m=10 '])
def test_cells_beyond_int64(T, m):
    # A = [6]: numerators reach 6**T, and x * 2**m leaves the int64 range
    system = DigitSystem(2, ((6,),), ((0,), (1,)))
    points = sample_R(system, T)
    scale = 2 ** m
    want = sorted({int(n) * scale // points.denominator
                   for n in points.numerators[:, 0]})
    cells = occupied_cells(points, m)
    assert cells[:, 0].tolist() == want
    assert estimate_measure(points, m).outer == len(want) * Fraction(1, scale)

    image = ball_image_points(system, 1, (0,), T, points)
    last = len(points) - 1
    assert image.point(last)[0] == points.point(last)[0] / 6


def test_det_compatibility(Q):
    assert det_compatibility(Q)
    assert det_compatibility(((2,),), 2)
    assert det_compatibility(((0, 1), (-2, 0)), 2)
    assert not det_compatibility(((6,),), 2)
    assert not det_compatibility(((0,),), 2)


def test_real_images(binary, Q):
    assert haar_image_check()

    A = binary.padic_matrix()
    wide = DigitSystem.alternative(2, 3)
    three_halves = Fraction(3, 2)
    assert real_image_1d(mother_wavelet(A, (1,)), wide) == [
        (0, three_halves, 1), (three_halves, 3, -1)]

    with pytest.raises(ValueError):
        real_image_1d(wavelet(A, WaveletIndex((1,), 1, (0,))), binary)
    with pytest.raises(DigitError):
        real_image_1d(mother_wavelet(Q, (0, 1)), binary)
    with pytest.raises(DigitError):
        real_image_1d(mother_wavelet(A, (1,)),
                      DigitSystem(3, ((3,),), ((0,), (1,), (5,))))


def test_measure_conservation(binary):
    estimate, haar = measure_conservation(binary, 1, (0,), 8, 6)
    assert (estimate.outer, haar) == (HALF, HALF)
    estimate, haar = measure_conservation(binary, -1, (1,), 8, 6)
    assert (estimate.outer, haar) == (2, 2)

    image = ball_image_points(binary, -1, (1,), 8)
    assert min(image.point(i)[0] for i in range(len(image))) == 2


if __name__ == '__main__':
    pytest.main([str(__file__.replace('\\', '/')), '-v'])
