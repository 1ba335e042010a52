from fractions import Fraction

import pytest

from padicwave import constants
from padicwave.metric import (
    Ball, DeformedMetric, ball_chain, ball_contains, ball_of, complete_flag,
    deformed_distance, group_closure_check, is_isometry_deformed,
    is_isometry_standard, isometry_oracle, isometry_sweep, maximal_subballs,
    module_volume, parent_ball, random_isometry, standard_ball)
from padicwave.padic import INF, PadicMatrix, PadicVector, random_vector

HALF = Fraction(1, 2)


def _matrix(rows, p=2):
    return PadicMatrix.from_rationals(rows, p)


def _vector(values, p=2):
    return PadicVector.from_rationals(values, p)


def test_norm(metric_s, metric_q):
    assert metric_s.norm(_vector([1, 0])).exponent == HALF
    assert metric_s.norm(_vector([0, 1])).exponent == 0
    assert metric_s.norm(_vector([2, 1])).exponent == 0
    assert metric_s.norm(_vector([0, 0])).exponent == INF

    # U (1, 1) = (1, 0)
    assert metric_q.norm(_vector([1, 1])).exponent == HALF
    assert deformed_distance(metric_q, _vector([1, 1]), _vector([0, 0])) \
        == metric_q.norm(_vector([1, 1]))


def test_chain(metric_s):
    assert metric_s.chain_weights == (0, HALF)
    assert metric_s.period == 2
    assert metric_s.levels(0) == (0, 0)
    assert metric_s.levels(1) == (0, 1)
    assert metric_s.levels(2) == (1, 1)
    assert metric_s.levels(-1) == (-1, 0)
    assert metric_s.threshold(1) == HALF
    assert metric_s.threshold(3) == 1 + HALF

    assert metric_s.position_of(Fraction(1, 4)) == 1
    assert metric_s.position_of(1) == 2
    assert metric_s.position_of(Fraction(-1, 2)) == -1
    with pytest.raises(ValueError):
        metric_s.position_of(INF)


def test_balls(metric_s):
    chain = ball_chain(metric_s)
    assert [b.measure for b in chain] == [1, HALF, Fraction(1, 4)]
    assert chain[1].diameter.exponent == HALF
    assert chain[0].contains_ball(chain[1])
    assert not chain[1].contains_ball(chain[0])
    assert parent_ball(chain[2]) == chain[1]

    assert chain[1].residues(1) == {(0, 0), (1, 0)}
    assert standard_ball(metric_s, 1) == chain[2]

    subballs = maximal_subballs(chain[0])
    assert [b.center for b in subballs] == [(0, 0), (0, 1)]
    assert subballs[0].is_disjoint(subballs[1])
    assert sum(b.measure for b in subballs) == chain[0].measure


def test_conjugated_subballs(metric_q):
    subballs = maximal_subballs(Ball.make(metric_q, 0))
    assert [b.residues(1) for b in subballs] == [
        {(0, 0), (1, 1)}, {(0, 1), (1, 0)}]


def test_ball_of(metric_q, rng):
    for _ in range(20):
        x = random_vector(2, 2, rng)
        y = random_vector(2, 2, rng)
        r = deformed_distance(metric_q, x, y)
        if r.exponent == INF:
            continue
        ball = ball_of(metric_q, x, r)
        assert ball.contains(x)
        assert ball.contains(y)
        assert ball_contains(ball, y)


@pytest.mark.parametrize('metric', [
    DeformedMetric(2, (HALF, 0)),
    DeformedMetric(2, (HALF, 0), ((1, 0), (1, 1))),
    complete_flag(3, 3),
], ids=[' s ', ' q ', ' flag p=3 d=3 '])
@pytest.mark.parametrize('cases', [
    100, pytest.param(constants.PROPERTY_CASES, marks=pytest.mark.slow),
], ids=[' short ', ' full '])
def test_ultrametric_inequality(metric, rng, cases):
    p, d = metric.p, metric.dim
    for _ in range(cases):
        x, y, z = (random_vector(p, d, rng) for _ in range(3))
        dxz = deformed_distance(metric, x, z).exponent
        dxy = deformed_distance(metric, x, y).exponent
        dyz = deformed_distance(metric, y, z).exponent
        assert dxz >= min(dxy, dyz)
        assert dxy == deformed_distance(metric, y, x).exponent


def test_metric_validation():
    with pytest.raises(ValueError):
        DeformedMetric(2, (1, 0))
    with pytest.raises(ValueError):
        DeformedMetric(2, (0, 0), ((2, 0), (0, 1)))
    with pytest.raises(ValueError):
        DeformedMetric(2, (0, 0), ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    assert DeformedMetric(2, (0, 0), ((1, 0), (0, 1))).conjugation is None


def test_conjugation_and_dual(metric_s, metric_q):
    assert metric_q.conjugated(metric_q.U_inverse) == metric_s
    assert metric_s.conjugated(((1, 0), (1, 1))) == metric_q
    assert metric_s.dual().weights == (0, HALF)
    assert metric_q.dual().conjugation == ((1, -1), (0, 1))


def test_complete_flag():
    flag = complete_flag(3, 3)
    assert flag.weights == (Fraction(2, 3), Fraction(1, 3), 0)
    assert flag.is_complete_flag()
    assert not DeformedMetric.standard(2, 2).is_complete_flag()
    assert DeformedMetric.standard(2, 2).period == 1


def test_standard_isometry():
    assert is_isometry_standard(_matrix([[1, 0], [1, 1]]))
    assert not is_isometry_standard(_matrix([[2, 0], [0, 1]]))
    assert not is_isometry_standard(_matrix([[HALF, 0], [0, 2]]))


def test_deformed_isometry(metric_s, metric_q):
    assert is_isometry_deformed(_matrix([[1, 2], [0, 1]]), metric_s)
    assert is_isometry_deformed(_matrix([[1, 1], [2, 1]]), metric_s)
    assert not is_isometry_deformed(_matrix([[1, 0], [1, 1]]), metric_s)
    assert not is_isometry_deformed(_matrix([[2, 0], [0, 1]]), metric_s)

    # U^-1 [[1, 1], [0, 1]] U = [[2, 1], [-1, 0]]
    assert is_isometry_deformed(_matrix([[2, 1], [-1, 0]]), metric_q)
    assert not is_isometry_deformed(_matrix([[1, 1], [0, 1]]), metric_q)


def test_oracle(metric_s, rng):
    assert isometry_oracle(_matrix([[1, 2], [0, 1]]), metric_s, 200, rng)
    assert not isometry_oracle(_matrix([[1, 0], [1, 1]]), metric_s, 200, rng)
    assert not isometry_oracle(_matrix([[2, 0], [0, 1]]), metric_s, 200, rng)

    # non-integral matrices take the exact sampling path
    assert not isometry_oracle(_matrix([[HALF, 0], [0, 1]]), metric_s, 50,
                               rng)
    with pytest.raises(ValueError):
        isometry_oracle(_matrix([[1, 0], [0, 1]]), metric_s, 0, rng)


def test_random_isometries(metric_q, flag3, rng):
    for metric in (metric_q, flag3):
        for _ in range(10):
            M = random_isometry(metric, rng)
            assert is_isometry_deformed(M, metric)
            assert isometry_oracle(M, metric, 100, rng)
        assert group_closure_check(metric, rng, samples=10)


def test_isometry_sweep_p2(rng):
    assert isometry_sweep(complete_flag(2, 2), level=2, trials=1000,
                          rng=rng) == []


@pytest.mark.slow
def test_isometry_sweep_p3(rng):
    assert isometry_sweep(complete_flag(3, 2), level=2, trials=1000,
                          rng=rng) == []


def test_module_volume(Q):
    assert module_volume([[2, 0], [0, 1]], p=2) == HALF
    assert module_volume([[3, 0], [0, 1]], p=2) == 1
    assert module_volume([[HALF, 0], [0, 1]], p=2) == 2
    assert module_volume([[1, 1], [1, 1]], p=2) == 0
    assert module_volume(Q) == HALF
    with pytest.raises(ValueError):
        module_volume([[1, 0], [0, 1]])


if __name__ == '__main__':
    pytest.main([str(__file__.replace('\\', '/')), '-v'])
