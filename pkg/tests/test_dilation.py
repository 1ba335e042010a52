from fractions import Fraction

import pytest

from padicwave.dilation import (
    ResidueSet, ball_image, conjugate_dilation, cyclic_dilation, digit_set,
    is_ball_morphism, is_dilation, orbit_ball, required_det_valuation,
    s_dilation_classify, s_dilation_sweep, set_identity, verify_quincunx_actions,
    verify_s_actions, zero_ball_orbit_check)
from padicwave.exceptions import SingularMatrixError
from padicwave.metric import Ball, DeformedMetric, complete_flag
from padicwave.padic import PadicMatrix


def _matrix(rows, p=2):
    return PadicMatrix.from_rationals(rows, p)


def test_residue_set():
    unit = ResidueSet.coset(2, 2, 2, 0)
    assert len(unit) == 16
    assert unit.measure == 1
    even = ResidueSet.coset(2, 2, 2, 1)
    assert even.measure == Fraction(1, 4)
    assert even.refine(3).measure == even.measure
    assert (even | ResidueSet.coset(2, 2, 2, 1, (1, 1))).measure == \
        Fraction(1, 2)
    with pytest.raises(ValueError):
        even.refine(1)


def test_set_identity_witness(S):
    unit = ResidueSet.coset(2, 2, 2, 0)
    holds, witness = set_identity(S, unit, unit)
    assert not holds
    assert witness[0] == "missed"

    holds, witness = set_identity(S, unit, ResidueSet.coset(2, 2, 2, 1))
    assert not holds
    assert witness[0] == "outside"


def test_known_dilations(S, Q, metric_s, metric_q, flag3, cyclic3):
    assert is_dilation(S, metric_s)
    assert is_dilation(Q, metric_q)
    assert is_dilation(cyclic3, flag3)
    assert is_dilation(cyclic_dilation(3, 1), DeformedMetric.standard(3, 1))
    assert is_dilation(cyclic_dilation(3, 3), complete_flag(3, 3))

    assert not is_dilation(Q, metric_s)
    cert = is_dilation(S, DeformedMetric.standard(2, 2))
    assert not cert.verdict
    assert cert.reason
    assert not is_dilation(_matrix([[Fraction(1, 2), 0], [0, 4]]), metric_s)


def test_certificate_lines(S, metric_s):
    cert = is_dilation(S, metric_s)
    lines = cert.lines()
    assert "verdict=pass" in lines[0]
    assert len(cert.actions) == metric_s.period
    assert all(a.matched for a in cert.actions)


def test_singular(metric_s):
    with pytest.raises(SingularMatrixError):
        is_dilation(_matrix([[1, 1], [1, 1]]), metric_s)


def test_required_det_valuation(metric_s, flag3):
    assert required_det_valuation(metric_s) == 1
    assert required_det_valuation(DeformedMetric.standard(2, 3)) == 3
    assert required_det_valuation(
        DeformedMetric(2, (Fraction(1, 2), 0, 0))) is None


def test_cyclic_dilation():
    assert cyclic_dilation(2, 1).to_integers() == ((2,),)
    assert cyclic_dilation(3, 3).to_integers() == (
        (0, 1, 0), (0, 0, 1), (3, 0, 0))


def test_s_classification(S, Q, U):
    assert s_dilation_classify(S)
    assert not s_dilation_classify(Q)
    UQU = conjugate_dilation(Q, U.inverse())
    assert UQU.to_integers() == ((2, -1), (2, 0))
    assert s_dilation_classify(UQU)
    with pytest.raises(ValueError):
        s_dilation_classify(cyclic_dilation(3, 2))


def test_conjugate_dilation(Q, U, metric_s):
    assert is_dilation(conjugate_dilation(Q, U.inverse()), metric_s)
    with pytest.raises(ValueError):
        conjugate_dilation(Q, _matrix([[2, 0], [0, 1]]))


@pytest.mark.slow
def test_s_dilation_sweep(metric_s):
    assert s_dilation_sweep(metric_s) == []


def test_ball_actions():
    assert all(i.holds for i in verify_s_actions())
    assert all(i.holds for i in verify_quincunx_actions())


def test_ball_morphism(S, Q, metric_s, metric_q):
    assert is_ball_morphism(S, metric_s)
    assert is_ball_morphism(Q, metric_q)
    assert all(i.holds for i in zero_ball_orbit_check(S, metric_s))
    assert all(i.holds for i in zero_ball_orbit_check(Q, metric_q))

    ball = Ball.make(metric_s, 1, (1, 0))
    assert ball_image(S, ball) == Ball.make(metric_s, 2, (0, 2))


def test_orbit_ball(S, metric_s):
    assert orbit_ball(S, metric_s, 1, (0, 0)) == Ball.make(metric_s, 1)
    assert orbit_ball(S, metric_s, 2, (0, 0)) == Ball.make(metric_s, 2)
    assert orbit_ball(S, metric_s, -1, (0, 0)).measure == 2


def test_digit_set(S, Q, flag3):
    assert digit_set(Q) == [(0, 0), (0, 1)]
    assert digit_set(S) == [(0, 0), (0, 1)]
    assert digit_set(cyclic_dilation(3, 1)) == [(0,), (1,), (2,)]
    assert len(digit_set(_matrix([[2, 0], [0, 2]]))) == 4
    with pytest.raises(ValueError):
        digit_set(_matrix([[Fraction(1, 2), 0], [0, 1]]))


if __name__ == '__main__':
    pytest.main([str(__file__.replace('\\', '/')), '-v'])
