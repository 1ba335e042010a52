from fractions import Fraction

import numpy as np
import pytest

from padicwave import constants
from padicwave.dilation import cyclic_dilation
from padicwave.metric import DeformedMetric, complete_flag
from padicwave.padic import PadicMatrix


@pytest.fixture(scope="module")
def S():
    return PadicMatrix.from_rationals(constants.MATRIX_S, 2)


@pytest.fixture(scope="module")
def Q():
    return PadicMatrix.from_rationals(constants.MATRIX_Q, 2)


@pytest.fixture(scope="module")
def U():
    return PadicMatrix.from_rationals(constants.MATRIX_U, 2)


@pytest.fixture(scope="module")
def metric_s():
    return DeformedMetric(2, (Fraction(1, 2), Fraction(0)))


@pytest.fixture(scope="module")
def metric_q():
    return DeformedMetric(2, (Fraction(1, 2), Fraction(0)),
                          constants.MATRIX_U)


@pytest.fixture(scope="module")
def flag3():
    return complete_flag(3, 2)


@pytest.fixture(scope="module")
def cyclic3():
    return cyclic_dilation(3, 2)


@pytest.fixture
def rng():
    return np.random.default_rng(constants.DEFAULT_SEED)
