"""
Distances, balls and isometries of a deformed metric.

"""

import numpy as np

from padicwave import PadicMatrix, PadicVector, complete_flag
from padicwave.metric import (
    Ball, ball_chain, deformed_distance, is_isometry_deformed,
    is_isometry_standard, isometry_oracle, isometry_sweep, maximal_subballs,
    random_isometry)

rng = np.random.default_rng(0)

# The complete flag on Q_3^2 weights the first coordinate by 3**(-1/2). Its
# norms take values in 3**(Z/2), so the chain of balls around 0 shrinks by
# 1/3 in measure at every step rather than by 1/9:
flag = complete_flag(3, 2)
for ball in ball_chain(flag):
    print(ball, ball.measure)

# Every ball splits into p maximal subballs:
for ball in maximal_subballs(Ball.make(flag, 0)):
    print(ball)

x = PadicVector.from_rationals([1, 0], 3)
y = PadicVector.from_rationals([0, 1], 3)
print(deformed_distance(flag, x, y))

# A matrix in GL_2(Z_3) is an isometry of the standard norm, but the deformed
# norm is only preserved by the ones that are upper triangular modulo 3:
upper = PadicMatrix.from_rationals([[1, 1], [0, 1]], 3)
lower = PadicMatrix.from_rationals([[1, 0], [1, 1]], 3)
print(is_isometry_standard(upper), is_isometry_deformed(upper, flag))
print(is_isometry_standard(lower), is_isometry_deformed(lower, flag))

# The classifier is a congruence test. The oracle instead samples vectors
# and compares norms; they should always agree:
M = random_isometry(flag, rng)
print(M, isometry_oracle(M, flag, 500, rng))

# A sweep runs both on every matrix modulo 3**2 and lists disagreements:
print(isometry_sweep(flag, trials=200, rng=rng))
