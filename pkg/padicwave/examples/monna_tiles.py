"""
Map p-adic points to R^d through digit expansions, and estimate whether the
resulting tile has measure one.

"""

from fractions import Fraction
from os.path import join
from tempfile import gettempdir

from padicwave import PadicMatrix, PadicScalar, constants
from padicwave.monna import (
    DigitSystem, estimate_measure, haar_image_check, monna_1d,
    overlap_measure, rho, sample_R)
from padicwave.padic import PadicVector
from padicwave.utils.io import export_points

# In one dimension rho is the classical Monna map: the base-p digits of x are
# mirrored around the radix point. 3 = 1 + 1*2 in Z_2, so it lands on 3/4:
print(monna_1d(PadicScalar.from_rational(3, 2)))
# Negative powers of p move to the left of the radix point:
print(monna_1d(PadicScalar.from_rational(Fraction(1, 2), 2)))

# With A = [2] and digits {0, 1} the 2-adic mother wavelet becomes the Haar
# wavelet on [0, 1):
print(haar_image_check())

# In two dimensions the quincunx matrix with its lexicographic digits gives
# the twin dragon. rho() returns exact rationals:
Q = PadicMatrix.from_rationals(constants.MATRIX_Q, 2)
twin_dragon = DigitSystem.standard(Q)
print(twin_dragon)
print(rho(PadicVector.from_rationals([0, 1], 2), twin_dragon, 8))

# The tile R = rho(Z_2^2) is sampled by truncating every series after T
# digits. Outer box counts shrink towards the measure of R as the grid
# gets finer; the translates R + k should overlap in ever less area:
T, m = 14, 6
points = sample_R(twin_dragon, T)
for grid in range(m - 2, m + 1):
    estimate = estimate_measure(points, grid)
    print(grid, estimate.outer, estimate.inner)
print(overlap_measure(twin_dragon, (1, 0), T, m, points))

# Digits are not unique. Swapping 1 for 3 in one dimension triples the tile,
# and rho no longer conserves measure:
wide = DigitSystem.alternative(2, 3)
print(estimate_measure(sample_R(wide, 12), 6).outer)

# Point sets can be written to CSV for plotting elsewhere. The header records
# A, the digits, T and m:
root = gettempdir()
export_points(points, join(root, "twin_dragon.csv"), m)
