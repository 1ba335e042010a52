"""
Wavelets on Q_2^2 for the dilations S and Q, and the Vladimirov operator
acting on them.

"""

from fractions import Fraction

from padicwave import DeformedMetric, PadicMatrix, constants
from padicwave.dilation import is_dilation
from padicwave.spectral import apply_D_alpha, eigenvalue, frequency_metric
from padicwave.wavelet import (
    LocallyConstantFunction, WaveletIndex, enumerate_k, inner_product,
    mother_wavelet, squared_norm, wavelet)

# Two metrics on Q_2^2 carry everything below. Both weight the first
# coordinate by q = 2**(-1/2); the second one reads the coordinates through
# the conjugation U = [[1, 0], [1, 1]] first:
s = DeformedMetric(2, (Fraction(1, 2), 0))
q = DeformedMetric(2, (Fraction(1, 2), 0), constants.MATRIX_U)
S = PadicMatrix.from_rationals(constants.MATRIX_S, 2)
Q = PadicMatrix.from_rationals(constants.MATRIX_Q, 2)

# A matrix is a dilation for a metric when it maps every ball of the chain
# onto the next one. is_dilation() returns a certificate listing each ball
# action; print its lines to see why a verdict was reached:
for line in is_dilation(S, s).lines():
    print(line)
# The quincunx matrix Q is not a dilation for s, but it is one for q:
print(bool(is_dilation(Q, s)), bool(is_dilation(Q, q)))

# For a dilation A with |det A|_2 = 1/2 there is a single admissible k, and
# the mother wavelet Psi_k is a character times the unit ball indicator:
k, = enumerate_k(Q)
psi = mother_wavelet(Q, k)
print(k, squared_norm(psi))

# Scaled and translated copies Psi_{k;j,n}(x) = |det A|^(j/2) Psi_k(A^-j x - n)
# are exactly orthonormal. inner_product() returns a cyclotomic value and a
# power of p, so nothing here is rounded:
a = wavelet(Q, WaveletIndex(k, 1, (0, 0)))
b = wavelet(Q, WaveletIndex(k, -2, (Fraction(1, 2), Fraction(1, 2))))
value, exponent = inner_product(a, b)
print(value.is_zero(), squared_norm(a), squared_norm(b))

# Every wavelet is an eigenfunction of D^alpha once frequencies are measured
# in the metric that A^T dilates. For Q and q that metric is q itself:
print(frequency_metric(Q, q))
idx = WaveletIndex(k, 1, (0, 0))
lam = eigenvalue(Q, q, idx, 2)
print(lam, lam.value())
# The eigenvalue is a power of p, so it can be folded into the amplitude:
expected = LocallyConstantFunction(a.p, a.dim, a.L, a.M, a.values,
                                   a.amplitude + lam.exponent)
print(apply_D_alpha(a, 2, q) == expected)
