__version__ = '0.1.0'
from .padic import PadicScalar, PadicVector, PadicMatrix
from .cyclotomic import Cyclotomic
from .metric import DeformedMetric, Ball, deformed_distance, complete_flag
from .dilation import is_dilation, cyclic_dilation, s_matrix, quincunx
from .wavelet import LocallyConstantFunction, WaveletIndex, wavelet
from .wavelet import mother_wavelet, inner_product, orthonormality_suite
from .spectral import fourier, inverse_fourier, apply_D_alpha, eigen_check
from .monna import DigitSystem, digit_expansion, rho, monna_1d, sample_R
from . import constants, config
