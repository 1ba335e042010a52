from fractions import Fraction
from os.path import join, abspath, dirname

# Arithmetic
DEFAULT_PRECISION = 32  # p-adic digits carried by default

# Residue enumeration for ball identities (classes modulo p**depth)
RESIDUE_DEPTH = 2
MAX_RESIDUE_DEPTH = 4

# Desk-scale guards
MAX_FOURIER_DIGITS = 8  # M + L for character sums
MAX_SERIES_POINTS = 2 ** 22  # p**T for Monna point sets
MAX_CELLS = 2 ** 20  # cells enumerated for a single test function

# Suite defaults
DEFAULT_SCALES = 3
DEFAULT_DEPTH = 2
DEFAULT_TRIALS = 1000
DEFAULT_SEED = 0
FLOAT_TOLERANCE = 1e-9
PROPERTY_CASES = 10 ** 4  # random cases per core identity in the full suite

# Monna defaults, keyed by dimension: (series depth T, grid exponent m)
MONNA_DEFAULTS = {1: (22, 10), 2: (20, 7)}
MONNA_FALLBACK = (12, 5)

# Acceptance thresholds for the twin dragon tile
AREA_RANGE = (Fraction(9, 10), Fraction(13, 10))
OVERLAP_BOUND = Fraction(1, 10)
FAILED_AREA_BOUND = Fraction(3, 2)

# Default weight exponent for the two dimensional metric s (q = p**(-1/2))
DEFAULT_WEIGHT = Fraction(1, 2)

# Named matrices (integer rows)
MATRIX_S = ((0, 1), (2, 0))
MATRIX_Q = ((1, -1), (1, 1))
MATRIX_U = ((1, 0), (1, 1))
MATRIX_ALIASES = {
    's': 'S',
    'q': 'Q',
    'quincunx': 'Q',
    'u': 'U',
    'uqu': 'UQU',
    'cyclic': 'cyclic',
}

# Exit codes
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2

# Paths to packaged files
PACKAGE_ROOT = dirname(abspath(__file__))
DATA_DIR = join(PACKAGE_ROOT, "data")
