"""
Numerical tolerances, caps and grid constants shared by the workbench modules.
"""

# Largest matrix dimension any operation accepts
MAX_DIM = 4096

# Hermitian check: ||A - A*||_max <= HERMITIAN_TOL * (1 + ||A||_max)
HERMITIAN_TOL = 1e-12

# Absolute tolerance used when comparing polynomial coefficients
COEFF_TOL = 1e-12

# Largest exponent the polynomial parser accepts
MAX_EXPONENT = 64

# Largest number of sites sup_norm handles
MAX_SUP_NORM_SITES = 4

# Per-site (theta, phi) grid of the sup-norm search and its seed count
SUP_NORM_GRID = (48, 96)
SUP_NORM_SEEDS = 20

# Budget of points for the seeding product grid when sites > 1
SUP_NORM_SEED_BUDGET = 65536

# Largest qubit count for the Dicke symmetrizer
MAX_DICKE_SITES = 12

# Tolerance of the product-state factorization check
FACTORIZATION_TOL = 1e-12

# Default tolerances of the CLI check modes
DEFAULT_KMS_TOL = 1e-9
DEFAULT_RESOLVENT_TOL = 1e-8

# Exit codes of the command-line harness
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_RESOURCE_CAP = 3
