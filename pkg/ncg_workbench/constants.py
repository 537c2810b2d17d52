"""
Constants and configuration defaults for ncg_workbench.
Replaces magic numbers and provides centralized default values.
"""

# Default configuration values
DEFAULT_CONFIG_PATH = 'config/settings.json'
DEFAULT_OUTPUT_FORMAT = 'csv'
OUTPUT_FORMATS = ('csv', 'json', 'svg')
THREADS_ENV_VAR = 'NCG_THREADS'

# Numerical tolerances
HERMITIAN_TOL = 1e-13
IDENTITY_TOL = 1e-12
AXIS_NORM_TOL = 1e-13
STATE_TOL = 1e-12
LIP_RELATIVE_SLACK = 1e-6
HODGE_ORTHOGONALITY_TOL = 1e-9
HARMONIC_RTOL = 1e-10
GRAM_MIN_EIGENVALUE = 1e-12

# Quadrature
DEFAULT_LEVEL_FLOOR = 8
QUADRATURE_RULES = ('legendre', 'polar')

# State-metric solver
DEFAULT_METRIC_TOL = 1e-6
DEFAULT_METRIC_SAMPLE = 64
DEFAULT_MAX_ITERATIONS = 2000
DEFAULT_STALL_WINDOW = 50
DEFAULT_DYKSTRA_ITERATIONS = 400
DEFAULT_DYKSTRA_TOL = 1e-11
LIP_CHECK_DIRECTIONS = 2000
DEFECT_DIRECTIONS = 200
GAMMA_LEVEL_FLOOR = 16

# Exact-arithmetic size guards
CHAIN_SIZE_LIMIT = 10 ** 6
MAX_CLIFFORD_GENERATORS = 12
MAX_SPIN_K = 6
MAX_HOPF_DEGREE = 5
REWRITE_STEP_LIMIT = 100000

# Rewriting checks
DEFAULT_HOPF_DEGREE = 3
DEFAULT_COMMUTATIVITY_DEGREE = 2
CONFLUENCE_SAMPLES = 500
CONFLUENCE_MAX_DEGREE = 4
COUNIT_PAIRS = 100
REWRITE_STRATEGIES = ('largest-first', 'fifo-rightmost')

# Homology variants and sides
HOMOLOGY_VARIANTS = ('hochschild', 'cyclic', 'twisted-hochschild', 'twisted-cyclic')
HOMOLOGY_SIDES = ('homology', 'cohomology')

# Exit codes
EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_PROPERTY = 3
