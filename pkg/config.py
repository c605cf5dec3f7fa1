# Configuration for the coupling toolkit
# Simple, single-source configuration

# Numeric Settings
DEFAULT_LOG_BASE = 2  # bits; every entropy call accepts an explicit base
FLOAT_TOLERANCE = 1e-9  # slack for identity and bound checks
TIE_TOLERANCE = 1e-12  # objectives closer than this are treated as ties

# Solver Settings
DEFAULT_VERTEX_CAP = 10**6  # max vertices enumerated before VertexCapExceeded
EXACT_STRATEGY = "auto"  # "auto", "exhaustive" or "branch_and_bound"
DEFAULT_THREADS = 1  # worker threads for root-branch splitting
DEFAULT_CHANNEL_BUDGET = 5 * 10**6  # max m^n' assignments for optimal channel
DEFAULT_DP_BUDGET = 10**7  # max reachable-sum table size for the DP oracles

# Counterexample Settings
MAX_DENSE_STAGE_SIZE = 400  # largest N materialised as a dense Joint
COUNTEREXAMPLE_CHUNK_ROWS = 512  # rows per numpy chunk when summing the n x n block

# Output Settings
DEFAULT_FORMAT = "json"  # "json" or "csv"

# Debug Settings
DEBUG_POLYTOPE = False  # Vertex enumeration debug
DEBUG_SOLVER = False  # Strategy / pruning debug
DEBUG_REDUCTIONS = False  # Encoder / decision debug
VERBOSE_OUTPUT = False  # INFO summaries on stderr, same as --verbose
