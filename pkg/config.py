# Fixed Point Index Engine Configuration
# Exact integer topology: subdivisions, Smith normal form, chain approximations

# ===== SUBDIVISION SETTINGS =====
DEFAULT_LEVEL = 0  # index level k used when a bundle gives none
LEVEL_CAP = 2  # highest level tried by the general open set search
NEIGHBORHOOD_RADIUS_CAP = 3  # closed-star rings tried around suspicious cells

# ===== APPROXIMATION CHOICES =====
# Vertex rule picks phi(v) inside the carrier value, filling rule picks the
# particular SNF solution of d c = z
VERTEX_RULES = ('least', 'greatest')
FILLING_RULES = ('snf', 'reversed')
DEFAULT_VERTEX_RULE = 'least'
DEFAULT_FILLING_RULE = 'snf'

# ===== CONCURRENCY =====
FILL_WORKERS = 1  # simplices of one dimension filled in parallel (1 = sequential)
HOMOLOGY_WORKERS = 1  # per-dimension SNF computations
HARNESS_WORKERS = 1  # axiom instances checked in parallel

# ===== OUTPUT FORMAT =====
JSON_INDENT = 2
JSON_SORT_KEYS = True

# ===== EXIT CODES =====
EXIT_OK = 0
EXIT_INPUT = 1
EXIT_PARSE = 2
EXIT_INADMISSIBLE = 3
EXIT_ACYCLICITY = 4
EXIT_RESOLUTION = 5
EXIT_INTERNAL = 70

# ===== FILE FORMATS =====
COMMENT_PREFIX = '#'
CARRIER_ARROW = '->'
CARRIER_SEPARATOR = '|'
COVER_SEPARATOR = ':'
VERTICES_DIRECTIVE = 'vertices:'  # optional first line of a complex file fixing the vertex order

# ===== LOGGING CONFIGURATION =====
LOG_DIRECTORY = 'logs'
LOG_FILENAME_FORMAT = 'index_log_%Y%m%d_%H%M%S.txt'
MAX_LOG_SIZE = 10 * 1024 * 1024  # 10MB
LOG_RETENTION_DAYS = 30
LOG_MEMORY_ENTRIES = 1000
