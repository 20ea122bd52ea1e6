"""
Application constants and configuration values.
"""

# MovingAI terrain characters
PASSABLE_TERRAIN = frozenset('.GS')
BLOCKED_TERRAIN = frozenset('@OTW')

# Text encodings tried in order when reading benchmark files
SUPPORTED_TEXT_ENCODINGS = [
    'utf-8',
    'windows-1252',
    'latin1'
]

# Solver defaults
DEFAULT_EPS0 = 10.0
MIN_EPSILON = 1.0
MAX_EPSILON = 1000.0
DEFAULT_TIME_LIMIT = 90.0       # seconds per run
MIN_TIME_LIMIT = 0.001
MAX_TIME_LIMIT = 86400.0
DEADLINE_CHECK_INTERVAL = 1000  # low-level expansions between deadline checks

ALGORITHMS = ['cbs', 'bcbs', 'ecbs', 'abcbs', 'aecbs']
ANYTIME_ALGORITHMS = ['abcbs', 'aecbs']

# Restart policy names, CLI spelling -> driver spelling
RESTART_POLICIES = {
    '1': 'every',
    '2': 'alternate',
    'never': 'never',
}
DEFAULT_RESTART = {
    'abcbs': 'never',
    'aecbs': '1',
}
DEFAULT_CIC = True

# Bench sweep defaults
DEFAULT_AGENT_STEP = 10
DEFAULT_SCENARIO_COUNT = 25
BENCH_DIR_ENV_VAR = 'MAPF_BENCH_DIR'

# Exit codes
EXIT_OK = 0
EXIT_INVALID = 1
EXIT_TIMEOUT = 2
EXIT_NO_SOLUTION = 3
EXIT_USAGE = 64
EXIT_DATA_ERROR = 65
EXIT_IO_ERROR = 74

# Curve aggregation
DEFAULT_SAMPLE_COUNT = 100
MIN_SAMPLE_TIME_MS = 1.0

# Plot settings
PLOT_WIDTH = 8
PLOT_HEIGHT = 6
PLOT_DPI = 100
EXPORT_DPI = 300
PLOT_COLORS = ['#1f77b4', '#ff7f0e', '#2ca02c', '#d62728', '#9467bd',
               '#8c564b', '#e377c2', '#7f7f7f', '#bcbd22', '#17becf']

REPORT_MARGIN = 36  # Margin size in points

# Bench profile validation schema
BENCH_CONFIG_VALIDATION_SCHEMA = {
    'algo': {
        'type': str,
        'required': True,
        'choices': ALGORITHMS
    },
    'eps0': {
        'type': float,
        'required': False,
        'min': MIN_EPSILON,
        'max': MAX_EPSILON,
        'default': DEFAULT_EPS0
    },
    'eps_high': {
        'type': float,
        'required': False,
        'min': MIN_EPSILON,
        'max': MAX_EPSILON,
        'default': None
    },
    'eps_low': {
        'type': float,
        'required': False,
        'min': MIN_EPSILON,
        'max': MAX_EPSILON,
        'default': MIN_EPSILON
    },
    'res': {
        'type': str,
        'required': False,
        'choices': list(RESTART_POLICIES),
        'default': None
    },
    'cic': {
        'type': bool,
        'required': False,
        'default': DEFAULT_CIC
    },
    'time_limit': {
        'type': float,
        'required': False,
        'min': MIN_TIME_LIMIT,
        'max': MAX_TIME_LIMIT,
        'default': DEFAULT_TIME_LIMIT
    },
    'label': {
        'type': str,
        'required': False,
        'min_length': 1,
        'default': None
    }
}
