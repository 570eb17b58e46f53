"""Constants and Configuration for Preproj-Verify"""

# Fields
DEFAULT_FIELD = 'q'
FIELD_PRIME_PREFIX = 'fp:'
TEST_PRIME = 1009

# Quivers
STAR_SUFFIX = '*'
ARROW_NAMES = 'abcdefghijklmnopqrstuvwxyz'
IDENTIFIER_PATTERN = r'[A-Za-z0-9_.]+'
COMMENT_CHAR = '#'
STATEMENT_SEPARATOR = ';'

# Graded quotients
AUTO_DEGREE_CAP = 64  # longest path in Λ(E8) has length 28

# Exit codes
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_INTERNAL_ERROR = 3
EXIT_INTERRUPTED = 130

# Randomized checks
DEFAULT_SEED = 0
ASSOCIATIVITY_SAMPLES = 25

# Console output
COLOR_ENV_VAR = 'PREPROJ_COLOR'
PASS_MARK = '✓'
FAIL_MARK = '✗'
RULE_WIDTH = 60

# ANSI colour palette
COLORS = {
    'GREEN': '\033[32m',
    'RED': '\033[31m',
    'YELLOW': '\033[33m',
    'BOLD': '\033[1m',
    'RESET': '\033[0m',
}

# DOT styling
DOT_NODE_SHAPE = 'circle'
DOT_STAR_EDGE_STYLE = 'dashed'
DOT_TAU_EDGE_STYLE = 'dashed'
DOT_TAU_EDGE_COLOR = 'gray'
DOT_WINDOW_RANKDIR = 'LR'
