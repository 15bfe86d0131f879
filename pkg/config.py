"""
config.py: central configuration for sboxforge.
All search defaults, sweep grids, paths and exit codes live here.
Import this module instead of repeating literals across files.
"""
import os

from dotenv import load_dotenv

load_dotenv()

# Malformed integer overrides fall back to the default and are reported here;
# the CLI refuses to run (exit 2) while this list is non-empty.
ENV_ERRORS = []


def env_int(name, default):
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        ENV_ERRORS.append(f"{name}={raw!r} is not an integer")
        return default


# ---------------------------------------------------------------------------
# Paths
# ---------------------------------------------------------------------------
BASE_DIR    = os.path.dirname(os.path.abspath(__file__))
RESULTS_DIR = os.getenv("SBOXFORGE_RESULTS_DIR", os.path.join(BASE_DIR, "results"))

# Logging
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
LOG_FILE  = os.getenv("SBOXFORGE_LOG_FILE", os.path.join(BASE_DIR, "sboxforge.log"))

# ---------------------------------------------------------------------------
# S-box geometry
# ---------------------------------------------------------------------------
MIN_N = 3
MAX_N = 8
DEFAULT_N = 8

# ---------------------------------------------------------------------------
# WHS cost function
# ---------------------------------------------------------------------------
DEFAULT_COST_X = 0
DEFAULT_COST_R = 12
COST_MAX_BITS  = 128   # exact integer costs wider than this are flagged, never wrapped

# ---------------------------------------------------------------------------
# Modified GA (elite selection + single-swap children)
# ---------------------------------------------------------------------------
DEFAULT_K_POP     = env_int("SBOXFORGE_K_POP", 1)
DEFAULT_K_MUT     = env_int("SBOXFORGE_K_MUT", 7)
DEFAULT_K_ITER    = env_int("SBOXFORGE_K_ITER", 150_000)
DEFAULT_TARGET_NL = env_int("SBOXFORGE_TARGET_NL", 104)
DEFAULT_LANES     = env_int("SBOXFORGE_THREADS", 8)
DEFAULT_SEED      = env_int("SBOXFORGE_SEED", 20240917)

PROGRESS_LOG_EVERY = 5000  # iterations between DEBUG progress lines

# ---------------------------------------------------------------------------
# Baseline generational GA (tournament selection + repaired crossover)
# ---------------------------------------------------------------------------
BASELINE_POP_SIZE        = 50
BASELINE_GENERATIONS     = 500
BASELINE_CROSSOVER_RATE  = 0.9
BASELINE_MUTATION_RATE   = 0.2
BASELINE_TOURNAMENT_SIZE = 3
BASELINE_LOG_EVERY       = 50  # generations between DEBUG progress lines

# ---------------------------------------------------------------------------
# Parameter sweep
# ---------------------------------------------------------------------------
GRID_K_POP    = tuple(range(1, 22, 2))   # 1, 3, ..., 21
GRID_K_MUT    = tuple(range(1, 32, 3))   # 1, 4, ..., 31
RUNS_PER_CELL = 100

SWEEP_COLUMNS = [
    "k_pop", "k_mut", "runs", "successes", "success_rate",
    "mean_k_sbox", "std_k_sbox", "mean_duration_ms",
]
RUN_LOG_COLUMNS = [
    "seed", "n", "k_pop", "k_mut", "k_iter", "target_nl", "success", "k_sbox",
    "iterations_used", "nl", "delta", "degree", "ai", "duration_ms",
]

# ---------------------------------------------------------------------------
# CLI exit codes
# ---------------------------------------------------------------------------
EXIT_OK             = 0
EXIT_SEARCH_FAILURE = 1
EXIT_USAGE          = 2
EXIT_IO             = 3
