import os
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()

# Project paths
BASE_DIR = Path(__file__).resolve().parent.parent
OUTPUT_DIR = Path(os.getenv("DKLMS_OUTPUT_DIR", str(BASE_DIR / "results")))

TOOL_NAME = "diffusion-klms-simulator"
TOOL_VERSION = "1.0.0"

LOG_LEVEL = os.getenv("DKLMS_LOG_LEVEL", "INFO").upper()

# Stochastic matrices
ROW_SUM_TOLERANCE = 1e-9
PRINTED_ROW_TOLERANCE = 1e-2  # printed captions round to three decimals

# Linear baselines
DEFAULT_FORGETTING = 0.999
DEFAULT_RLS_INIT = 100.0
SYMMETRY_TOLERANCE = 1e-8
MAX_CONDITION_NUMBER = 1e12
POWER_ITERATION_TOL = 1e-10
POWER_ITERATION_MAX_ITER = 10_000

# Analysis / simulation
DEFAULT_MOMENT_SAMPLES = 100_000
DEFAULT_TAIL_FRACTION = 0.2
DEFAULT_EMBEDDING_LENGTH = 3

# Algorithm tags, in the order the learning-curve figures list them
ALGORITHMS = ["lms", "diffusion_lms", "diffusion_rls", "klms", "diffusion_klms"]
KERNEL_ALGORITHMS = {"klms", "diffusion_klms"}


def get_output_dir(override: str = None) -> Path:
    """Resolve the artifact directory. An explicit CLI value wins over
    ``DKLMS_OUTPUT_DIR`` from the environment / ``.env`` file."""
    if override:
        return Path(override)
    return Path(os.getenv("DKLMS_OUTPUT_DIR", str(OUTPUT_DIR)))
