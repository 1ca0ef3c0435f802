import os

from dotenv import load_dotenv

load_dotenv()

# Sampling and reproducibility
DEFAULT_SEED = int(os.getenv("QUIVREP_SEED", "7"))
DEFAULT_SAMPLES = int(os.getenv("QUIVREP_SAMPLES", "5"))
DEFAULT_FIELD = os.getenv("QUIVREP_FIELD", "q")

# Coefficient ranges for random points, endomorphisms and isomorphism witnesses
FIBER_COEFF_BOUND = int(os.getenv("QUIVREP_FIBER_BOUND", "20"))
ENDO_COEFF_BOUND = int(os.getenv("QUIVREP_ENDO_BOUND", "9"))

# Retry budgets
SPLIT_RETRY_BUDGET = int(os.getenv("QUIVREP_SPLIT_RETRIES", "20"))
ISO_TRIALS = int(os.getenv("QUIVREP_ISO_TRIALS", "8"))
MAX_ROOT_STEPS = int(os.getenv("QUIVREP_MAX_ROOT_STEPS", "10000"))

# Orthogonal-set search
SEARCH_NODE_BUDGET = int(os.getenv("QUIVREP_SEARCH_NODE_BUDGET", "400"))

# Prime fields must be large enough that random sampling rarely hits special loci
MIN_PRIME = 2 ** 30

LOG_LEVEL = os.getenv("QUIVREP_LOG_LEVEL", "WARNING").upper()

FORMAT_VERSION = 1
