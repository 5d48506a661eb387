import os
from dotenv import load_dotenv

load_dotenv()

# Application settings
APP_NAME = "shiftk"
CONFIGS_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "configs")

# Worker pool (loaded from .env / environment)
THREADS = int(os.getenv("SHIFTK_THREADS", "1"))
LOG_LEVEL = os.getenv("SHIFTK_LOG_LEVEL", "INFO")

# Quadrature settings
DEFAULT_QUAD_NODES = 4096
LOSS_QUAD_NODES = 8192
MAX_QUAD_NODES = 2**20
MIN_LOSS_NODES = 64
MIN_SEMI_PARSEVAL_NODES = 256

# Numerical guards
COND_LIMIT = 1e12
PD_CHECK_MAX_SIZE = 64
DISTINCT_POLE_TOL = 1e-12
SINGULAR_POLE_TOL = 1e-9
IMAG_RESIDUE_TOL = 1e-10
NEGATIVE_LOSS_TOL = 1e-10
MIN_H_RHO = 1e-6
WINDOW_BOUNDARY_TOL = 1e-6

# Training settings
STABILITY_RADIUS = 1 - 1e-6
DIVERGENCE_MSE = 1e6

# Desk-scale experiment defaults (full scale behind --full)
DESK_SEQUENCE_LENGTH = 300
DESK_T_STAR = 50
DESK_NUM_SAMPLES = 2000
DESK_EPOCHS = 20
DESK_LEARNING_RATE = 2e-5
FULL_SEQUENCE_LENGTH = 1500
FULL_T_STAR = 200
FULL_NUM_SAMPLES = 130000
FULL_EPOCHS = 60
WEIGHT_DECAY = 1e-5

# Output settings
CSV_DIGITS = 17

# Truncated-oracle settings
ORACLE_TAIL_TARGET = 1e-12
ORACLE_MAX_K = 1_000_000
QUAD_DECAY_FACTOR = 40
QUAD_CHUNK = 8192
