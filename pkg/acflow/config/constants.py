"""
Constants and numerical defaults for the acflow solver.
"""

import os
from dotenv import load_dotenv

# Load environment variables from .env file in the project root
root_dir = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
env_path = os.path.join(root_dir, '.env')
load_dotenv(env_path)

# Quadrature
QUADRATURE_DEGREE = 5

# Linear solvers
SOLVER_RTOL = 1e-10
PROJECTION_RTOL = 1e-12
CG_MAX_ITERATIONS = 10000

# Scheme parameters
SAFETY_FACTOR = 1.1
DEFAULT_LAMBDA = 1.0

# Level set stabilization
DEFAULT_C_VISC = 0.125
DEFAULT_C_COMP = 0.0
DEFAULT_GRAD_FLOOR = 1e-12
OVERSHOOT_WARNING = 0.05

# Runtime invariants
PRESSURE_IDENTITY_TOL = 1e-12
MOMENTUM_CONSISTENCY_TOL = 1e-13

# Error norms
ZERO_NORM_THRESHOLD = 1e-14

# Mesh generation
DISK_SPACING_FACTOR = 0.9
MESH_FILE_HEADER = "ACMESH 1"

# Mesh-size lists for convergence studies
DESK_H_LIST = [0.1, 0.05, 0.025]
FULL_H_LIST = [0.1, 0.05, 0.025, 0.0125, 0.00625]

# CSV output
CSV_FLOAT_FORMAT = "%.8e"

TIMESERIES_COLUMNS = [
    "step", "t", "err_u_L2", "err_p_L2", "err_phi",
    "div_norm", "overshoot", "energy",
]

SUMMARY_COLUMNS = [
    "case", "variant", "h", "tau", "n_steps", "T", "n_dofs",
    "err_u_L2", "err_p_L2", "err_phi", "err_rho_L2",
    "div_norm", "overshoot", "energy",
    "nu_bar", "rho_under", "lambda_eff", "lambda_bar",
]

CONVERGENCE_COLUMNS = [
    "level", "h", "tau", "n_dofs",
    "err_u_L2", "rate_u", "err_p_L2", "rate_p",
    "err_phi", "rate_phi", "err_rho_L2", "rate_rho",
]
