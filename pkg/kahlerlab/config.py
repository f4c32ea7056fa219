#!/usr/bin/env python3
"""
KahlerLab Configuration File

Tolerances, jet orders, discretization sizes and paths that users may change.
"""

import os
from pathlib import Path

# Project root directory location (parent of the folder holding this file)
PROJECT_ROOT = Path(__file__).resolve().parent.parent

TOOL_VERSION = "0.4.0"

# Suite manifests (YAML, one per verification suite)
SUITE_MANIFEST_DIR = PROJECT_ROOT / "suites"
# Built-in DGLA instances (JSON)
DGLA_DIR = PROJECT_ROOT / "dgla"
# Reports, CSV tables and plots; KAHLERLAB_OUTPUT_DIR overrides
OUTPUT_DIR = Path(os.environ.get("KAHLERLAB_OUTPUT_DIR") or PROJECT_ROOT / "reports")

# Tolerances
IDENTITY_TOLERANCE = 1e-8      # relative residual for a pointwise identity to pass
COMPONENT_TOLERANCE = 1e-10    # helper identities and curvature formulas checked alongside
SOLVER_TOLERANCE = 1e-12       # constraint projection residual
SPECTRAL_TOLERANCE = 1e-6      # eigenvalue bounds and oracle comparisons
CLUSTER_TOLERANCE = 1e-5       # eigenvalues closer than this share a cluster
HOLOMORPHY_TOLERANCE = 1e-5    # |∂̄ X| / |X| for X = (∂̄u)♯ on the λ = 1 cluster
COND_LIMIT = 1e12              # largest accepted condition number of the mass matrix
CONTROL_FLOOR = 1e-4           # median control residual a hypothesis must exceed

# Jet orders
G_ORDER = 3                    # background metric
F_ORDER = 3                    # weight f
PHI_ORDER = 2                  # Beltrami differential φ
W_ORDER = 3                    # potential deformation
T_ORDER = 1                    # deformation parameter t
PHI_SCALE = 0.3                # scale of random φ coefficients

# Spectral discretization
BASIS_N = 12                   # basis degree; (N + 1)^2 functions
GRID_RADIAL = 32               # Gauss–Legendre nodes in u = (|z|^2 - 1) / (|z|^2 + 1)
GRID_ANGULAR = 64              # equispaced nodes in arg z
PSI_SAMPLES = 100              # random ψ draws for the positivity check
MOMENT_PAIRS = 25              # (u, v) pairs for the moment-map pairing
CONVERGENCE_DEGREES = (4, 6, 8, 10, 12)

# Kuranishi
KURANISHI_ORDER = 8

# Parallel execution (None: number of CPUs)
MAX_WORKERS = None

# Configuration for list command
LIST_BASIC_MAX_WIDTH = 80      # Max width for basic list
LIST_DETAILED_MAX_WIDTH = 30   # Max width for list -a (detailed)

# Configuration for result tables
RESULT_TABLE_MAX_WIDTH = 40
