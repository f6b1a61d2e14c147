"""Conemetric constants."""

NAME = 'conemetric'
VERSION = '1.0.0'

# Membership: margin tolerance after scaling the point to unit sup norm.
INTERIOR_TOL = 1e-10
# psd points must be symmetric up to this absolute asymmetry.
SYMMETRY_TOL = 1e-10
# Relative gap under which eigenvalues are merged into one spectral value.
CLUSTER_TOL = 1e-7
# Angle (radians) under which two points are treated as lying on one ray.
COLLINEAR_TOL = 1e-9
# Relative tolerance for M(x/y) == M(y/x).
BALANCE_TOL = 1e-9
# Facet values below this (after sup normalization) are active.
ACTIVE_TOL = 1e-9
# Tolerance on d(x,w) + d(w,y) - d(x,y) for constructed witnesses.
WITNESS_TOL = 1e-8
# |lambda_max * lambda_min - 1| bound for the spectral uniqueness test.
SPECTRAL_PRODUCT_TOL = 1e-8
# Backtracking for witness perturbations.
WITNESS_START_STEP = 1e-2
WITNESS_MAX_HALVINGS = 40
# Brute-force midpoint search.
ORACLE_MIDPOINT_TOL = 1e-9
ORACLE_MIN_OFF_PATH = 1e-4
ORACLE_MIN_RADIUS = 1e-4
ORACLE_RADIUS = 0.5
# Slack allowed when evaluating a path past its endpoints.
PATH_SLACK = 1e-12
# Bisection tolerance on distances in boundary_sequences.
BISECTION_TOL = 1e-10
# Projective linearity: accept below, reject above the floor.
LINEARITY_ACCEPT = 1e-6
LINEARITY_REJECT = 1e-2
# Number of samples used when validating maps and facet matrices.
VALIDATION_SAMPLES = 100
# CLI defaults.
DEFAULT_PRECISION = 12
DEFAULT_SEED = 0
DEFAULT_SAMPLES = 10000
