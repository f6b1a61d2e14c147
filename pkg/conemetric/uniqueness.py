"""Decides whether the Thompson (or Hilbert) geodesic between two interior
points is unique.

Certified tests:

  * collinear pairs: the ray segment is always the unique geodesic.
  * unbalanced pairs (M(x/y) != M(y/x)): never unique; both orders of the
    type one / ray concatenation are geodesics with different midpoints.
  * two-dimensional cones: balanced pairs are always unique.
  * symmetric cones: a balanced pair is unique iff the relative spectrum of
    x and y is {1/b, b}; otherwise an alternative midpoint is built from an
    intermediate idempotent of the spectral decomposition.
  * polyhedral cones: with x', y' the points where the line through x and y
    leaves the cone, the geodesic is unique iff no nonzero direction is
    annihilated by every facet active at x' or at y'.

midpoint_oracle() is an independent randomized search for alternative
midpoints. It can only ever prove non-uniqueness.
"""

import logging

import numpy as np
from scipy import linalg

import conemetric.constants as constants
import conemetric.utils as utils
from conemetric.cones import (PolyhedralCone, are_collinear, are_equal,
                              classify, hilbert_distance, line_boundary_points,
                              m_ratio, require_interior, thompson_distance,
                              thompson_distances)
from conemetric.geodesics import (balance_scale, geodesic, is_balanced,
                                  off_path_distance, type_one_path)
from conemetric.utils import DomainError, InputError, NumericError

logger = logging.getLogger(__name__)

UNIQUE = 'unique'
NON_UNIQUE = 'non_unique'
INCOMPARABLE = 'incomparable'


class UniquenessVerdict:
    """Outcome of a uniqueness test.

    Attributes:
        status: UNIQUE, NON_UNIQUE or INCOMPARABLE.
        method: The deciding test: 'collinear', 'unbalanced', 'two_dim',
        'spectral', 'face_span' or 'oracle'.
        witness: For non-unique verdicts, a metric midpoint of x and y that
        is not on the canonical geodesic.
        spectrum: Relative spectrum used by the spectral tests.
        check: d(x,w) + d(w,y) - d(x,y) for the witness w.
        off_path: Relative sup-norm distance of the witness from the point
        of the canonical geodesic at the same distance from x.
    """

    def __init__(self, status, method, witness=None, spectrum=None,
                 check=None, off_path=None):
        self.status = status
        self.method = method
        self.witness = witness
        self.spectrum = spectrum
        self.check = check
        self.off_path = off_path

    def is_unique(self):
        return self.status == UNIQUE

    def __repr__(self):
        return (f'UniquenessVerdict({self.status!r}, {self.method!r}, '
                f'spectrum={self.spectrum!r}, check={self.check!r}, '
                f'off_path={self.off_path!r})')


def midpoint_defect(cone, x, y, w, metric=thompson_distance):
    """Returns d(x,w) + d(w,y) - d(x,y)."""
    return metric(cone, x, w) + metric(cone, w, y) - metric(cone, x, y)


def _validate_witness(cone, x, y, w, path, metric=thompson_distance):
    """Returns the defect of w if w is an interior metric midpoint of x and
    y off the path, None otherwise."""
    if classify(cone, w).status != 'interior':
        return None
    defect = midpoint_defect(cone, x, y, w, metric)
    if abs(defect) > constants.WITNESS_TOL:
        return None
    if path is not None:
        away = off_path_distance(path, w, metric(cone, x, w))
        if away < constants.ORACLE_MIN_OFF_PATH:
            return None
    return defect


def _off_path(cone, x, y, w, path=None):
    if path is None:
        path = geodesic(cone, x, y)
    return off_path_distance(path, w, thompson_distance(cone, x, w))


def _check_pair(cone, x, y):
    x = require_interior(cone, x, 'x')
    y = require_interior(cone, y, 'y')
    if are_equal(x, y):
        raise DomainError('x and y are equal')
    return x, y


def is_unique(cone, x, y):
    """Decides whether the Thompson geodesic from x to y is unique.

    Raises: DomainError if x and y are not distinct interior points.
    """
    x, y = _check_pair(cone, x, y)
    if are_collinear(x, y):
        return UniquenessVerdict(UNIQUE, 'collinear')

    big, small = m_ratio(cone, x, y)
    if not is_balanced(big, small):
        witness = geodesic(cone, x, y, ray_first=True).midpoint()
        away = _off_path(cone, x, y, witness)
        if away < constants.ORACLE_MIN_OFF_PATH:
            logger.warning('Barely unbalanced pair: the witness is only %g '
                           'away from the canonical geodesic', away)
        return UniquenessVerdict(
            NON_UNIQUE, 'unbalanced', witness=witness,
            check=midpoint_defect(cone, x, y, witness), off_path=away)

    if cone.ambient_dim() == 2:
        return UniquenessVerdict(UNIQUE, 'two_dim')
    if cone.algebra() is not None:
        return _spectral_test(cone, x, y)
    return face_span_test(cone, x, y)


def _spectral_test(cone, x, y):
    spectrum = cone.algebra().relative_spectrum(x, y)
    if len(spectrum) == 2:
        if abs(spectrum[-1] * spectrum[0] - 1) > (
                constants.SPECTRAL_PRODUCT_TOL):
            raise NumericError(
                f'Balanced pair with relative spectrum {spectrum}')
        return UniquenessVerdict(UNIQUE, 'spectral', spectrum=spectrum)
    witness = spectral_witness(cone, x, y)
    return UniquenessVerdict(
        NON_UNIQUE, 'spectral', witness=witness, spectrum=spectrum,
        check=midpoint_defect(cone, x, y, witness),
        off_path=_off_path(cone, x, y, witness))


def face_span_test(cone, x, y):
    """Uniqueness test for balanced pairs in a polyhedral cone.

    Raises: InputError for non-polyhedral cones, DomainError for
    unbalanced or collinear pairs, NumericError if no witness validates.
    """
    if not isinstance(cone, PolyhedralCone):
        raise InputError('face_span_test needs a polyhedral cone')
    x, y = _check_pair(cone, x, y)
    if are_collinear(x, y):
        raise DomainError('x and y lie on one ray')
    big, small = m_ratio(cone, x, y)
    if not is_balanced(big, small):
        raise DomainError('face_span_test needs a balanced pair')

    ends = line_boundary_points(cone, x, y)
    if ends.degenerate:
        raise NumericError('Balanced pair with a single boundary crossing')
    rows = cone.facets / np.linalg.norm(cone.facets, axis=1)[:, None]
    active = np.zeros(len(rows), dtype=bool)
    for end in (ends.x_prime, ends.y_prime):
        values = rows @ np.ravel(end) / utils.sup_norm(end)
        active |= values <= constants.ACTIVE_TOL
    stacked = rows[active]
    rank = np.linalg.matrix_rank(stacked) if len(stacked) else 0
    logger.debug('Active facets %s, rank %d of %d',
                 np.flatnonzero(active) + 1, rank, cone.dim)
    if rank == cone.dim:
        return UniquenessVerdict(UNIQUE, 'face_span')

    directions = (linalg.null_space(stacked) if len(stacked)
                  else np.eye(cone.dim))
    path = type_one_path(cone, x, y)
    middle = path.midpoint()
    scale = utils.sup_norm(middle)
    step = constants.WITNESS_START_STEP
    for _ in range(constants.WITNESS_MAX_HALVINGS + 1):
        for z in (directions[:, 0], -directions[:, 0]):
            w = middle + step * scale * z
            defect = _validate_witness(cone, x, y, w, path)
            if defect is not None:
                return UniquenessVerdict(
                    NON_UNIQUE, 'face_span', witness=w, check=defect,
                    off_path=_off_path(cone, x, y, w, path))
        logger.debug('Witness step %g rejected, halving', step)
        step /= 2
    raise NumericError('No face-span witness validated after '
                       f'{constants.WITNESS_MAX_HALVINGS} halvings')


def spectral_witness(cone, x, y, intermediate_index=None, epsilon=None):
    """Builds an alternative metric midpoint of a balanced pair in a
    symmetric cone.

    The pair is moved to (e, z) with z = P(x^{-1/2}) y. With the spectral
    decomposition z = sum_j lambda_j c_j, r = max_j lambda_j and an
    intermediate lambda_i, the point (z + eps c_i)^{1/2} is a midpoint of
    e and z whenever eps < min(r - lambda_i, r lambda_i^2 - lambda_i); it is
    moved back with P(x^{1/2}).

    Args:
        cone: A cone with a Jordan algebra.
        x, y: A balanced interior pair.
        intermediate_index: Index (into the ascending distinct spectrum of
        z) of the idempotent to perturb; defaults to the first
        intermediate one.
        epsilon: Initial perturbation; defaults to half the admissible
        bound. It is halved until the midpoint equalities hold.

    Raises: DomainError if the spectrum has no intermediate value,
    NumericError if no perturbation validates.
    """
    alg = cone.algebra()
    if alg is None:
        raise InputError(f'{cone.string()} is not a symmetric cone')
    x = require_interior(cone, x, 'x')
    y = require_interior(cone, y, 'y')

    root = alg.sqrt(x)
    z = alg.quadratic_action(alg.inverse(root), y)
    decomp = alg.spectral(z)
    values = decomp.eigenvalues
    if len(values) < 3:
        raise DomainError(
            f'Relative spectrum {utils.format_set(values)} has no '
            'intermediate eigenvalue')
    if intermediate_index is None:
        intermediate_index = 1
    if not 0 < intermediate_index < len(values) - 1:
        raise DomainError(
            f'Index {intermediate_index} is not an intermediate eigenvalue')

    r = values[-1]
    value = values[intermediate_index]
    bound = min(r - value, r * value * value - value)
    if bound <= 0:
        raise DomainError(f'Eigenvalue {value:g} is not strictly inside '
                          f'(1/{r:g}, {r:g})')
    eps = bound / 2 if epsilon is None else epsilon
    path = geodesic(cone, x, y)
    for _ in range(constants.WITNESS_MAX_HALVINGS + 1):
        bumped = z + eps * decomp.idempotents[intermediate_index]
        w = alg.quadratic_action(root, alg.sqrt(bumped))
        if _validate_witness(cone, x, y, w, path) is not None:
            return w
        logger.debug('Spectral witness eps=%g rejected, halving', eps)
        eps /= 2
    raise NumericError('No spectral witness validated after '
                       f'{constants.WITNESS_MAX_HALVINGS} halvings')


def hilbert_unique(cone, x, y):
    """Decides whether the Hilbert metric geodesic from x to y is unique.

    Raises: DomainError if x and y are projectively equal.
    """
    x = require_interior(cone, x, 'x')
    y = require_interior(cone, y, 'y')
    if are_collinear(x, y):
        raise DomainError('x and y are projectively equal')
    if cone.ambient_dim() == 2:
        return UniquenessVerdict(UNIQUE, 'two_dim')

    lam = balance_scale(cone, x, y)
    if cone.algebra() is None:
        verdict = face_span_test(cone, x, lam * y)
        spectrum = None
    else:
        spectrum = cone.algebra().relative_spectrum(x, y)
        if len(spectrum) == 2:
            return UniquenessVerdict(UNIQUE, 'spectral', spectrum=spectrum)
        verdict = UniquenessVerdict(
            NON_UNIQUE, 'spectral', witness=spectral_witness(cone, x, lam * y))
    verdict.spectrum = spectrum
    if verdict.witness is not None:
        verdict.check = midpoint_defect(cone, x, y, verdict.witness,
                                        hilbert_distance)
    return verdict


def _midpoint_polytope_sampler(cone, x, y):
    """For polyhedral cones: returns a function pulling points back onto
    the set of metric midpoints of x and y, or None if that set is the
    single canonical midpoint."""
    fx = cone.facet_values(x)
    fy = cone.facet_values(y)
    r = 0.5 * thompson_distance(cone, x, y)
    lo = np.exp(-r) * np.maximum(fx, fy)
    hi = np.exp(r) * np.minimum(fx, fy)
    tight = hi - lo <= 1e-12 * hi
    level = (lo + hi) / 2

    rows = cone.facets
    if np.any(tight):
        basis = linalg.null_space(rows[tight])
    else:
        basis = np.eye(cone.dim)
    if basis.shape[1] == 0:
        return None
    loose = np.flatnonzero(~tight)
    slopes = rows[loose] @ basis
    weights = np.sum(slopes * slopes, axis=1)
    # Facets constant on the tight subspace cannot be moved.
    weights = np.where(weights > 1e-300, weights, np.inf)

    def pull_back(points):
        # Exact projection onto the tight facet levels, then cyclic slab
        # projections inside that affine subspace.
        if np.any(tight):
            shift = np.linalg.lstsq(
                rows[tight], (level[tight] - points @ rows[tight].T).T,
                rcond=None)[0].T
            points = points + shift
        coeffs = np.zeros((len(points), basis.shape[1]))
        base = points @ rows[loose].T
        for _ in range(500):
            worst = 0.0
            for j, i in enumerate(loose):
                values = base[:, j] + coeffs @ slopes[j]
                over = np.maximum(values - hi[i], 0) - np.maximum(
                    lo[i] - values, 0)
                worst = max(worst, float(np.max(np.abs(over)) / hi[i]))
                coeffs -= np.outer(over / weights[j], slopes[j])
            if worst <= 1e-15:
                break
        return points + coeffs @ basis.T

    return pull_back


def midpoint_oracle(cone, x, y, samples=constants.DEFAULT_SAMPLES,
                    radius=constants.ORACLE_RADIUS, seed=constants.DEFAULT_SEED):
    """Randomized search for a metric midpoint of x and y off the canonical
    geodesic.

    Candidates are w = zeta + delta u with zeta the canonical midpoint, u a
    random unit direction and delta log-spaced in
    [ORACLE_MIN_RADIUS, radius] (relative to ||zeta||_inf). For polyhedral
    cones each candidate is first pulled back onto the polytope of metric
    midpoints. Absence of a witness is not a certificate of uniqueness.

    Returns: The first interior candidate with
    |d(x,w) + d(w,y) - d(x,y)| <= ORACLE_MIDPOINT_TOL lying at least
    ORACLE_MIN_OFF_PATH away from the canonical path, or None.
    """
    x = require_interior(cone, x, 'x')
    y = require_interior(cone, y, 'y')
    if are_equal(x, y):
        return None
    path = geodesic(cone, x, y)
    middle = path.midpoint()
    rng = np.random.default_rng(seed)

    pull_back = None
    if isinstance(cone, PolyhedralCone):
        pull_back = _midpoint_polytope_sampler(cone, x, y)
        if pull_back is None:
            logger.debug('Midpoint set is a single point')
            return None

    scale = utils.sup_norm(middle)
    total = thompson_distance(cone, x, y)
    batch = 1000
    for start in range(0, samples, batch):
        count = min(batch, samples - start)
        directions = rng.normal(size=(count, cone.ambient_dim()))
        directions /= np.linalg.norm(directions, axis=1)[:, None]
        directions = np.array([cone.from_vector(d) for d in directions])
        steps = np.exp(rng.uniform(np.log(constants.ORACLE_MIN_RADIUS),
                                   np.log(radius), size=count)) * scale
        candidates = middle + steps.reshape((-1,) + (1,) * middle.ndim) * (
            directions)
        if pull_back is not None:
            candidates = pull_back(candidates)

        inside = cone.margins(candidates) > constants.INTERIOR_TOL * np.max(
            np.abs(candidates.reshape(count, -1)), axis=1)
        candidates = candidates[inside]
        if not len(candidates):
            continue
        to_x = thompson_distances(cone, candidates, x)
        to_y = thompson_distances(cone, candidates, y)
        defects = np.abs(to_x + to_y - total)
        for i in np.flatnonzero(defects <= constants.ORACLE_MIDPOINT_TOL):
            if off_path_distance(path, candidates[i], to_x[i]) >= (
                    constants.ORACLE_MIN_OFF_PATH):
                logger.debug('Oracle witness after %d samples',
                             start + int(i) + 1)
                return candidates[i]
    return None
