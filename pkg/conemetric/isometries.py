"""Self-maps of a cone's interior that preserve Thompson's metric, and
sampling-based checks for the isometry and projective linearity
properties.

The top-level interface is conemetric.isometries.ConeMap. Maps are
serialized like cones, e.g.

    Kind: partial_inversion
    Index: 3
"""

import logging
from abc import ABC, abstractmethod

import numpy as np

import conemetric.constants as constants
import conemetric.utils as utils
from conemetric.cones import (Orthant, classify, require_interior,
                              thompson_distance)
from conemetric.utils import DomainError, InputError, NumericError

logger = logging.getLogger(__name__)


def to_dict(cone_map):
    return cone_map.to_dict()


def from_dict(cone, d):
    """Builds the ConeMap on cone described by the dictionary d.

    Raises: InputError if d doesn't describe a map.
    """
    if not isinstance(d, dict):
        raise InputError('Map description must be a mapping')
    d = dict(d)
    kind = d.pop('Kind', None)
    for c in CLASSES:
        if c.KIND == kind:
            ret = c.from_dict(cone, d)
            if len(d):
                raise InputError(f'Extra attributes found: {list(d.keys())}')
            return ret
    raise InputError(f'Unknown map kind: {kind}')


class ConeMap(ABC):
    """A map from the interior of a cone to itself."""

    def __init__(self, cone):
        self.cone = cone

    @abstractmethod
    def apply(self, x):
        pass

    @abstractmethod
    def to_dict(self):
        pass

    def __call__(self, x):
        return self.apply(x)

    def validate(self, samples=constants.VALIDATION_SAMPLES,
                 seed=constants.DEFAULT_SEED):
        """Checks that sampled interior points are mapped to interior points.

        Raises: DomainError otherwise.
        """
        rng = np.random.default_rng(seed)
        for i, x in enumerate(self.cone.sample_interior(rng, samples)):
            image = self.apply(x)
            membership = classify(self.cone, image)
            if membership.status != 'interior':
                raise DomainError(
                    f'{self.KIND} map sends an interior point outside the '
                    f'interior (sample {i + 1}, margin {membership.margin:g})')
        return self


def _require_algebra(cone, kind):
    if cone.algebra() is None:
        raise InputError(f'{kind} maps need a symmetric cone, got '
                         f'{cone.string()}')
    return cone.algebra()


class LinearMap(ConeMap):
    """x -> A x, with A acting on the cone's intrinsic coordinates
    (Cone.to_vector)."""
    KIND = 'linear'

    def __init__(self, cone, matrix):
        super().__init__(cone)
        n = cone.ambient_dim()
        self.matrix = utils.as_array(matrix, 'Matrix')
        if self.matrix.shape != (n, n):
            raise InputError(f'Matrix has shape {self.matrix.shape}, '
                             f'expected {(n, n)}')
        self.validate()

    def apply(self, x):
        return self.cone.from_vector(self.matrix @ self.cone.to_vector(x))

    def to_dict(self):
        return {'Kind': self.KIND, 'Matrix': self.matrix.tolist()}

    @classmethod
    def from_dict(cls, cone, d):
        try:
            return cls(cone, d.pop('Matrix'))
        except KeyError:
            raise InputError('Linear map needs a Matrix entry') from None


class CongruenceMap(ConeMap):
    """x -> P(g) x (g x g for matrices)."""
    KIND = 'congruence'

    def __init__(self, cone, g):
        super().__init__(cone)
        self.algebra = _require_algebra(cone, self.KIND)
        self.g = require_interior(cone, cone.point(g, 'G'), 'G')
        self.validate()

    def apply(self, x):
        return self.algebra.quadratic_action(self.g, x)

    def to_dict(self):
        return {'Kind': self.KIND, 'G': self.g.tolist()}

    @classmethod
    def from_dict(cls, cone, d):
        try:
            return cls(cone, d.pop('G'))
        except KeyError:
            raise InputError('Congruence map needs a G entry') from None


class InversionMap(ConeMap):
    """x -> x^{-1} in the cone's Jordan algebra."""
    KIND = 'inversion'

    def __init__(self, cone):
        super().__init__(cone)
        self.algebra = _require_algebra(cone, self.KIND)
        self.validate()

    def apply(self, x):
        return self.algebra.inverse(x)

    def to_dict(self):
        return {'Kind': self.KIND}

    @classmethod
    def from_dict(cls, cone, d):
        return cls(cone)


class PartialInversionMap(ConeMap):
    """Inverts one coordinate of the orthant: index is 1-based."""
    KIND = 'partial_inversion'

    def __init__(self, cone, index):
        super().__init__(cone)
        if not isinstance(cone, Orthant):
            raise InputError('Partial inversion needs an orthant')
        if isinstance(index, bool) or not isinstance(index, int) or not (
                1 <= index <= cone.dim):
            raise InputError(f'Index must be in [1, {cone.dim}], got {index!r}')
        self.index = index
        self.validate()

    def apply(self, x):
        ret = np.array(x, dtype=float)
        ret[self.index - 1] = 1 / ret[self.index - 1]
        return ret

    def to_dict(self):
        return {'Kind': self.KIND, 'Index': self.index}

    @classmethod
    def from_dict(cls, cone, d):
        try:
            return cls(cone, d.pop('Index'))
        except KeyError:
            raise InputError('Partial inversion needs an Index entry') from None


class CompositeMap(ConeMap):
    """Applies maps in order: the first map in the list is applied first."""
    KIND = 'composite'

    def __init__(self, cone, maps):
        super().__init__(cone)
        if not maps:
            raise InputError('Composite map needs at least one map')
        self.maps = list(maps)

    def apply(self, x):
        for m in self.maps:
            x = m.apply(x)
        return x

    def to_dict(self):
        return {'Kind': self.KIND, 'Maps': [m.to_dict() for m in self.maps]}

    @classmethod
    def from_dict(cls, cone, d):
        try:
            maps = d.pop('Maps')
        except KeyError:
            raise InputError('Composite map needs a Maps entry') from None
        if not isinstance(maps, list):
            raise InputError('Maps must be a list')
        return cls(cone, [from_dict(cone, m) for m in maps])


CLASSES = [LinearMap, CongruenceMap, InversionMap, PartialInversionMap,
           CompositeMap]


def check_isometry(cone_map, cone, samples=constants.VALIDATION_SAMPLES,
                   seed=constants.DEFAULT_SEED):
    """Returns max |d(f(x), f(y)) - d(x, y)| over sampled pairs."""
    rng = np.random.default_rng(seed)
    firsts = cone.sample_interior(rng, samples)
    seconds = cone.sample_interior(rng, samples)
    worst = 0.0
    for x, y in zip(firsts, seconds):
        before = thompson_distance(cone, x, y)
        after = thompson_distance(cone, cone_map.apply(x), cone_map.apply(y))
        worst = max(worst, abs(after - before))
    return worst


class LinearityReport:
    """Outcome of is_projectively_linear.

    Attributes:
        verdict: True, False, or None when the residual falls between the
        acceptance and rejection thresholds.
        residual: Max over samples of the sine of the angle between f(x)
        and T x.
        matrix: The fitted T on intrinsic coordinates, unit Frobenius norm.
    """

    def __init__(self, verdict, residual, matrix):
        self.verdict = verdict
        self.residual = residual
        self.matrix = matrix

    def verdict_string(self):
        if self.verdict is None:
            return 'inconclusive'
        return 'true' if self.verdict else 'false'

    def __repr__(self):
        return (f'LinearityReport({self.verdict!r}, '
                f'residual={self.residual!r})')


def _fit_projective(cone, cone_map, rng, samples):
    points = cone.sample_interior(rng, samples)
    xs = np.array([cone.to_vector(p) for p in points])
    fs = np.array([cone.to_vector(cone_map.apply(p)) for p in points])
    xs /= np.linalg.norm(xs, axis=1)[:, None]
    fs /= np.linalg.norm(fs, axis=1)[:, None]
    n = xs.shape[1]

    # (I - f f^T) T x = 0 is linear in the row-major entries of T.
    blocks = [np.kron(np.eye(n) - np.outer(f, f), x) for x, f in zip(xs, fs)]
    _, values, vt = np.linalg.svd(np.vstack(blocks), full_matrices=False)
    if values[-2] <= 1e-10 * values[0]:
        return None
    matrix = vt[-1].reshape(n, n)

    images = xs @ matrix.T
    if np.dot(images[0], fs[0]) < 0:
        matrix = -matrix
        images = -images
    norms = np.linalg.norm(images, axis=1)
    if np.min(norms) <= 0:
        return None
    along = np.einsum('ij,ij->i', images, fs) / norms
    perp = images / norms[:, None] - along[:, None] * fs
    sines = np.linalg.norm(perp, axis=1)
    # An image pointing against f(x) is as far as it gets.
    sines = np.where(along < 0, 1.0, sines)
    return matrix, float(np.max(sines))


def is_projectively_linear(cone_map, cone, samples=50,
                           seed=constants.DEFAULT_SEED):
    """Fits T with f(x) parallel to T x by homogeneous least squares.

    Returns: A LinearityReport. The verdict is True when the residual is at
    most constants.LINEARITY_ACCEPT and T maps sampled cone points into the
    cone, False when the residual is at least constants.LINEARITY_REJECT
    (or T leaves the cone), and None in between.

    Raises: InputError if samples < ambient_dim + 2, NumericError if the
    sampled constraints stay rank deficient after a retry.
    """
    n = cone.ambient_dim()
    if samples < n + 2:
        raise InputError(f'Need at least {n + 2} samples, got {samples}')
    rng = np.random.default_rng(seed)
    fit = _fit_projective(cone, cone_map, rng, samples)
    if fit is None:
        logger.debug('Degenerate linearity fit, retrying with fresh samples')
        fit = _fit_projective(cone, cone_map, rng, samples)
    if fit is None:
        raise NumericError('Sampled constraints are rank deficient')
    matrix, residual = fit

    if residual >= constants.LINEARITY_REJECT:
        verdict = False
    elif residual > constants.LINEARITY_ACCEPT:
        verdict = None
    else:
        probes = cone.sample_interior(rng, constants.VALIDATION_SAMPLES)
        images = np.array([cone.from_vector(matrix @ cone.to_vector(p))
                           for p in probes])
        scale = np.max(np.abs(images.reshape(len(images), -1)), axis=1)
        verdict = bool(np.all(cone.margins(images)
                              >= -constants.INTERIOR_TOL * scale))
    logger.debug('Projective linearity residual %g', residual)
    return LinearityReport(verdict, residual, matrix)

