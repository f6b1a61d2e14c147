"""Cones, order ratios and the Thompson and Hilbert metrics.

The top-level interface every cone family implements is
conemetric.cones.Cone. Four families are provided: the nonnegative orthant,
polyhedral cones given by facet functionals, the Lorentz (second-order) cone
and the cone of positive semidefinite matrices.

For interior points x, y of a cone C,

    M(x/y) = inf{b > 0 : x <= b y},  m(x/y) = 1 / M(y/x),
    thompson_distance(x, y) = log max(M(x/y), M(y/x)),
    hilbert_distance(x, y) = log(M(x/y) M(y/x)).
"""

import logging
from abc import ABC, abstractmethod

import numpy as np
from scipy.optimize import linprog

import conemetric.constants as constants
import conemetric.utils as utils
from conemetric.jordan import (OrthantAlgebra, SpinFactorAlgebra,
                               SymmetricMatrixAlgebra)
from conemetric.utils import DomainError, InputError

logger = logging.getLogger(__name__)

__all__ = [
    'Cone', 'PolyhedralCone', 'Orthant', 'LorentzCone', 'PSDCone',
    'Membership', 'BoundaryPoints', 'to_dict', 'from_dict', 'classify',
    'require_interior', 'are_collinear', 'are_equal', 'm_ratio',
    'thompson_distance', 'hilbert_distance', 'line_boundary_points',
    'cross_ratio_distance', 'hyperbolic_distance',
]


def to_dict(cone):
    """Returns a dictionary (yaml-friendly) representation of cone."""
    return cone.to_dict()


def from_dict(d):
    """Converts a dictionary representing a cone into a Cone object.

    This function is reverse of conemetric.cones.to_dict.

    Raises: InputError if d doesn't represent a cone.
    """
    if not isinstance(d, dict):
        raise InputError('Cone description must be a mapping')
    d = dict(d)
    kind = d.pop('Kind', None)
    for c in CLASSES:
        if c.KIND == kind:
            cone = c.from_dict(d)
            if len(d):
                raise InputError(f'Extra attributes found: {list(d.keys())}')
            return cone
    raise InputError(f'Unknown cone kind: {kind}')


def _pop_dim(d):
    try:
        dim = d.pop('Dim')
    except KeyError:
        raise InputError('Cone description needs a Dim entry') from None
    if isinstance(dim, bool) or not isinstance(dim, int):
        raise InputError(f'Dim must be an integer, got {dim!r}')
    return dim


class Cone(ABC):
    """A closed pointed cone with nonempty interior in a finite-dimensional
    vector space."""

    @abstractmethod
    def shape(self):
        """Shape of a point of this cone."""
        pass

    @abstractmethod
    def margins(self, points):
        """Raw membership margins of a stack of points.

        The margin is positive exactly on the interior and zero exactly on
        the boundary: min facet value, s - ||x|| or the minimum eigenvalue.
        """
        pass

    @abstractmethod
    def relative_bounds(self, points, base):
        """Order ratios of a stack of points against one base point.

        Args:
            points: Array of shape (count,) + self.shape(), interior points.
            base: An interior point.

        Returns: (M, m) arrays with M[i] = M(points[i]/base) and
        m[i] = m(points[i]/base).
        """
        pass

    @abstractmethod
    def unit_functional(self):
        """A functional (as a point, applied by np.vdot) that is strictly
        positive on the cone minus the origin."""
        pass

    @abstractmethod
    def sample_interior(self, rng, count):
        """Returns an array of count interior points drawn using rng."""
        pass

    @abstractmethod
    def to_dict(self):
        pass

    def algebra(self):
        """The Euclidean Jordan algebra whose cone of squares is this cone,
        or None for cones that are not symmetric."""
        return None

    def ambient_dim(self):
        """Dimension of the vector space spanned by the cone."""
        return int(np.prod(self.shape()))

    def point(self, coords, name='point'):
        """Validates coords and returns them as a point of this cone's
        shape.

        Raises: InputError on shape mismatch or non-numeric entries.
        """
        x = utils.as_array(coords, name)
        if x.shape != self.shape():
            raise InputError(
                f'{name} has shape {x.shape}, expected {self.shape()} '
                f'for {self.string()}')
        return x

    def margin(self, x):
        return float(self.margins(np.asarray(x)[np.newaxis])[0])

    def to_vector(self, x):
        """Coordinates of x in an orthonormal basis of the ambient space."""
        return np.ravel(x).astype(float)

    def from_vector(self, v):
        """Reverse of to_vector."""
        return np.asarray(v, dtype=float).reshape(self.shape())

    def string(self):
        return f'{self.KIND}({self.dim})'


class PolyhedralCone(Cone):
    """The cone {x : psi_i(x) >= 0 for all i} for facet functionals psi_i
    given as the rows of a matrix."""
    KIND = 'polyhedral'

    def __init__(self, facets):
        """
        Args:
            facets: m x n array, one facet functional per row.

        Raises: InputError if a row is zero, DomainError if the cone is not
        pointed or has an empty interior.
        """
        facets = utils.as_array(facets, 'Facets')
        if facets.ndim != 2 or facets.shape[0] < 1 or facets.shape[1] < 1:
            raise InputError('Facets must be a nonempty list of rows')
        norms = np.linalg.norm(facets, axis=1)
        if np.any(norms == 0):
            raise InputError(
                f'Facet rows must be nonzero (rows {np.flatnonzero(norms == 0) + 1})')
        self.facets = facets
        self.dim = facets.shape[1]
        if np.linalg.matrix_rank(facets) < self.dim:
            raise DomainError('Cone contains a line (facet matrix is not of '
                              'full column rank)')
        self.witness = self._interior_witness()

    def shape(self):
        return (self.dim,)

    def _interior_witness(self):
        """Finds w maximizing min_i psi_i(w) / ||psi_i|| over ||w||_inf <= 1
        (the Chebyshev center of the cone's cross-section)."""
        m, n = self.facets.shape
        scaled = self.facets / np.linalg.norm(self.facets, axis=1)[:, None]
        c = np.zeros(n + 1)
        c[-1] = -1.0
        a_ub = np.hstack((-scaled, np.ones((m, 1))))
        bounds = [(-1, 1)] * n + [(None, 1)]
        sol = linprog(c, A_ub=a_ub, b_ub=np.zeros(m), bounds=bounds,
                      method='highs')
        if sol.status != 0 or sol.x[-1] <= constants.INTERIOR_TOL:
            raise DomainError('Cone has an empty interior')
        w = sol.x[:-1]
        logger.debug('Interior witness %s with margin %g', w, sol.x[-1])
        return w / utils.sup_norm(w)

    def facet_values(self, x):
        """psi_i(x) for all facets (x may be a stack of points)."""
        return np.asarray(x, dtype=float) @ self.facets.T

    def margins(self, points):
        return np.min(self.facet_values(points), axis=-1)

    def relative_bounds(self, points, base):
        ratios = self.facet_values(points) / self.facet_values(base)
        return ratios.max(axis=-1), ratios.min(axis=-1)

    def unit_functional(self):
        return self.facets.sum(axis=0)

    def sample_interior(self, rng, count):
        ret = []
        for _ in range(1000):
            z = self.witness + rng.normal(size=(4 * count, self.dim))
            norms = np.max(np.abs(z), axis=1)
            good = z[self.margins(z) > 1e-3 * norms]
            ret.extend(good * np.exp(rng.normal(size=(len(good), 1))))
            if len(ret) >= count:
                return np.array(ret[:count])
        raise utils.NumericError('Could not sample interior points')

    def to_dict(self):
        return {'Kind': self.KIND, 'Dim': self.dim,
                'Facets': self.facets.tolist()}

    @classmethod
    def from_dict(cls, d):
        dim = _pop_dim(d)
        try:
            facets = d.pop('Facets')
        except KeyError:
            raise InputError('Polyhedral cone needs a Facets entry') from None
        cone = cls(facets)
        if cone.dim != dim:
            raise InputError(
                f'Facet rows have length {cone.dim}, but Dim is {dim}')
        return cone


class Orthant(PolyhedralCone):
    """The nonnegative orthant of R^n (facets are the coordinates)."""
    KIND = 'orthant'

    def __init__(self, n):
        if n < 1:
            raise InputError(f'Orthant dimension must be >= 1, got {n}')
        self.facets = np.eye(n)
        self.dim = n
        self.witness = np.ones(n)
        self._algebra = OrthantAlgebra(n)

    def algebra(self):
        return self._algebra

    def facet_values(self, x):
        return np.asarray(x, dtype=float)

    def unit_functional(self):
        return np.ones(self.dim)

    def sample_interior(self, rng, count):
        return np.exp(rng.normal(size=(count, self.dim)))

    def to_dict(self):
        return {'Kind': self.KIND, 'Dim': self.dim}

    @classmethod
    def from_dict(cls, d):
        return cls(_pop_dim(d))


class LorentzCone(Cone):
    """The second-order cone {(s, x) : s >= ||x||_2} in R^dim."""
    KIND = 'lorentz'

    def __init__(self, dim):
        if dim < 2:
            raise InputError(f'Lorentz cone dimension must be >= 2, got {dim}')
        self.dim = dim
        self._algebra = SpinFactorAlgebra(dim - 1)

    def shape(self):
        return (self.dim,)

    def algebra(self):
        return self._algebra

    def margins(self, points):
        points = np.asarray(points, dtype=float)
        return points[..., 0] - np.linalg.norm(points[..., 1:], axis=-1)

    def relative_bounds(self, points, base):
        return self._algebra.relative_extremes_many(points, base)

    def unit_functional(self):
        return self._algebra.unit()

    def sample_interior(self, rng, count):
        space = rng.normal(size=(count, self.dim - 1))
        height = np.linalg.norm(space, axis=1) + rng.exponential(
            size=count) + 0.05
        return np.column_stack((height, space))

    def to_dict(self):
        return {'Kind': self.KIND, 'Dim': self.dim}

    @classmethod
    def from_dict(cls, d):
        return cls(_pop_dim(d))


class PSDCone(Cone):
    """Positive semidefinite k x k real symmetric matrices."""
    KIND = 'psd'

    def __init__(self, order):
        if order < 1:
            raise InputError(f'Matrix order must be >= 1, got {order}')
        self.dim = order
        self._algebra = SymmetricMatrixAlgebra(order)
        self._upper = np.triu_indices(order)

    def shape(self):
        return (self.dim, self.dim)

    def ambient_dim(self):
        return self.dim * (self.dim + 1) // 2

    def algebra(self):
        return self._algebra

    def point(self, coords, name='point'):
        x = super().point(coords, name)
        asymmetry = np.max(np.abs(x - x.T))
        if asymmetry > constants.SYMMETRY_TOL:
            raise InputError(f'{name} is not symmetric (asymmetry '
                             f'{asymmetry:g})')
        return (x + x.T) / 2

    def margins(self, points):
        points = np.asarray(points, dtype=float)
        return self._algebra.eigenvalues_many(
            points.reshape((-1,) + self.shape()))[:, 0].reshape(
                points.shape[:-2])

    def relative_bounds(self, points, base):
        return self._algebra.relative_extremes_many(points, base)

    def unit_functional(self):
        return self._algebra.unit()

    def to_vector(self, x):
        x = np.asarray(x, dtype=float)
        scale = np.where(self._upper[0] == self._upper[1], 1.0, np.sqrt(2))
        return x[self._upper] * scale

    def from_vector(self, v):
        v = np.asarray(v, dtype=float)
        scale = np.where(self._upper[0] == self._upper[1], 1.0, np.sqrt(2))
        x = np.zeros(self.shape())
        x[self._upper] = v / scale
        return x + np.triu(x, 1).T

    def sample_interior(self, rng, count):
        ret = np.empty((count,) + self.shape())
        for i in range(count):
            q, _ = np.linalg.qr(rng.normal(size=self.shape()))
            values = np.exp(rng.normal(size=self.dim))
            x = (q * values) @ q.T
            ret[i] = (x + x.T) / 2
        return ret

    def to_dict(self):
        return {'Kind': self.KIND, 'Dim': self.dim}

    @classmethod
    def from_dict(cls, d):
        return cls(_pop_dim(d))


CLASSES = [Orthant, PolyhedralCone, LorentzCone, PSDCone]


class Membership:
    """Result of classify(): status is one of 'interior', 'boundary' or
    'outside' and margin is the raw margin of the point."""

    def __init__(self, status, margin):
        self.status = status
        self.margin = margin

    def __repr__(self):
        return f'Membership({self.status!r}, {self.margin!r})'


def classify(cone, x):
    """Classifies x as interior, boundary or outside point of cone.

    The decision uses the margin of x / ||x||_inf with absolute tolerance
    constants.INTERIOR_TOL; the returned margin is the raw one.

    Raises: InputError if x does not have the cone's shape.
    """
    x = cone.point(x)
    margin = cone.margin(x)
    scale = utils.sup_norm(x)
    normalized = margin / scale if scale > 0 else 0.0
    if normalized > constants.INTERIOR_TOL:
        status = 'interior'
    elif normalized >= -constants.INTERIOR_TOL:
        status = 'boundary'
    else:
        status = 'outside'
    return Membership(status, margin)


def require_interior(cone, x, name='point'):
    """Returns x as a validated point of cone.

    Raises: InputError on shape mismatch, DomainError if x is not in the
    interior.
    """
    membership = classify(cone, x)
    if membership.status != 'interior':
        raise DomainError(
            f'{name} is not in the interior of {cone.string()} '
            f'({membership.status}, margin {membership.margin:g})')
    return cone.point(x)


def are_collinear(x, y, tol=constants.COLLINEAR_TOL):
    """Returns True if the angle between x and y (as vectors) is below
    tol radians."""
    u = np.ravel(x) / np.linalg.norm(x)
    v = np.ravel(y) / np.linalg.norm(y)
    return 2 * np.arcsin(min(1.0, np.linalg.norm(u - v) / 2)) < tol


def are_equal(x, y, tol=constants.INTERIOR_TOL):
    """Returns True if x and y agree within tol relative to their size."""
    scale = max(utils.sup_norm(x), utils.sup_norm(y))
    return utils.sup_norm(np.asarray(x) - np.asarray(y)) <= tol * scale


def m_ratio(cone, x, y):
    """Returns (M(x/y), m(x/y)).

    Raises: DomainError if x or y is not an interior point.
    """
    x = require_interior(cone, x, 'x')
    y = require_interior(cone, y, 'y')
    big, small = cone.relative_bounds(x[np.newaxis], y)
    return float(big[0]), float(small[0])


def thompson_distance(cone, x, y):
    """Thompson's metric log max(M(x/y), M(y/x))."""
    big, small = m_ratio(cone, x, y)
    return max(np.log(big), -np.log(small))


def hilbert_distance(cone, x, y):
    """Hilbert's projective metric log(M(x/y) M(y/x))."""
    big, small = m_ratio(cone, x, y)
    return max(0.0, np.log(big) - np.log(small))


def thompson_distances(cone, points, base):
    """Vectorized thompson_distance(cone, p, base) for a stack of interior
    points; no membership validation."""
    big, small = cone.relative_bounds(points, base)
    return np.maximum(np.log(big), -np.log(small))


class BoundaryPoints:
    """Where the line through x and y leaves the cone.

    x_prime is the crossing beyond x and y_prime the crossing beyond y;
    either is None when the line does not meet the boundary on that side,
    in which case degenerate is True.
    """

    def __init__(self, x_prime, y_prime):
        self.x_prime = x_prime
        self.y_prime = y_prime
        self.degenerate = x_prime is None or y_prime is None


def line_boundary_points(cone, x, y):
    """Returns the BoundaryPoints of the line through x and y.

    With M = M(x/y) and m = m(x/y), x' = (x - m y) / (1 - m) and
    y' = (M y - x) / (M - 1); both lie on the affine line through x and y.

    Raises: DomainError if x and y are not interior or lie on one ray.
    """
    x = require_interior(cone, x, 'x')
    y = require_interior(cone, y, 'y')
    if are_collinear(x, y):
        raise DomainError('x and y lie on one ray; the line through them '
                          'never leaves the cone')
    big, small = m_ratio(cone, x, y)
    x_prime = (x - small * y) / (1 - small) if small < 1 else None
    y_prime = (big * y - x) / (big - 1) if big > 1 else None
    if x_prime is None or y_prime is None:
        logger.debug('Line meets the boundary once (M=%r, m=%r)', big, small)
    return BoundaryPoints(x_prime, y_prime)


def cross_ratio_distance(cone, x, y, phi=None):
    """Hilbert's cross-ratio metric on the section {z : phi(z) = 1}.

    Args:
        cone: The cone.
        x, y: Interior points.
        phi: A functional (point shaped, applied with np.vdot) strictly
        positive on the cone. Defaults to cone.unit_functional().

    Returns: log of the cross ratio of x', x, y, y' on the section. When
    the line meets the boundary only once the value falls back to
    log(M(x/y) M(y/x)).

    Raises: DomainError if phi is not positive on the points involved.
    """
    x = require_interior(cone, x, 'x')
    y = require_interior(cone, y, 'y')
    if are_equal(x, y) or are_collinear(x, y):
        return 0.0
    phi = cone.unit_functional() if phi is None else cone.point(phi, 'phi')
    ends = line_boundary_points(cone, x, y)
    if ends.degenerate:
        return hilbert_distance(cone, x, y)

    points = [ends.x_prime, x, y, ends.y_prime]
    values = [float(np.vdot(phi, p)) for p in points]
    if min(values) <= 0:
        raise DomainError('phi is not strictly positive on the cone')
    xp, xs, ys, yp = [p / v for p, v in zip(points, values)]

    def norm(a, b):
        return np.linalg.norm(np.ravel(a - b))

    return float(np.log(norm(xp, ys) / norm(xp, xs))
                 + np.log(norm(yp, xs) / norm(yp, ys)))


def hyperbolic_distance(cone, x, y):
    """Distance between the rays of x and y in the hyperboloid model.

    Both points are scaled onto the unit hyperboloid {q(z) = 1} of the
    Lorentz form q and the arccosh of their Lorentz product is returned
    (computed as 2 asinh(sqrt(-q(x - y)) / 2) for accuracy).

    Raises: InputError if cone is not a LorentzCone.
    """
    if not isinstance(cone, LorentzCone):
        raise InputError('hyperbolic_distance needs a Lorentz cone')
    x = require_interior(cone, x, 'x')
    y = require_interior(cone, y, 'y')
    alg = cone.algebra()
    x = x / np.sqrt(alg.minkowski(x, x))
    y = y / np.sqrt(alg.minkowski(y, y))
    gap = max(0.0, -alg.minkowski(x - y, x - y))
    return float(2 * np.arcsinh(np.sqrt(gap) / 2))
