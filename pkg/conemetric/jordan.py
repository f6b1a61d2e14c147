"""Euclidean Jordan algebras whose cones of squares are the symmetric cones
handled by conemetric: the orthant, the cone of positive semidefinite
matrices and the Lorentz cone.

Points are numpy arrays in their natural shape: vectors for the orthant
and spin factor algebras, k x k symmetric arrays for sym(k). Linear
operators (L(x), P(x)) are dense matrices acting on the flattened
(row-major) coordinates of a point.

The spectral decomposition is the workhorse of this module. Every function
of a point (powers, inverses, logarithms) goes through
JordanAlgebra.spectral() so that all of them agree with each other.
"""

import logging
from abc import ABC, abstractmethod

import numpy as np
from scipy import linalg

import conemetric.constants as constants
from conemetric.utils import DomainError, InputError, NumericError

logger = logging.getLogger(__name__)


class SpectralDecomp:
    """Distinct eigenvalues of a point with its complete system of
    orthogonal idempotents: x = sum_i eigenvalues[i] * idempotents[i]."""

    def __init__(self, eigenvalues, idempotents):
        assert len(eigenvalues) == len(idempotents)
        self.eigenvalues = np.asarray(eigenvalues, dtype=float)
        self.idempotents = list(idempotents)

    def __len__(self):
        return len(self.eigenvalues)

    def apply(self, fn):
        """Spectral calculus: returns sum_i fn(lambda_i) c_i."""
        values = fn(self.eigenvalues)
        ret = np.zeros_like(self.idempotents[0])
        for value, c in zip(values, self.idempotents):
            ret = ret + value * c
        return ret

    def reconstruct(self):
        return self.apply(lambda v: v)

    def index_of(self, value):
        """Returns the index of the eigenvalue closest to value."""
        return int(np.argmin(np.abs(self.eigenvalues - value)))


def cluster(eigenvalues, idempotents, tol=constants.CLUSTER_TOL):
    """Merges nearly equal eigenvalues into single spectral values.

    Args:
        eigenvalues: Eigenvalues of the primitive idempotents, ascending.
        idempotents: Primitive idempotents matching eigenvalues.
        tol: Relative gap under which neighbouring eigenvalues are merged.

    Returns: A SpectralDecomp with distinct eigenvalues. Each merged value
    is the mean of its members and its idempotent is the sum of theirs.
    """
    radius = max(np.max(np.abs(eigenvalues)), np.finfo(float).tiny)
    groups = [[0]]
    for i in range(1, len(eigenvalues)):
        a, b = eigenvalues[i - 1], eigenvalues[i]
        scale = max(abs(a), abs(b), 1e-5 * radius)
        if b - a <= tol * scale:
            groups[-1].append(i)
        else:
            groups.append([i])

    values = [float(np.mean([eigenvalues[i] for i in g])) for g in groups]
    projections = [sum(idempotents[i] for i in g) for g in groups]
    return SpectralDecomp(values, projections)


class JordanAlgebra(ABC):
    """A Euclidean Jordan algebra realized on a coordinate space.

    Subclasses implement the product, the unit, the shape of points and the
    primitive spectral decomposition; everything else is derived here.
    """

    @abstractmethod
    def shape(self):
        """Shape of a point (as accepted by the algebra's methods)."""
        pass

    @abstractmethod
    def unit(self):
        """The unit element e."""
        pass

    @abstractmethod
    def product(self, x, y):
        """The Jordan product x o y."""
        pass

    @abstractmethod
    def eigen(self, x):
        """Primitive spectral decomposition.

        Returns: (eigenvalues, idempotents) where eigenvalues are ascending
        (with repetition) and idempotents are the matching primitive
        idempotents of a Jordan frame.
        """
        pass

    @abstractmethod
    def eigenvalues_many(self, points):
        """Eigenvalues (ascending, with repetition) of a stack of points.

        Args:
            points: Array of shape (count,) + self.shape().

        Returns: Array of shape (count, rank).
        """
        pass

    def name(self):
        return self.__class__.__name__

    def size(self):
        """Number of coordinates of a point."""
        return int(np.prod(self.shape()))

    def check_point(self, x, name='point'):
        """Returns x as a float array of the algebra's shape.

        Raises: InputError if x has the wrong shape.
        """
        x = np.asarray(x, dtype=float)
        if x.shape != self.shape():
            raise InputError(
                f'{name} has shape {x.shape}, expected {self.shape()}')
        return x

    def multiplication_operator(self, x):
        """L(x) as a matrix acting on flattened coordinates."""
        x = self.check_point(x)
        n = self.size()
        basis = np.eye(n).reshape((n,) + self.shape())
        return np.column_stack(
            [np.ravel(self.product(x, b)) for b in basis])

    def quadratic_rep(self, x):
        """P(x) = 2 L(x)^2 - L(x^2) as a matrix on flattened coordinates."""
        x = self.check_point(x)
        lx = self.multiplication_operator(x)
        return 2 * lx @ lx - self.multiplication_operator(self.product(x, x))

    def quadratic_action(self, x, y):
        """Returns P(x) y."""
        x = self.check_point(x)
        y = self.check_point(y)
        return 2 * self.product(x, self.product(x, y)) - self.product(
            self.product(x, x), y)

    def inner(self, x, y):
        """Trace inner product (up to a positive constant factor)."""
        return float(np.vdot(x, y))

    def spectral(self, x):
        """Returns the SpectralDecomp of x with clustered eigenvalues."""
        x = self.check_point(x)
        try:
            eigenvalues, idempotents = self.eigen(x)
        except (linalg.LinAlgError, ValueError) as e:
            raise NumericError(f'Eigen-decomposition failed: {e}') from None
        return cluster(eigenvalues, idempotents)

    def eigenvalues(self, x):
        """Distinct (clustered) eigenvalues of x, ascending."""
        return self.spectral(x).eigenvalues

    def power(self, x, p):
        """Returns x^p computed through the spectral decomposition.

        Raises: DomainError if p is fractional or negative and x has a
        nonpositive eigenvalue.
        """
        decomp = self.spectral(x)
        integral = float(p).is_integer() and p >= 0
        if not integral and np.min(decomp.eigenvalues) <= 0:
            raise DomainError(
                f'Power {p} needs a positive spectrum, got minimum '
                f'eigenvalue {np.min(decomp.eigenvalues)}')
        return decomp.apply(lambda v: np.power(v, float(p)))

    def inverse(self, x):
        return self.power(x, -1)

    def sqrt(self, x):
        return self.power(x, 0.5)

    def log(self, x):
        decomp = self.spectral(x)
        if np.min(decomp.eigenvalues) <= 0:
            raise DomainError('Logarithm needs a positive spectrum')
        return decomp.apply(np.log)

    def _check_positive(self, x, y):
        x = self.check_point(x, 'x')
        y = self.check_point(y, 'y')
        for point, label in ((x, 'x'), (y, 'y')):
            low = np.min(self.eigen(point)[0])
            if low <= 0:
                raise DomainError(
                    f'{label} is not in the interior (minimum eigenvalue '
                    f'{low})')
        return x, y

    def relative_eigenvalues(self, x, y):
        """Eigenvalues of P(y^{-1/2}) x, ascending, with repetition.

        Raises: DomainError if x or y is not in the interior of the cone of
        squares.
        """
        x, y = self._check_positive(x, y)
        z = self.quadratic_action(self.power(y, -0.5), x)
        return self.eigen(z)[0]

    def relative_spectrum(self, x, y):
        """Distinct eigenvalues of P(y^{-1/2}) x, ascending (clustered)."""
        values = self.relative_eigenvalues(x, y)
        return cluster(values, [np.zeros(1)] * len(values)).eigenvalues

    def relative_extremes_many(self, points, base):
        """Largest and smallest eigenvalues of P(base^{-1/2}) p for a stack
        of points p.

        Returns: (lambda_max, lambda_min) arrays of length count.
        """
        h = self.power(base, -0.5)
        moved = np.stack([self.quadratic_action(h, p) for p in points])
        values = self.eigenvalues_many(moved)
        return values[:, -1], values[:, 0]


class OrthantAlgebra(JordanAlgebra):
    """R^n with the componentwise product."""

    def __init__(self, n):
        assert n >= 1
        self.n = n

    def shape(self):
        return (self.n,)

    def unit(self):
        return np.ones(self.n)

    def product(self, x, y):
        return np.asarray(x, dtype=float) * np.asarray(y, dtype=float)

    def multiplication_operator(self, x):
        return np.diag(self.check_point(x))

    def quadratic_rep(self, x):
        return np.diag(self.check_point(x) ** 2)

    def quadratic_action(self, x, y):
        return self.check_point(x) ** 2 * self.check_point(y)

    def eigen(self, x):
        order = np.argsort(x, kind='stable')
        basis = np.eye(self.n)
        return x[order], [basis[i] for i in order]

    def eigenvalues_many(self, points):
        return np.sort(np.asarray(points, dtype=float), axis=1)

    def relative_extremes_many(self, points, base):
        ratios = np.asarray(points, dtype=float) / base
        return ratios.max(axis=1), ratios.min(axis=1)


class SymmetricMatrixAlgebra(JordanAlgebra):
    """Real symmetric k x k matrices with x o y = (xy + yx) / 2."""

    def __init__(self, k):
        assert k >= 1
        self.k = k

    def shape(self):
        return (self.k, self.k)

    def unit(self):
        return np.eye(self.k)

    def product(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return (x @ y + y @ x) / 2

    def quadratic_rep(self, x):
        x = self.check_point(x)
        return np.kron(x, x)

    def quadratic_action(self, x, y):
        x = self.check_point(x)
        y = self.check_point(y)
        return x @ y @ x

    def eigen(self, x):
        w, v = linalg.eigh((x + x.T) / 2)
        projections = [np.outer(v[:, i], v[:, i]) for i in range(self.k)]
        return w, projections

    def eigenvalues_many(self, points):
        points = np.asarray(points, dtype=float)
        return np.linalg.eigvalsh((points + np.swapaxes(points, 1, 2)) / 2)

    def relative_eigenvalues(self, x, y):
        # Same eigenvalues as y^{-1/2} x y^{-1/2}: the pencil (x, y).
        x, y = self._check_positive(x, y)
        try:
            return linalg.eigh((x + x.T) / 2, (y + y.T) / 2,
                               eigvals_only=True)
        except linalg.LinAlgError as e:
            raise NumericError(f'Eigen-decomposition failed: {e}') from None

    def relative_extremes_many(self, points, base):
        try:
            chol = linalg.cholesky(base, lower=True)
        except linalg.LinAlgError as e:
            raise NumericError(f'Cholesky factorization failed: {e}') from None
        inv = linalg.solve_triangular(chol, np.eye(self.k), lower=True)
        moved = inv @ np.asarray(points, dtype=float) @ inv.T
        values = self.eigenvalues_many(moved)
        return values[:, -1], values[:, 0]


class SpinFactorAlgebra(JordanAlgebra):
    """R x R^n with (s, x) o (t, y) = (st + <x, y>, sy + tx).

    The first coordinate is the scalar part s; its cone of squares is the
    Lorentz cone s >= ||x||_2 in R^{n+1}.
    """

    def __init__(self, n):
        assert n >= 1
        self.n = n

    def shape(self):
        return (self.n + 1,)

    def unit(self):
        e = np.zeros(self.n + 1)
        e[0] = 1.0
        return e

    def product(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        ret = x[0] * y + y[0] * x
        ret[0] = x[0] * y[0] + np.dot(x[1:], y[1:])
        return ret

    def eigen(self, x):
        s, w = x[0], x[1:]
        norm = np.linalg.norm(w)
        if norm > 0:
            direction = w / norm
        else:
            direction = np.zeros(self.n)
            direction[0] = 1.0
        minus = 0.5 * np.concatenate(([1.0], -direction))
        plus = 0.5 * np.concatenate(([1.0], direction))
        return np.array([s - norm, s + norm]), [minus, plus]

    def eigenvalues_many(self, points):
        points = np.asarray(points, dtype=float)
        norms = np.linalg.norm(points[:, 1:], axis=1)
        return np.column_stack((points[:, 0] - norms, points[:, 0] + norms))

    def minkowski(self, x, y):
        """The Lorentz form x_0 y_0 - <x_1.., y_1..>."""
        return float(x[0] * y[0] - np.dot(x[1:], y[1:]))

    def pencil_discriminants(self, points, base):
        """B(x, y)^2 - q(x) q(y) for a stack of points x against y = base,
        where B is the Lorentz form and q(x) = B(x, x).

        Evaluated as ||x_0 v - y_0 u||^2 - ||u ^ v||^2 with u, v the spatial
        parts. Both terms shrink with x - y, so nearby points keep full
        relative accuracy, and the value is exactly zero when x lies on the
        ray of y.
        """
        points = np.asarray(points, dtype=float)
        base = np.asarray(base, dtype=float)
        u = points[:, 1:]
        v = base[1:]
        cross = points[:, :1] * v - base[0] * u
        wedge = (u[:, :, np.newaxis] * v[np.newaxis, np.newaxis, :]
                 - v[np.newaxis, :, np.newaxis] * u[:, np.newaxis, :])
        return np.maximum(np.sum(cross * cross, axis=1)
                          - 0.5 * np.sum(wedge * wedge, axis=(1, 2)), 0.0)

    def _pencil_roots(self, qx, qy, b, discriminant):
        # Roots of qy t^2 - 2 b t + qx, i.e. the t with q(x - t y) = 0.
        big = (b + np.sqrt(discriminant)) / qy
        return big, qx / (qy * big)

    def relative_eigenvalues(self, x, y):
        x, y = self._check_positive(x, y)
        big, small = self._pencil_roots(
            self.minkowski(x, x), self.minkowski(y, y), self.minkowski(x, y),
            float(self.pencil_discriminants(x[np.newaxis], y)[0]))
        return np.array([small, big])

    def relative_extremes_many(self, points, base):
        points = np.asarray(points, dtype=float)
        sign = np.concatenate(([1.0], -np.ones(self.n)))
        qx = np.einsum('ij,j,ij->i', points, sign, points)
        b = points @ (sign * base)
        return self._pencil_roots(qx, self.minkowski(base, base), b,
                                  self.pencil_discriminants(points, base))
