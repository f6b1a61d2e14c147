"""Log-embeddings of polyhedral cones into sup-norm space, the global chart
of simplicial cones, generalized Gromov products and the boundary-sequence
experiments used to probe (non-)embeddability of non-polyhedral cones."""

import logging

import numpy as np

import conemetric.constants as constants
import conemetric.utils as utils
from conemetric.cones import (PolyhedralCone, classify, require_interior,
                              thompson_distance)
from conemetric.utils import DomainError, InputError, NumericError

logger = logging.getLogger(__name__)


class LogEmbedding:
    """x -> (log psi_1(x), ..., log psi_m(x)) for a polyhedral cone.

    With facet-defining rows this is an isometry from the interior with
    Thompson's metric into (R^m, sup norm).
    """

    def __init__(self, cone, check_redundancy=True, seed=constants.DEFAULT_SEED):
        """
        Args:
            cone: A PolyhedralCone.
            check_redundancy: If set, sampled pairs are used to find facet
            rows that never realize the distance; a warning is logged for
            each.
            seed: Seed of the redundancy sampler.

        Raises: InputError if cone is not polyhedral.
        """
        if not isinstance(cone, PolyhedralCone):
            raise InputError(f'{cone.string()} is not a polyhedral cone')
        self.cone = cone
        self.target_dim = cone.facets.shape[0]
        if check_redundancy:
            for row in self.redundant_rows(seed=seed):
                logger.warning('Facet row %d never realizes a distance; it '
                               'may be redundant', row + 1)

    def embed(self, x):
        """Raises: DomainError if x is not an interior point."""
        x = require_interior(self.cone, x)
        return np.log(self.cone.facet_values(x))

    def embed_many(self, points):
        return np.log(self.cone.facet_values(points))

    def distance(self, x, y):
        """The sup-norm distance of the embedded points."""
        return utils.sup_norm(self.embed(x) - self.embed(y))

    def redundant_rows(self, samples=constants.VALIDATION_SAMPLES,
                       seed=constants.DEFAULT_SEED):
        """Indices of facet rows that never attain the maximal coordinate
        gap on sampled pairs."""
        rng = np.random.default_rng(seed)
        first = self.embed_many(self.cone.sample_interior(rng, samples))
        second = self.embed_many(self.cone.sample_interior(rng, samples))
        gaps = np.abs(first - second)
        winners = np.argmax(gaps, axis=1)
        return sorted(set(range(self.target_dim)) - set(winners.tolist()))


def log_embed(cone, x):
    """Log coordinates log psi_i(x) of an interior point of a polyhedral
    cone."""
    return LogEmbedding(cone, check_redundancy=False).embed(x)


class SimplicialChart:
    """x -> log(T x) for the simplicial cone generated by the columns of B,
    where T = B^{-1}."""

    def __init__(self, basis):
        self.basis = np.column_stack([utils.as_array(b, 'basis vector')
                                      for b in basis])
        n, k = self.basis.shape
        if n != k:
            raise InputError(f'Need {n} basis vectors in R^{n}, got {k}')
        self.condition = float(np.linalg.cond(self.basis))
        if not np.isfinite(self.condition) or self.condition > 1e12:
            raise DomainError(
                f'Basis is singular (condition number {self.condition:g})')
        self.transform = np.linalg.inv(self.basis)

    def cone(self):
        """The simplicial cone as a PolyhedralCone (facets = rows of T)."""
        return PolyhedralCone(self.transform)

    def forward(self, x):
        """Raises: DomainError if x is not in the interior of the cone."""
        coords = self.transform @ np.asarray(x, dtype=float)
        if np.min(coords) <= 0:
            raise DomainError('Point is not in the interior of the simplicial '
                              'cone')
        return np.log(coords)

    def inverse(self, z):
        return self.basis @ np.exp(np.asarray(z, dtype=float))


def simplicial_isometry(basis):
    """Returns the SimplicialChart of the cone generated by basis.

    Raises: DomainError if the basis is singular.
    """
    return SimplicialChart(basis)


def gromov_product(cone, p, x, y, eta):
    """(x|y)_{p,eta} = (d(x,p) + d(y,p) - eta d(x,y)) / 2.

    Raises: DomainError if eta <= 0 or a point is not interior.
    """
    if eta <= 0:
        raise DomainError(f'eta must be positive, got {eta}')
    return 0.5 * (thompson_distance(cone, x, p) + thompson_distance(cone, y, p)
                  - eta * thompson_distance(cone, x, y))


def _snap(values):
    """Zeroes the values of a boundary point that vanish up to rounding."""
    values = np.asarray(values, dtype=float)
    return np.where(values <= constants.ACTIVE_TOL * np.max(values), 0.0,
                    values)


def _log_spread(values):
    """max(log max v, -log min v), the distance to the base point of a point
    with relative values v."""
    return float(max(np.log(np.max(values)), -np.log(np.min(values))))


class _FacetFrame:
    """Points s p + (1 - s) w of a polyhedral cone, kept as their facet
    values relative to p: psi(s p + (1 - s) w) / psi(p) = s + (1 - s) r
    with r = psi(w) / psi(p)."""

    def __init__(self, cone, p, directions):
        base = cone.facet_values(p)
        self._ratios = [_snap(cone.facet_values(w) / base)
                        for w in directions]

    def _relative(self, i, s):
        return s + (1 - s) * self._ratios[i]

    def base_distance(self, i, s):
        return _log_spread(self._relative(i, s))

    def distance(self, i, s, j, t):
        return _log_spread(self._relative(i, s) / self._relative(j, t))


class _SpectralFrame:
    """Points s p + (1 - s) w of a symmetric cone, kept in the frame where p
    is the unit: P(p^{-1/2}) w = sum_j mu_j c_j, so the point becomes
    sum_j (s + (1 - s) mu_j) c_j."""

    def __init__(self, cone, p, directions):
        self._algebra = cone.algebra()
        h = self._algebra.power(p, -0.5)
        self._frames = []
        for w in directions:
            values, idempotents = self._algebra.eigen(
                self._algebra.quadratic_action(h, w))
            self._frames.append((_snap(values), idempotents))

    def _eigenvalues(self, i, s):
        return s + (1 - s) * self._frames[i][0]

    def _power(self, i, s, exponent):
        return sum(np.power(v, exponent) * c for v, c in
                   zip(self._eigenvalues(i, s), self._frames[i][1]))

    def _largest(self, i, s, j, t):
        # M(a/b) is the largest eigenvalue of P(b^{-1/2}) a.
        moved = self._algebra.quadratic_action(self._power(j, t, -0.5),
                                               self._power(i, s, 1))
        return float(self._algebra.eigenvalues_many(moved[np.newaxis])[0, -1])

    def base_distance(self, i, s):
        return _log_spread(self._eigenvalues(i, s))

    def distance(self, i, s, j, t):
        return float(np.log(max(self._largest(i, s, j, t),
                                self._largest(j, t, i, s))))


def _frame(cone, p, directions):
    if isinstance(cone, PolyhedralCone):
        return _FacetFrame(cone, p, directions)
    if cone.algebra() is not None:
        return _SpectralFrame(cone, p, directions)
    raise InputError(f'Boundary sequences are not supported on '
                     f'{cone.string()}')


class BoundarySequence:
    """The points x_k = s_k p + (1 - s_k) w, k = 1, 2, ..., on the segment
    from an interior point p towards a boundary point w, with d(x_k, p) = k.

    Behaves as a list of the points. Past k ~ 20 the rounded coordinates of
    x_k no longer fix its distances to 1e-9, so the weights s_k are kept and
    distances() and distances_to() evaluate from (p, w, s_k) instead of from
    the points.
    """

    def __init__(self, frame, index, p, direction, weights):
        self._frame = frame
        self._index = index
        self.p = p
        self.direction = direction
        self.weights = np.asarray(weights, dtype=float)

    def __len__(self):
        return len(self.weights)

    def __getitem__(self, k):
        s = self.weights[k]
        return s * self.p + (1 - s) * self.direction

    def __iter__(self):
        return (self[k] for k in range(len(self)))

    def distances(self):
        """d(x_k, p) for every term."""
        return np.array([self._frame.base_distance(self._index, s)
                         for s in self.weights])

    def distances_to(self, other):
        """d(x_k, y_k) termwise against another sequence.

        Raises: InputError if the sequences differ in length or come from
        different boundary_sequences calls.
        """
        if other._frame is not self._frame:
            raise InputError('Sequences come from different '
                             'boundary_sequences calls')
        if len(other) != len(self):
            raise InputError(f'Sequences have {len(self)} and {len(other)} '
                             'terms')
        return np.array([self._frame.distance(self._index, s, other._index, t)
                         for s, t in zip(self.weights, other.weights)])


class GromovSeries:
    """Gromov products (x_k|y_k)_{p,eta} of two boundary sequences, indexed
    by k = 1, 2, ..."""

    def __init__(self, first, second, eta):
        """
        Args:
            first, second: BoundarySequence objects of one
            boundary_sequences call.
            eta: Positive multiplier of d(x_k, y_k).

        Raises: DomainError if eta <= 0.
        """
        if eta <= 0:
            raise DomainError(f'eta must be positive, got {eta}')
        self.eta = eta
        self.first = first
        self.second = second
        values = 0.5 * (first.distances() + second.distances()
                        - eta * first.distances_to(second))
        self.values = values.tolist()

    def rows(self):
        """List of (k, value) pairs."""
        return [(k + 1, v) for k, v in enumerate(self.values)]

    def tail_max(self, tail_start=10):
        """Max of the values with k >= tail_start."""
        tail = self.values[tail_start - 1:]
        if not tail:
            raise InputError(f'Series has no terms with k >= {tail_start}')
        return max(tail)

    def bounded(self, limit, tail_start=10):
        return self.tail_max(tail_start) <= limit


def _normalize_directions(cone, directions, phi):
    ret = []
    for i, w in enumerate(directions):
        w = cone.point(w, f'direction {i + 1}')
        membership = classify(cone, w)
        if membership.status != 'boundary':
            raise DomainError(
                f'Direction {i + 1} is not on the boundary '
                f'({membership.status})')
        value = float(np.vdot(phi, w))
        if value <= 0:
            raise DomainError(f'Functional is not positive on direction '
                              f'{i + 1}')
        ret.append(w / value)
    for i in range(len(ret)):
        for j in range(i + 1, len(ret)):
            if classify(cone, (ret[i] + ret[j]) / 2).status != 'interior':
                raise DomainError(
                    f'Chord between directions {i + 1} and {j + 1} is not in '
                    'the interior')
    return ret


def _weight_at_distance(frame, index, k):
    """Finds the weight s with d(s p + (1 - s) w, p) = k, bisecting in
    log s."""
    def distance(log_s):
        return frame.base_distance(index, np.exp(log_s))

    hi = 0.0
    lo = -1.0
    achieved = distance(lo)
    while achieved < k:
        lo *= 2
        if lo < -700:
            raise NumericError(
                f'Distance {k} not reached along direction (maximum '
                f'{achieved:.6g})')
        achieved = distance(lo)
    logger.debug('Bracket for k=%d: log s in [%g, %g]', k, lo, hi)

    while True:
        mid = (lo + hi) / 2
        value = distance(mid)
        if abs(value - k) <= constants.BISECTION_TOL:
            break
        if value < k:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 4 * np.finfo(float).eps * abs(lo):
            logger.debug('Bisection for k=%d stopped at resolution', k)
            break
    return float(np.exp(mid))


def boundary_sequences(cone, p, directions, k_max, phi=None):
    """For every boundary direction w_i and k = 1..k_max, the point x_k^i on
    the segment from p to w_i with d(x_k^i, p) = k.

    Args:
        cone: A polyhedral or symmetric cone.
        p: Interior base point.
        directions: Boundary points. Each is normalized to phi(w) = 1.
        k_max: Number of terms of each sequence.
        phi: Strictly positive functional; defaults to
        cone.unit_functional().

    Returns: List of BoundarySequence, one per direction.

    Raises: DomainError if a direction is not on the boundary or a chord is
    not interior, NumericError if a distance cannot be reached.
    """
    p = require_interior(cone, p, 'p')
    if k_max < 1:
        raise InputError(f'k_max must be >= 1, got {k_max}')
    phi = cone.unit_functional() if phi is None else cone.point(phi, 'phi')
    normalized = _normalize_directions(cone, directions, phi)
    frame = _frame(cone, p, normalized)
    return [BoundarySequence(frame, i, p, w,
                             [_weight_at_distance(frame, i, k)
                              for k in range(1, k_max + 1)])
            for i, w in enumerate(normalized)]


def gromov_series(cone, p, directions, k_max, eta=2.0):
    """Boundary sequences for two directions and their Gromov products."""
    if len(directions) != 2:
        raise InputError('A Gromov series needs exactly two directions')
    first, second = boundary_sequences(cone, p, directions, k_max)
    return GromovSeries(first, second, eta)


def parallel_gap(cone, u, v1, v2, t):
    """d(e^t u + e^{-t} v1, e^t u + e^{-t} v2).

    Raises: DomainError if either point is not interior.
    """
    u, v1, v2 = (cone.point(z) for z in (u, v1, v2))
    first = np.exp(t) * u + np.exp(-t) * v1
    second = np.exp(t) * u + np.exp(-t) * v2
    return thompson_distance(cone, first, second)
