"""Unit-speed Thompson metric geodesics between interior points.

Two kinds of legs are used:

  * TypeOneLeg: t -> alpha (e^t u + e^{-t} v) with u, v on the boundary of
    the two-dimensional cone spanned by the endpoints. It joins x and y
    when M(x/y) = M(y/x) (a balanced pair).
  * TypeTwoLeg: a piece of the ray through a point, t -> e^{+-t} base.

An arbitrary pair is joined by first moving along a type one leg from x to
lambda y, lambda = balance_scale(x, y), and then along the ray from
lambda y to y. The ray_first variant does the ray part first; the two paths
have the same length and differ whenever the pair is not balanced.
"""

import logging
from abc import ABC, abstractmethod

import numpy as np

import conemetric.constants as constants
import conemetric.utils as utils
from conemetric.cones import (are_collinear, are_equal, line_boundary_points,
                              m_ratio, require_interior)
from conemetric.utils import DomainError, NumericError

logger = logging.getLogger(__name__)


class GeodesicLeg(ABC):
    """A unit-speed piece of a geodesic, parametrized over
    [t_start, t_end]."""

    def length(self):
        return self.t_end - self.t_start

    @abstractmethod
    def at(self, t):
        """The point at parameter t (not arclength)."""
        pass

    def start(self):
        return self.at(self.t_start)

    def end(self):
        return self.at(self.t_end)


class TypeOneLeg(GeodesicLeg):
    def __init__(self, u, v, alpha, t_start, t_end):
        assert alpha > 0
        assert t_start <= t_end
        self.u = u
        self.v = v
        self.alpha = alpha
        self.t_start = t_start
        self.t_end = t_end

    def at(self, t):
        return self.alpha * (np.exp(t) * self.u + np.exp(-t) * self.v)

    def __repr__(self):
        return (f'TypeOneLeg(alpha={self.alpha!r}, t_start={self.t_start!r}, '
                f't_end={self.t_end!r})')


class TypeTwoLeg(GeodesicLeg):
    def __init__(self, base, sign, t_end):
        assert sign in (-1, 1)
        assert t_end >= 0
        self.base = base
        self.sign = sign
        self.t_start = 0.0
        self.t_end = t_end

    def at(self, t):
        return np.exp(self.sign * t) * self.base

    def __repr__(self):
        return f'TypeTwoLeg(sign={self.sign}, t_end={self.t_end!r})'


class GeodesicPath:
    """A concatenation of legs from start to end, evaluated by arclength."""

    def __init__(self, legs, start, end):
        self.legs = list(legs)
        self.start = start
        self.end = end
        self.total_length = float(sum(leg.length() for leg in self.legs))

    def eval(self, s):
        """Returns the point at arclength s.

        Raises: DomainError if s is outside [0, total_length] by more than
        constants.PATH_SLACK.
        """
        slack = constants.PATH_SLACK * max(1.0, self.total_length)
        if s < -slack or s > self.total_length + slack:
            raise DomainError(
                f'Arclength {s} outside [0, {self.total_length}]')
        if s <= 0 or not self.legs:
            return self.start.copy()
        if s >= self.total_length:
            return self.end.copy()
        for leg in self.legs:
            if s <= leg.length():
                return leg.at(leg.t_start + s)
            s -= leg.length()
        return self.end.copy()

    def sample(self, count):
        """Returns count + 1 equally spaced (arclength, point) pairs."""
        assert count >= 1
        return [(self.total_length * j / count,
                 self.eval(self.total_length * j / count))
                for j in range(count + 1)]

    def midpoint(self):
        return self.eval(self.total_length / 2)

    def __repr__(self):
        return (f'GeodesicPath(legs={self.legs!r}, '
                f'total_length={self.total_length!r})')


def is_balanced(big, small):
    """Whether M(x/y) = big and M(y/x) = 1 / small agree."""
    other = 1 / small
    return abs(big - other) <= constants.BALANCE_TOL * max(big, other)


def balance_scale(cone, x, y):
    """Returns lambda = (M(x/y) / M(y/x))^{1/2}, for which
    M(x / lambda y) = M(lambda y / x)."""
    big, small = m_ratio(cone, x, y)
    return float(np.sqrt(big * small))


def type_one_path(cone, x, y):
    """The type one geodesic from x to y.

    Raises: DomainError if x and y are collinear or not balanced.
    """
    x = require_interior(cone, x, 'x')
    y = require_interior(cone, y, 'y')
    if are_collinear(x, y):
        raise DomainError('x and y lie on one ray; use type_two_path')
    big, small = m_ratio(cone, x, y)
    if not is_balanced(big, small):
        raise DomainError(
            f'x and y are not balanced (M(x/y)={big:g}, M(y/x)={1 / small:g}); '
            'use geodesic()')

    ends = line_boundary_points(cone, x, y)
    if ends.degenerate:
        raise NumericError('Balanced pair with a single boundary crossing')
    # u dominates near y, v near x.
    u = ends.y_prime / utils.sup_norm(ends.y_prime)
    v = ends.x_prime / utils.sup_norm(ends.x_prime)
    basis = np.column_stack((np.ravel(u), np.ravel(v)))
    rhs = np.column_stack((np.ravel(x), np.ravel(y)))
    coeffs = np.linalg.lstsq(basis, rhs, rcond=None)[0]
    (a_x, a_y), (b_x, b_y) = coeffs
    if min(a_x, a_y, b_x, b_y) <= 0:
        raise NumericError(
            f'Endpoints are not inside the boundary span: {coeffs.tolist()}')

    alpha = np.sqrt(a_x * b_x)
    t_x = 0.5 * np.log(a_x / b_x)
    t_y = 0.5 * np.log(a_y / b_y)
    if t_x > t_y:
        u, v, t_x, t_y = v, u, -t_x, -t_y
    logger.debug('Type one leg: alpha=%r t=[%r, %r]', alpha, t_x, t_y)
    return GeodesicPath([TypeOneLeg(u, v, alpha, t_x, t_y)], x, y)


def type_two_path(cone, x, lam):
    """The ray path from x to lam * x, of length |log lam|.

    Raises: DomainError if lam <= 0.
    """
    x = require_interior(cone, x, 'x')
    if lam <= 0:
        raise DomainError(f'Scale must be positive, got {lam}')
    if lam == 1:
        return GeodesicPath([], x, x)
    log_lam = float(np.log(lam))
    leg = TypeTwoLeg(x, 1 if log_lam > 0 else -1, abs(log_lam))
    return GeodesicPath([leg], x, lam * x)


def geodesic(cone, x, y, ray_first=False):
    """A geodesic path from x to y of length thompson_distance(x, y).

    Args:
        cone: The cone.
        x, y: Interior points.
        ray_first: If set, an unbalanced pair is joined by the ray from x
        to x / lambda followed by a type one leg, instead of a type one leg
        to lambda y followed by the ray to y.

    Returns: A GeodesicPath.
    """
    x = require_interior(cone, x, 'x')
    y = require_interior(cone, y, 'y')
    if are_equal(x, y):
        return GeodesicPath([], x, y)
    big, small = m_ratio(cone, x, y)
    if are_collinear(x, y):
        path = type_two_path(cone, x, 1 / np.sqrt(big * small))
        return GeodesicPath(path.legs, x, y)
    if is_balanced(big, small):
        return type_one_path(cone, x, y)

    lam = float(np.sqrt(big * small))
    if ray_first:
        first = type_two_path(cone, x, 1 / lam)
        second = type_one_path(cone, x / lam, y)
    else:
        first = type_one_path(cone, x, lam * y)
        second = type_two_path(cone, lam * y, 1 / lam)
    return GeodesicPath(first.legs + second.legs, x, y)


def off_path_distance(path, w, d_xw):
    """Relative sup-norm distance between w and the path point at
    arclength d_xw (clamped to the path)."""
    s = min(max(d_xw, 0.0), path.total_length)
    point = path.eval(s)
    return utils.sup_norm(np.asarray(w) - point) / utils.sup_norm(point)
