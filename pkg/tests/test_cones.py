"""Tests for conemetric.cones module."""
import unittest

import numpy as np

import conemetric
from conemetric import (LorentzCone, Orthant, PolyhedralCone, PSDCone,
                        are_collinear, are_equal, classify,
                        cross_ratio_distance, from_dict, hilbert_distance,
                        hyperbolic_distance, line_boundary_points, m_ratio,
                        require_interior, thompson_distance, to_dict)
from conemetric.cones import thompson_distances
from conemetric.utils import DomainError, InputError

SQUARE_FACETS = [[1, 0, 1], [-1, 0, 1], [0, 1, 1], [0, -1, 1]]
HEXAGON_FACETS = [[np.cos(a), np.sin(a), 1]
                  for a in np.arange(6) * np.pi / 3]


def all_cones():
    return [Orthant(3), PolyhedralCone(SQUARE_FACETS), LorentzCone(4),
            PSDCone(3)]


def metric_cones():
    return [Orthant(4), PolyhedralCone(HEXAGON_FACETS), LorentzCone(3),
            PSDCone(3)]


def hyperboloid_point(rng, dim):
    r = rng.uniform(0, 3)
    direction = rng.normal(size=dim - 1)
    direction /= np.linalg.norm(direction)
    return np.concatenate(([np.cosh(r)], np.sinh(r) * direction))


class DictTest(unittest.TestCase):
    def test_round_trip(self):
        for cone in all_cones():
            d = to_dict(cone)
            self.assertEqual(d, to_dict(from_dict(d)))
            self.assertEqual(type(cone), type(from_dict(d)))

    def test_string(self):
        self.assertEqual('orthant(3)', Orthant(3).string())
        self.assertEqual('psd(2)', PSDCone(2).string())

    def test_unknown_kind(self):
        with self.assertRaisesRegex(InputError, 'Unknown cone kind'):
            from_dict({'Kind': 'cube', 'Dim': 3})

    def test_extra_keys(self):
        with self.assertRaisesRegex(InputError, 'Extra attributes'):
            from_dict({'Kind': 'orthant', 'Dim': 3, 'Size': 2})

    def test_missing_dim(self):
        with self.assertRaisesRegex(InputError, 'Dim'):
            from_dict({'Kind': 'lorentz'})

    def test_facet_dim_mismatch(self):
        with self.assertRaisesRegex(InputError, 'Dim is 2'):
            from_dict({'Kind': 'polyhedral', 'Dim': 2,
                       'Facets': SQUARE_FACETS})

    def test_bad_dims(self):
        with self.assertRaises(InputError):
            Orthant(0)
        with self.assertRaises(InputError):
            LorentzCone(1)
        with self.assertRaises(InputError):
            PSDCone(0)


class PolyhedralConeTest(unittest.TestCase):
    def test_zero_row(self):
        with self.assertRaisesRegex(InputError, 'nonzero'):
            PolyhedralCone([[1, 0], [0, 0], [0, 1]])

    def test_not_pointed(self):
        with self.assertRaisesRegex(DomainError, 'contains a line'):
            PolyhedralCone([[1, 0], [2, 0]])

    def test_empty_interior(self):
        with self.assertRaisesRegex(DomainError, 'empty interior'):
            PolyhedralCone([[1, 0], [-1, 0], [0, 1], [0, -1]])

    def test_interior_witness(self):
        cone = PolyhedralCone(SQUARE_FACETS)
        np.testing.assert_allclose([0, 0, 1], cone.witness, atol=1e-9)
        self.assertEqual('interior', classify(cone, cone.witness).status)

    def test_facet_values(self):
        cone = PolyhedralCone(SQUARE_FACETS)
        np.testing.assert_allclose([1.5, 0.5, 1, 1],
                                   cone.facet_values([0.5, 0, 1]))
        np.testing.assert_allclose([0, 0, 4], cone.unit_functional())


class MembershipTest(unittest.TestCase):
    def test_orthant(self):
        cone = Orthant(3)
        self.assertEqual('interior', classify(cone, [1, 2, 3]).status)
        membership = classify(cone, [1, 0, 1])
        self.assertEqual('boundary', membership.status)
        self.assertEqual(0, membership.margin)
        membership = classify(cone, [1, -2, 1])
        self.assertEqual('outside', membership.status)
        self.assertEqual(-2, membership.margin)

    def test_scale_invariance(self):
        cone = Orthant(2)
        self.assertEqual('interior', classify(cone, [1e9, 1]).status)
        self.assertEqual('boundary', classify(cone, [1e12, 1e-1]).status)

    def test_lorentz(self):
        cone = LorentzCone(3)
        self.assertEqual('interior', classify(cone, [2, 1, 1]).status)
        self.assertEqual('boundary', classify(cone, [5, 3, 4]).status)
        self.assertEqual('outside', classify(cone, [1, 1, 1]).status)

    def test_psd(self):
        cone = PSDCone(2)
        self.assertEqual('interior', classify(cone, [[2, 1], [1, 2]]).status)
        self.assertEqual('boundary', classify(cone, [[1, 1], [1, 1]]).status)
        self.assertEqual('outside', classify(cone, [[1, 2], [2, 1]]).status)

    def test_bad_points(self):
        with self.assertRaisesRegex(InputError, 'shape'):
            Orthant(3).point([1, 2])
        with self.assertRaisesRegex(InputError, 'not symmetric'):
            PSDCone(2).point([[1, 0.5], [0, 1]])
        with self.assertRaisesRegex(DomainError, 'not in the interior'):
            require_interior(Orthant(2), [1, 0])

    def test_samples_are_interior(self):
        rng = np.random.default_rng(0)
        for cone in all_cones():
            points = cone.sample_interior(rng, 20)
            self.assertEqual((20,) + cone.shape(), points.shape)
            for p in points:
                self.assertEqual('interior', classify(cone, p).status)


class RelationsTest(unittest.TestCase):
    def test_collinear(self):
        self.assertTrue(are_collinear(np.array([1.0, 2.0]),
                                      np.array([2.0, 4.0])))
        self.assertFalse(are_collinear(np.array([1.0, 2.0]),
                                       np.array([2.0, 4.001])))

    def test_equal(self):
        self.assertTrue(are_equal(np.array([1.0, 2.0]),
                                  np.array([1.0, 2.0 + 1e-12])))
        self.assertFalse(are_equal(np.array([1.0, 2.0]),
                                   np.array([2.0, 4.0])))


class DistanceTest(unittest.TestCase):
    def test_orthant(self):
        cone = Orthant(3)
        x = [2, 1, 1]
        y = [1, 1, 2]
        big, small = m_ratio(cone, x, y)
        self.assertAlmostEqual(2, big)
        self.assertAlmostEqual(0.5, small)
        self.assertAlmostEqual(np.log(2), thompson_distance(cone, x, y))
        self.assertAlmostEqual(np.log(4), hilbert_distance(cone, x, y))

    def test_psd(self):
        cone = PSDCone(2)
        self.assertAlmostEqual(
            np.log(2), thompson_distance(cone, np.eye(2), np.diag([2, 0.5])))
        self.assertAlmostEqual(
            np.log(4), hilbert_distance(cone, np.eye(2), np.diag([2, 0.5])))

    def test_lorentz(self):
        cone = LorentzCone(3)
        a = 0.6
        self.assertAlmostEqual(
            -np.log(1 - a),
            thompson_distance(cone, [1, 0, 0], [1, a, 0]))
        self.assertAlmostEqual(
            np.log((1 + a) / (1 - a)),
            hilbert_distance(cone, [1, 0, 0], [1, a, 0]))

    def test_rays(self):
        rng = np.random.default_rng(1)
        for cone in all_cones():
            x = cone.sample_interior(rng, 1)[0]
            self.assertAlmostEqual(np.log(3), thompson_distance(cone, x,
                                                                3 * x))
            self.assertAlmostEqual(0, hilbert_distance(cone, x, 3 * x))

    def test_needs_interior(self):
        with self.assertRaisesRegex(DomainError, 'y is not in the interior'):
            thompson_distance(Orthant(2), [1, 1], [1, 0])

    def test_metric_axioms(self):
        rng = np.random.default_rng(2)
        for cone in metric_cones():
            points = cone.sample_interior(rng, 600)
            for x, y, z in zip(points[0::3], points[1::3], points[2::3]):
                dxy = thompson_distance(cone, x, y)
                self.assertGreaterEqual(dxy, 0)
                self.assertLessEqual(abs(dxy - thompson_distance(cone, y, x)),
                                     1e-12)
                self.assertLessEqual(
                    dxy, thompson_distance(cone, x, z)
                    + thompson_distance(cone, z, y) + 1e-9)
                self.assertLessEqual(thompson_distance(cone, x, x), 1e-10)
                hxy = hilbert_distance(cone, x, y)
                self.assertLessEqual(
                    hxy, hilbert_distance(cone, x, z)
                    + hilbert_distance(cone, z, y) + 1e-9)
                self.assertLessEqual(hxy, 2 * dxy + 1e-9)

    def test_m_ratio_duality_and_scaling(self):
        rng = np.random.default_rng(9)
        for cone in metric_cones():
            points = cone.sample_interior(rng, 100)
            for x, y in zip(points[0::2], points[1::2]):
                big, small = m_ratio(cone, x, y)
                big_back, small_back = m_ratio(cone, y, x)
                self.assertAlmostEqual(1, small * big_back, delta=1e-12)
                self.assertAlmostEqual(1, big * small_back, delta=1e-12)
                self.assertAlmostEqual(thompson_distance(cone, x, y),
                                       thompson_distance(cone, 10 * x, 10 * y),
                                       delta=1e-12)
                for scale in (0.1, 10):
                    self.assertAlmostEqual(
                        hilbert_distance(cone, x, y),
                        hilbert_distance(cone, scale * x, y / scale),
                        delta=1e-12)

    def test_nearby_lorentz_points(self):
        cone = LorentzCone(3)
        for x in ([2, 1, 0.5], [3, 1, -2]):
            x = np.array(x, dtype=float)
            self.assertAlmostEqual(
                1e-8, thompson_distance(cone, x, x * np.exp(1e-8)),
                delta=1e-14)
        self.assertAlmostEqual(
            1e-8, thompson_distance(cone, [1, 0, 0],
                                    [np.cosh(1e-8), np.sinh(1e-8), 0]),
            delta=1e-15)

    def test_vectorized_distances(self):
        rng = np.random.default_rng(3)
        for cone in all_cones():
            points = cone.sample_interior(rng, 5)
            base = cone.sample_interior(rng, 1)[0]
            expected = [thompson_distance(cone, p, base) for p in points]
            np.testing.assert_allclose(
                expected, thompson_distances(cone, points, base), rtol=1e-9)


class BoundaryPointsTest(unittest.TestCase):
    def test_orthant(self):
        ends = line_boundary_points(Orthant(2), [1, 1], [4, 0.25])
        self.assertFalse(ends.degenerate)
        np.testing.assert_allclose([0, 1.25], ends.x_prime, atol=1e-12)
        np.testing.assert_allclose([5, 0], ends.y_prime, atol=1e-12)

    def test_degenerate(self):
        ends = line_boundary_points(Orthant(2), [2, 3], [1, 1])
        self.assertTrue(ends.degenerate)
        self.assertIsNone(ends.x_prime)
        np.testing.assert_allclose([0.5, 0], ends.y_prime, atol=1e-12)

    def test_collinear(self):
        with self.assertRaisesRegex(DomainError, 'one ray'):
            line_boundary_points(Orthant(2), [1, 1], [2, 2])

    def test_ends_on_boundary(self):
        rng = np.random.default_rng(4)
        for cone in all_cones():
            x, y = cone.sample_interior(rng, 2)
            ends = line_boundary_points(cone, x, y)
            for end in (ends.x_prime, ends.y_prime):
                if end is not None:
                    self.assertEqual('boundary', classify(cone, end).status)


class CrossRatioTest(unittest.TestCase):
    def test_example(self):
        self.assertAlmostEqual(
            np.log(16), cross_ratio_distance(Orthant(2), [1, 1], [4, 0.25]))

    def test_equal_and_collinear(self):
        self.assertEqual(0, cross_ratio_distance(Orthant(2), [1, 1], [1, 1]))
        self.assertEqual(0, cross_ratio_distance(Orthant(2), [1, 1], [3, 3]))

    def test_matches_hilbert(self):
        rng = np.random.default_rng(5)
        for cone in all_cones() + metric_cones():
            for _ in range(100):
                x, y = cone.sample_interior(rng, 2)
                self.assertAlmostEqual(hilbert_distance(cone, x, y),
                                       cross_ratio_distance(cone, x, y),
                                       delta=1e-9)

    def test_other_section(self):
        cone = Orthant(3)
        x = np.array([1.0, 2.0, 3.0])
        y = np.array([3.0, 1.0, 2.0])
        self.assertAlmostEqual(
            hilbert_distance(cone, x, y),
            cross_ratio_distance(cone, x, y, phi=[1, 5, 2]))

    def test_bad_section(self):
        with self.assertRaisesRegex(DomainError, 'phi'):
            cross_ratio_distance(Orthant(2), [1, 1], [4, 0.25], phi=[1, -1])


class HyperbolicDistanceTest(unittest.TestCase):
    def test_half_of_hilbert(self):
        cone = LorentzCone(3)
        rng = np.random.default_rng(6)
        for _ in range(5):
            x, y = cone.sample_interior(rng, 2)
            self.assertAlmostEqual(hilbert_distance(cone, x, y),
                                   2 * hyperbolic_distance(cone, x, y))

    def test_example(self):
        self.assertAlmostEqual(
            np.arctanh(0.6),
            hyperbolic_distance(LorentzCone(3), [2, 0, 0], [1, 0.6, 0]))
        self.assertAlmostEqual(
            1.0, thompson_distance(LorentzCone(3), [1, 0, 0],
                                   [np.cosh(1), np.sinh(1), 0]),
            delta=1e-12)

    def test_hyperboloid_points(self):
        rng = np.random.default_rng(8)
        for dim in (3, 4):
            cone = LorentzCone(dim)
            for _ in range(100):
                x = hyperboloid_point(rng, dim)
                y = hyperboloid_point(rng, dim)
                expected = np.arccosh(cone.algebra().minkowski(x, y))
                self.assertAlmostEqual(expected, thompson_distance(cone, x, y),
                                       delta=1e-9)
                self.assertAlmostEqual(expected,
                                       hyperbolic_distance(cone, x, y),
                                       delta=1e-9)

    def test_needs_lorentz(self):
        with self.assertRaisesRegex(InputError, 'Lorentz'):
            hyperbolic_distance(Orthant(2), [1, 1], [1, 2])


class CoordinatesTest(unittest.TestCase):
    def test_psd_vector_is_isometric(self):
        cone = PSDCone(3)
        rng = np.random.default_rng(7)
        x, y = cone.sample_interior(rng, 2)
        self.assertAlmostEqual(np.vdot(x, y),
                               np.dot(cone.to_vector(x), cone.to_vector(y)))
        np.testing.assert_allclose(x, cone.from_vector(cone.to_vector(x)))
        self.assertEqual(6, cone.ambient_dim())

    def test_package_exports(self):
        self.assertIs(conemetric.Orthant, Orthant)


if __name__ == '__main__':
    unittest.main()
