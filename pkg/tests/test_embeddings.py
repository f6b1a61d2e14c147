"""Tests for conemetric.embeddings module."""
import unittest

import numpy as np

from conemetric import (LorentzCone, Orthant, PolyhedralCone, PSDCone,
                        thompson_distance)
from conemetric.embeddings import (GromovSeries, LogEmbedding,
                                   boundary_sequences, gromov_product,
                                   gromov_series, log_embed, parallel_gap,
                                   simplicial_isometry)
from conemetric.utils import DomainError, InputError

HEXAGON_FACETS = [[np.cos(a), np.sin(a), 1]
                  for a in np.arange(6) * np.pi / 3]
SQUARE_FACETS = [[1, 0, 1], [-1, 0, 1], [0, 1, 1], [0, -1, 1]]


class LogEmbeddingTest(unittest.TestCase):
    def test_orthant(self):
        np.testing.assert_allclose([np.log(2), np.log(3)],
                                   log_embed(Orthant(2), [2, 3]))

    def test_distance(self):
        embedding = LogEmbedding(Orthant(3))
        self.assertAlmostEqual(np.log(2),
                               embedding.distance([2, 1, 1], [1, 1, 2]))

    def test_homogeneous(self):
        cone = PolyhedralCone(HEXAGON_FACETS)
        x = np.array([0.1, 0.2, 1.0])
        np.testing.assert_allclose(
            log_embed(cone, x) + np.log(3), log_embed(cone, 3 * x))

    def test_isometry(self):
        rng = np.random.default_rng(0)
        for cone in (Orthant(4), PolyhedralCone(HEXAGON_FACETS)):
            embedding = LogEmbedding(cone)
            first = cone.sample_interior(rng, 200)
            second = cone.sample_interior(rng, 200)
            for x, y in zip(first, second):
                self.assertLessEqual(
                    abs(embedding.distance(x, y)
                        - thompson_distance(cone, x, y)), 1e-10)

    def test_redundant_row_warns(self):
        facets = SQUARE_FACETS + [[0, 0, 1]]
        with self.assertLogs('conemetric.embeddings', level='WARNING') as cm:
            embedding = LogEmbedding(PolyhedralCone(facets))
        self.assertEqual([4], embedding.redundant_rows())
        self.assertIn('Facet row 5', cm.output[0])

    def test_errors(self):
        with self.assertRaisesRegex(InputError, 'not a polyhedral cone'):
            LogEmbedding(LorentzCone(3))
        with self.assertRaisesRegex(DomainError, 'not in the interior'):
            log_embed(Orthant(2), [1, 0])


class SimplicialIsometryTest(unittest.TestCase):
    def setUp(self):
        self.chart = simplicial_isometry([[1, 0], [1, 1]])

    def test_cone(self):
        cone = self.chart.cone()
        np.testing.assert_allclose([[1, -1], [0, 1]], cone.facets)
        self.assertAlmostEqual(0, cone.margin([1, 0]))
        self.assertAlmostEqual(0, cone.margin([1, 1]))

    def test_isometry_and_surjectivity(self):
        cone = self.chart.cone()
        rng = np.random.default_rng(1)
        for z1, z2 in zip(rng.normal(size=(50, 2)), rng.normal(size=(50, 2))):
            x = self.chart.inverse(z1)
            y = self.chart.inverse(z2)
            np.testing.assert_allclose(z1, self.chart.forward(x), atol=1e-12)
            self.assertAlmostEqual(np.max(np.abs(z1 - z2)),
                                   thompson_distance(cone, x, y), places=10)

    def test_identity_basis(self):
        chart = simplicial_isometry(np.eye(3))
        np.testing.assert_allclose(log_embed(Orthant(3), [1, 2, 3]),
                                   chart.forward([1, 2, 3]))

    def test_errors(self):
        with self.assertRaisesRegex(DomainError, 'singular'):
            simplicial_isometry([[1, 1], [2, 2]])
        with self.assertRaisesRegex(InputError, 'Need 2 basis vectors'):
            simplicial_isometry([[1, 0], [0, 1], [1, 1]])
        with self.assertRaisesRegex(DomainError, 'not in the interior'):
            self.chart.forward([0, 1])


class GromovProductTest(unittest.TestCase):
    def test_values(self):
        cone = Orthant(2)
        p = np.array([1.0, 1.0])
        x = np.array([2.0, 3.0])
        self.assertAlmostEqual(thompson_distance(cone, x, p),
                               gromov_product(cone, p, x, x, 2))
        self.assertEqual(0, gromov_product(cone, p, p, p, 2))
        self.assertAlmostEqual(0.5 * np.log(2),
                               gromov_product(cone, p, 2 * p, 4 * p, 2))

    def test_eta(self):
        # All three distances are log 2.
        cone = Orthant(2)
        p = np.ones(2)
        x = np.array([2.0, 1.0])
        y = np.array([1.0, 2.0])
        self.assertAlmostEqual(0.5 * np.log(2),
                               gromov_product(cone, p, x, y, 1))
        self.assertAlmostEqual(0, gromov_product(cone, p, x, y, 2))

    def test_bad_eta(self):
        with self.assertRaisesRegex(DomainError, 'eta'):
            gromov_product(Orthant(2), [1, 1], [1, 2], [2, 1], 0)

    def test_series(self):
        # x_k = (1, 2 s) and y_k = (s, 1 + s) with s = e^-k: all three
        # distances are k.
        first, second = boundary_sequences(Orthant(2), [1, 2],
                                           [[1, 0], [0, 1]], 3)
        series = GromovSeries(first, second, 1)
        self.assertEqual([1, 2, 3], [k for k, _ in series.rows()])
        np.testing.assert_allclose([0.5, 1, 1.5], series.values, atol=1e-9)
        self.assertAlmostEqual(1.5, series.tail_max(2), delta=1e-9)
        self.assertTrue(series.bounded(1.5 + 1e-6, tail_start=2))
        self.assertFalse(series.bounded(1.4, tail_start=1))
        self.assertAlmostEqual(0, GromovSeries(first, second, 2).tail_max(1),
                               delta=1e-9)
        with self.assertRaisesRegex(InputError, 'no terms'):
            series.tail_max(4)

    def test_series_matches_products(self):
        cone = LorentzCone(3)
        p = np.array([1.0, 0.2, -0.1])
        series = gromov_series(cone, p, [[1, 0.6, 0.8], [2, -2, 0]], 8, 1.5)
        for k, value in series.rows():
            x = series.first[k - 1]
            y = series.second[k - 1]
            self.assertAlmostEqual(gromov_product(cone, p, x, y, 1.5), value,
                                   delta=1e-8)

    def test_series_errors(self):
        cone = LorentzCone(3)
        first, second = boundary_sequences(cone, [1, 0, 0],
                                           [[1, 1, 0], [1, -1, 0]], 3)
        other, = boundary_sequences(cone, [1, 0, 0], [[1, 0, 1]], 3)
        with self.assertRaisesRegex(DomainError, 'eta'):
            GromovSeries(first, second, -1)
        with self.assertRaisesRegex(InputError, 'different'):
            GromovSeries(first, other, 2)


class BoundarySequencesTest(unittest.TestCase):
    def test_distances(self):
        cone = LorentzCone(3)
        p = np.array([1.0, 0, 0])
        sequences = boundary_sequences(cone, p, [[1, 1, 0], [2, 0, -2]], 10)
        self.assertEqual(2, len(sequences))
        for sequence in sequences:
            self.assertEqual(10, len(sequence))
            for k, point in enumerate(sequence, 1):
                self.assertAlmostEqual(k, thompson_distance(cone, point, p),
                                       delta=1e-9)

    def test_points(self):
        cone = LorentzCone(3)
        p = np.array([1.0, 0, 0])
        sequence, = boundary_sequences(cone, p, [[2, 0, -2]], 4)
        s = sequence.weights[2]
        np.testing.assert_allclose(s * p + (1 - s) * np.array([1, 0, -1]),
                                   sequence[2])
        np.testing.assert_allclose(np.exp(-np.arange(1, 5)), sequence.weights,
                                   rtol=1e-9)

    def test_distances_up_to_30(self):
        rng = np.random.default_rng(0)
        cases = [
            (LorentzCone(3), [1.0, 0, 0], [[1, 1, 0], [1, -1, 0]]),
            (LorentzCone(4), [2.0, 0.5, 0, 0.3], [[1, 0, 0.6, 0.8],
                                                  [1, 0, -1, 0]]),
            (PSDCone(2), np.eye(2), [[[1, 0], [0, 0]],
                                     [[0.5, 0.5], [0.5, 0.5]]]),
            (PSDCone(3), np.eye(3) + 0.1 * np.ones((3, 3)),
             [np.diag([1, 2, 0]), np.outer([1, -1, 1], [1, -1, 1])]),
            (Orthant(3), rng.uniform(0.5, 2, 3), [[1, 0, 0], [0, 1, 2]]),
            (PolyhedralCone(HEXAGON_FACETS), [0.1, -0.2, 1], [[1, 0, 1],
                                                              [-1, 0, 1]]),
        ]
        for cone, p, directions in cases:
            sequences = boundary_sequences(cone, p, directions, 30)
            for sequence in sequences:
                np.testing.assert_allclose(np.arange(1, 31),
                                           sequence.distances(), atol=1e-9)

    def test_lorentz_example(self):
        cone = LorentzCone(3)
        p = np.array([1.0, 0, 0])
        series = gromov_series(cone, p, [[1, 1, 0], [1, -1, 0]], 30)
        k = np.arange(1, 31)
        np.testing.assert_allclose(k - np.log(2 * np.exp(k) - 1),
                                   [v for _, v in series.rows()], atol=1e-9)
        self.assertAlmostEqual(-np.log(2), series.values[-1], delta=1e-9)

    def test_lorentz_products_bounded(self):
        cone = LorentzCone(3)
        p = np.array([1.0, 0, 0])
        directions = [np.array(w) for w in ([1, 1, 0], [1, -1, 0],
                                            [1, 0, 1])]
        sequences = boundary_sequences(cone, p, directions, 30)
        for i in range(3):
            for j in range(i + 1, 3):
                middle = (directions[i] + directions[j]) / 2
                series = GromovSeries(sequences[i], sequences[j], 2)
                self.assertTrue(series.bounded(
                    thompson_distance(cone, middle, p) + 0.5))

    def test_orthant_extreme_rays(self):
        series = gromov_series(Orthant(2), np.ones(2), [[1, 0], [0, 3]], 12)
        self.assertTrue(series.bounded(0.5))
        self.assertAlmostEqual(0, series.tail_max(), places=6)

    def test_errors(self):
        cone = LorentzCone(3)
        p = [1, 0, 0]
        with self.assertRaisesRegex(DomainError, 'not on the boundary'):
            boundary_sequences(cone, p, [[2, 1, 0]], 3)
        with self.assertRaisesRegex(DomainError, 'Chord'):
            boundary_sequences(Orthant(3), [1, 1, 1],
                               [[1, 0, 0], [1, 1, 0]], 3)
        with self.assertRaisesRegex(InputError, 'exactly two'):
            gromov_series(cone, p, [[1, 1, 0]], 3)
        with self.assertRaisesRegex(InputError, 'k_max'):
            boundary_sequences(cone, p, [[1, 1, 0]], 0)


class ParallelGapTest(unittest.TestCase):
    def test_square_cone(self):
        cone = PolyhedralCone(SQUARE_FACETS)
        u = [-1, 0, 1]
        v1 = [1, 1, 1]
        v2 = [1, -1, 1]
        self.assertAlmostEqual(np.log(3), parallel_gap(cone, u, v1, v2, 0))
        for t in np.linspace(0, 10, 11):
            gap = parallel_gap(cone, u, v1, v2, t)
            self.assertAlmostEqual(np.log(1 + 2 * np.exp(-2 * t)), gap)
            self.assertLessEqual(gap, np.log(3) + 1e-12)
        self.assertGreater(parallel_gap(cone, u, v1, v2, -10), 5)


if __name__ == '__main__':
    unittest.main()
