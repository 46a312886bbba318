import unittest

import itertools

import numpy as np

import tsshap
from tsshap import exceptions
from tsshap.surrogate import TreeNode, shap_matrix, shap_values, check_local_accuracy

def stump() -> tsshap.TreeEnsemble:
    tree = TreeNode(cover=2, feature=0, threshold=0.5, left=TreeNode(cover=1, value=0.0), right=TreeNode(cover=1, value=1.0))
    return tsshap.TreeEnsemble([tree], 1.0, 0.0, ['a'])

def two_feature_tree() -> tsshap.TreeEnsemble:
    tree = TreeNode(
        cover=4, feature=0, threshold=0.5,
        left=TreeNode(cover=2, value=0.0),
        right=TreeNode(
            cover=2, feature=1, threshold=0.5,
            left=TreeNode(cover=1, value=10.0),
            right=TreeNode(cover=1, value=20.0),
        ),
    )
    return tsshap.TreeEnsemble([tree], 1.0, 0.0, ['a', 'b'])

def random_tree(rng: np.random.Generator, d: int, depth: int, cover: int) -> TreeNode:
    if depth == 0 or cover < 2 or rng.random() < 0.2:
        return TreeNode(cover=float(cover), value=float(rng.normal(0, 5)))

    leftCover = int(rng.integers(1, cover))
    return TreeNode(
        cover=float(cover),
        feature=int(rng.integers(0, d)),
        threshold=float(rng.normal()),
        left=random_tree(rng, d, depth - 1, leftCover),
        right=random_tree(rng, d, depth - 1, cover - leftCover),
    )

def random_ensemble(rng: np.random.Generator) -> tsshap.TreeEnsemble:
    d = int(rng.integers(1, 9))
    trees = [random_tree(rng, d, int(rng.integers(1, 4)), int(rng.integers(2, 200))) for _ in range(int(rng.integers(1, 6)))]
    return tsshap.TreeEnsemble(trees, float(rng.uniform(0.05, 1.0)), float(rng.normal()), [f"f{i}" for i in range(d)])

class Test_TreeShap(unittest.TestCase):

    def test_stump(self):

        shap = tsshap.tree_shap(stump(), [1.0])

        self.assertEqual(shap.base_value, 0.5)
        np.testing.assert_allclose(shap.phi, [0.5])
        self.assertAlmostEqual(shap.prediction, 1.0)

    def test_two_features(self):

        model = two_feature_tree()
        shap = tsshap.tree_shap(model, [1.0, 1.0])

        self.assertEqual(shap.base_value, 7.5)
        np.testing.assert_allclose(shap.phi, [8.75, 3.75])
        self.assertAlmostEqual(shap.prediction, model.predict([1.0, 1.0]))

    def test_unused_feature_has_no_attribution(self):

        model = tsshap.TreeEnsemble(stump().trees, 1.0, 0.0, ['a', 'b'])
        shap = tsshap.tree_shap(model, [1.0, 7.0])

        np.testing.assert_allclose(shap.phi, [0.5, 0.0])

    def test_symmetric_features(self):

        X = np.array(list(itertools.product([0.0, 1.0], repeat=2)))
        model = tsshap.gbt_fit(X, X.sum(axis=1), tsshap.GbtParams(n_trees=1, max_depth=2, min_samples_leaf=1, learning_rate=1.0))

        shap = tsshap.tree_shap(model, [1.0, 1.0])

        np.testing.assert_allclose(shap.phi, [0.5, 0.5])
        self.assertAlmostEqual(shap.prediction, 2.0)

    def test_no_trees(self):

        model = tsshap.TreeEnsemble((), 0.1, 3.0, ['a', 'b'])
        shap = tsshap.tree_shap(model, [1.0, 2.0])

        self.assertEqual(shap.base_value, 3.0)
        np.testing.assert_array_equal(shap.phi, [0.0, 0.0])

    def test_matches_exhaustive_enumeration(self):

        rng = np.random.default_rng(0)
        for trial in range(500):
            model = random_ensemble(rng)
            X = rng.normal(size=(5, model.d))

            for shap, x in zip(shap_matrix(model, X), X):
                expected = tsshap.brute_shapley(model, x)

                np.testing.assert_allclose(shap.phi, expected.phi, atol=1e-9, err_msg=f"trial {trial}")
                self.assertAlmostEqual(shap.base_value, expected.base_value, places=9)
                check_local_accuracy(shap, model.predict(x), tolerance=1e-9)

    def test_fitted_model_local_accuracy(self):

        rng = np.random.default_rng(4)
        X = rng.normal(size=(120, 4))
        y = X[:, 0] * X[:, 1] + np.abs(X[:, 2]) + rng.normal(0, 0.1, 120)
        model = tsshap.gbt_fit(X, y, tsshap.GbtParams(n_trees=30, max_depth=4, min_samples_leaf=3))

        phi = shap_values(model, X)
        np.testing.assert_allclose(model.expected_value() + phi.sum(axis=1), model.predict_matrix(X), atol=1e-8)

    def test_additive_over_trees(self):

        rng = np.random.default_rng(8)
        for _ in range(50):
            model = random_ensemble(rng)
            X = rng.normal(size=(4, model.d))

            perTree = [
                shap_values(tsshap.TreeEnsemble([tree], model.learning_rate, 0.0, model.feature_names), X)
                for tree in model.trees
            ]

            np.testing.assert_allclose(shap_values(model, X), np.sum(perTree, axis=0), atol=1e-9)

    def test_shap_matrix_of_feature_matrix(self):

        matrix = tsshap.FeatureMatrix(['a'], [[0.0], [1.0]], [3, 4])

        shaps = shap_matrix(stump(), matrix)

        self.assertEqual([shap.phi.tolist() for shap in shaps], [[-0.5], [0.5]])
        self.assertEqual(shap_matrix(stump(), np.empty((0, 1))), [])

    def test_missing_cover(self):

        tree = TreeNode(cover=None, feature=0, threshold=0.5, left=TreeNode(cover=1, value=0.0), right=TreeNode(cover=1, value=1.0))
        model = tsshap.TreeEnsemble([tree], 1.0, 0.0, ['a'])

        with self.assertRaises(exceptions.MissingCover):
            tsshap.tree_shap(model, [1.0])

    def test_dimension_mismatch(self):

        with self.assertRaises(exceptions.DimensionMismatch):
            tsshap.tree_shap(stump(), [1.0, 2.0])

        with self.assertRaises(exceptions.DimensionMismatch):
            tsshap.tree_shap(stump(), [[1.0]])

class Test_BruteShapley(unittest.TestCase):

    def test_two_features(self):

        shap = tsshap.brute_shapley(two_feature_tree(), [1.0, 1.0])

        np.testing.assert_allclose(shap.phi, [8.75, 3.75])
        self.assertEqual(shap.base_value, 7.5)

    def test_too_many_features(self):

        model = tsshap.TreeEnsemble((), 1.0, 0.0, [f"f{i}" for i in range(13)])

        with self.assertRaises(exceptions.TooManyFeatures):
            tsshap.brute_shapley(model, np.zeros(13))

class Test_LocalAccuracy(unittest.TestCase):

    def test_violation(self):

        shap = tsshap.ShapVector([1.0, 2.0], 3.0)

        check_local_accuracy(shap, 6.0)
        with self.assertRaises(exceptions.LocalAccuracyViolation):
            check_local_accuracy(shap, 7.0)
