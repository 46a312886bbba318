""" Exact SHAP attributions of tree ensembles under the tree path dependent (cover weighted) expectation

`shap_matrix` runs the polynomial time TreeSHAP recursion once per tree for a whole batch of rows: the zero
fractions of a decision path depend only on the covers, so only the one fractions and permutation weights carry
a per-row dimension. `brute_shapley` enumerates every coalition and is kept as a reference oracle.
"""

import dataclasses
import itertools
import math
from typing import Dict, List, Optional, Sequence

import numpy as np

from .gbt import TreeEnsemble, TreeNode
from .. import exceptions

import logging
log = logging.getLogger(__name__)

BRUTE_FORCE_LIMIT = 12

@dataclasses.dataclass(frozen=True)
class ShapVector:
    """ Per-feature attributions phi with the expected model output they are measured from

    Local accuracy: base_value + sum(phi) equals the model prediction for the explained row.
    """
    phi: np.ndarray
    base_value: float

    def __post_init__(self):
        phi = np.array(self.phi, dtype=np.float64)
        phi.setflags(write=False)
        object.__setattr__(self, "phi", phi)

    def __len__(self) -> int:
        return len(self.phi)

    @property
    def prediction(self) -> float:
        return float(self.base_value + self.phi.sum())

    def to_dict(self, feature_names: Optional[Sequence[str]] = None) -> Dict[str, object]:
        document = {"base_value": self.base_value, "phi": self.phi.tolist()}
        if feature_names is not None:
            document["features"] = list(feature_names)
        return document

class _Path:
    """ The unique features of a decision path with their zero fractions, per row one fractions and permutation
    weights """

    def __init__(self, features: List[int], zeros: List[float], ones: List[np.ndarray], weights: List[np.ndarray]):
        self.features = features
        self.zeros = zeros
        self.ones = ones
        self.weights = weights

    @classmethod
    def empty(cls) -> "_Path":
        return cls([], [], [], [])

    def copy(self) -> "_Path":
        return _Path(list(self.features), list(self.zeros), list(self.ones), [weight.copy() for weight in self.weights])

    @property
    def depth(self) -> int:
        """ The index of the deepest element """
        return len(self.features) - 1

    def extend(self, zero: float, one: np.ndarray, feature: int):
        depth = len(self.features)
        self.features.append(feature)
        self.zeros.append(zero)
        self.ones.append(one)
        self.weights.append(np.ones_like(one) if depth == 0 else np.zeros_like(one))

        for i in range(depth - 1, -1, -1):
            self.weights[i + 1] = self.weights[i + 1] + one * self.weights[i] * (i + 1) / (depth + 1)
            self.weights[i] = zero * self.weights[i] * (depth - i) / (depth + 1)

    def _unwound(self, index: int):
        """ Yield, from the deepest weight up, the weights the path would hold with element `index` removed """
        depth = self.depth
        one = self.ones[index]
        zero = self.zeros[index]
        hot = one != 0
        safeOne = np.where(hot, one, 1.0)
        nextPortion = self.weights[depth]

        for i in range(depth - 1, -1, -1):
            hotWeight = nextPortion * (depth + 1) / ((i + 1) * safeOne)
            coldWeight = self.weights[i] * (depth + 1) / (zero * (depth - i))
            weight = np.where(hot, hotWeight, coldWeight)
            nextPortion = np.where(hot, self.weights[i] - weight * zero * (depth - i) / (depth + 1), nextPortion)
            yield i, weight

    def unwind(self, index: int):
        """ Remove element `index` from the path """
        for i, weight in list(self._unwound(index)):
            self.weights[i] = weight
        self.weights.pop()
        del self.features[index]
        del self.zeros[index]
        del self.ones[index]

    def unwound_sum(self, index: int) -> np.ndarray:
        """ The total permutation weight with element `index` removed """
        total = np.zeros_like(self.ones[index])
        for _, weight in self._unwound(index):
            total = total + weight
        return total

def _check_covers(tree: TreeNode):
    for node in tree.nodes():
        if node.cover is None or not node.cover > 0:
            raise exceptions.MissingCover(f"Tree node {node} does not carry a positive training cover")

def _recurse(node: TreeNode, X: np.ndarray, phi: np.ndarray, parent: _Path, zero: float, one: np.ndarray, feature: int):
    path = parent.copy()
    path.extend(zero, one, feature)

    if node.is_leaf:
        for index in range(1, path.depth + 1):
            weight = path.unwound_sum(index)
            phi[:, path.features[index]] += weight * (path.ones[index] - path.zeros[index]) * node.value
        return

    incomingZero, incomingOne = 1.0, np.ones(len(X))
    if node.feature in path.features[1:]:
        index = path.features.index(node.feature, 1)
        incomingZero, incomingOne = path.zeros[index], path.ones[index]
        path.unwind(index)

    goLeft = X[:, node.feature] < node.threshold
    for child, follows in ((node.left, goLeft), (node.right, ~goLeft)):
        _recurse(
            child, X, phi, path,
            child.cover / node.cover * incomingZero,
            incomingOne * follows,
            node.feature,
        )

def _tree_shap(tree: TreeNode, X: np.ndarray) -> np.ndarray:
    phi = np.zeros(X.shape)
    if not tree.is_leaf:
        _recurse(tree, X, phi, _Path.empty(), 1.0, np.ones(len(X)), -1)
    return phi

def _validate(model: TreeEnsemble, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.shape[1] != model.d:
        raise exceptions.DimensionMismatch(f"Expected feature vectors of length {model.d} - got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise exceptions.NonFiniteFeature("Feature vectors must be finite")
    for tree in model.trees:
        _check_covers(tree)
    return X

def shap_values(model: TreeEnsemble, X: np.ndarray) -> np.ndarray:
    """ The (n, d) attribution matrix for the rows of X, summed over the trees and scaled by the learning rate """
    X = _validate(model, X)
    phi = np.zeros(X.shape)
    for tree in model.trees:
        phi += _tree_shap(tree, X)
    return model.learning_rate * phi

def tree_shap(model: TreeEnsemble, x: Sequence[float]) -> ShapVector:
    """ Exact SHAP values of one feature vector

    Args:
        model: The ensemble - every node must carry its training cover
        x: The feature vector to explain

    Returns:
        ShapVector: phi per feature and base_value, the ensemble expectation with no feature fixed

    Raises:
        MissingCover: A node has no positive cover
        DimensionMismatch: x does not have one value per feature
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise exceptions.DimensionMismatch(f"Expected a single feature vector - got shape {x.shape}")
    return ShapVector(shap_values(model, x)[0], model.expected_value())

def shap_matrix(model: TreeEnsemble, X) -> List[ShapVector]:
    """ tree_shap of every row of X (a FeatureMatrix or an (n, d) array) preserving row order """
    rows = X.rows if hasattr(X, "rows") else np.asarray(X, dtype=np.float64)
    if len(rows) == 0:
        return []
    base = model.expected_value()
    return [ShapVector(phi, base) for phi in shap_values(model, rows)]

def _conditional_expectation(node: TreeNode, x: np.ndarray, fixed: frozenset) -> float:
    if node.is_leaf:
        return node.value
    if node.feature in fixed:
        child = node.left if x[node.feature] < node.threshold else node.right
        return _conditional_expectation(child, x, fixed)
    return (
        node.left.cover * _conditional_expectation(node.left, x, fixed)
        + node.right.cover * _conditional_expectation(node.right, x, fixed)
    ) / node.cover

def brute_shapley(model: TreeEnsemble, x: Sequence[float]) -> ShapVector:
    """ Shapley values by exhaustive coalition enumeration

    v(S) fixes the features in S to x and averages the remaining branches by their cover ratios, the same
    conditional expectation TreeSHAP computes. Exponential in d - a reference for testing.

    Raises:
        TooManyFeatures: More than twelve features
    """
    x = _validate(model, x)[0]
    d = model.d
    if d > BRUTE_FORCE_LIMIT:
        raise exceptions.TooManyFeatures(f"Exhaustive Shapley enumeration supports at most {BRUTE_FORCE_LIMIT} features - got {d}")

    def value(coalition: frozenset) -> float:
        return model.base_score + model.learning_rate * sum(
            _conditional_expectation(tree, x, coalition) for tree in model.trees
        )

    values = {}
    for size in range(d + 1):
        for coalition in itertools.combinations(range(d), size):
            values[frozenset(coalition)] = value(frozenset(coalition))

    phi = np.zeros(d)
    for feature in range(d):
        others = [other for other in range(d) if other != feature]
        for size in range(d):
            weight = math.factorial(size) * math.factorial(d - size - 1) / math.factorial(d)
            for coalition in itertools.combinations(others, size):
                coalition = frozenset(coalition)
                phi[feature] += weight * (values[coalition | {feature}] - values[coalition])

    return ShapVector(phi, values[frozenset()])

def check_local_accuracy(shap: ShapVector, prediction: float, tolerance: float = 1e-6):
    """ Assert base_value + sum(phi) reproduces the prediction to a relative tolerance

    Raises:
        LocalAccuracyViolation: The attributions do not add up
    """
    error = abs(shap.prediction - prediction)
    if error > tolerance * max(1.0, abs(prediction)):
        raise exceptions.LocalAccuracyViolation(
            f"base {shap.base_value} + sum(phi) = {shap.prediction} does not reproduce the prediction {prediction}"
        )
