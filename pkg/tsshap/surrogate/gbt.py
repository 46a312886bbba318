""" Gradient boosted regression trees with squared error loss and exact greedy splits """

import dataclasses
import json
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..callbacks import AbstractCallback, DefaultCallback
from ..types import StrOrPathLike
from .. import exceptions

import logging
log = logging.getLogger(__name__)

@dataclasses.dataclass(frozen=True)
class GbtParams:
    """ Boosting hyperparameters

    Args:
        n_trees: The number of boosting rounds
        max_depth: The maximum depth of every tree
        min_samples_leaf: The minimum number of training rows in a leaf
        learning_rate: The shrinkage applied to every tree within (0, 1]
        subsample_fraction: The fraction of rows (drawn without replacement) each tree is grown on
        seed: Seed of the row subsampling
    """
    n_trees: int = 200
    max_depth: int = 4
    min_samples_leaf: int = 3
    learning_rate: float = 0.1
    subsample_fraction: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError(f"n_trees must be at least 1 - got {self.n_trees}")
        if self.max_depth < 1:
            raise ValueError(f"max_depth must be at least 1 - got {self.max_depth}")
        if self.min_samples_leaf < 1:
            raise ValueError(f"min_samples_leaf must be at least 1 - got {self.min_samples_leaf}")
        if not 0 < self.learning_rate <= 1:
            raise ValueError(f"learning_rate must be within (0, 1] - got {self.learning_rate}")
        if not 0 < self.subsample_fraction <= 1:
            raise ValueError(f"subsample_fraction must be within (0, 1] - got {self.subsample_fraction}")

    @classmethod
    def from_dict(cls, params: Mapping[str, Any]) -> "GbtParams":
        return cls(**dict(params))

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)

@dataclasses.dataclass(frozen=True)
class TreeNode:
    """ A regression tree node - internal nodes route `x[feature] < threshold` to the left child

    Args:
        cover: The number of training rows that reached the node
        value: The leaf prediction (the mean residual of the rows at the node)
        feature: Split feature index (internal nodes only)
        threshold: Split threshold (internal nodes only)
        left: Child for `x[feature] < threshold`
        right: Child for `x[feature] >= threshold`
    """
    cover: float
    value: float = 0.0
    feature: Optional[int] = None
    threshold: Optional[float] = None
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None

    def __post_init__(self):
        if (self.left is None) != (self.right is None):
            raise ValueError("Internal nodes require both children")
        if not self.is_leaf:
            if self.feature is None or self.threshold is None or not np.isfinite(self.threshold):
                raise ValueError("Internal nodes require a feature and a finite threshold")

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    @property
    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth, self.right.depth)

    def nodes(self):
        """ Iterate over every node of the subtree (pre-order) """
        yield self
        if not self.is_leaf:
            yield from self.left.nodes()
            yield from self.right.nodes()

    def features(self) -> set:
        """ The feature indices split on within the subtree """
        return {node.feature for node in self.nodes() if not node.is_leaf}

    def expectation(self) -> float:
        """ The cover weighted mean of the subtree's leaf values """
        if self.is_leaf:
            return self.value
        return (
            self.left.cover * self.left.expectation() + self.right.cover * self.right.expectation()
        ) / (self.left.cover + self.right.cover)

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        """ Route every row of X to a leaf and return the leaf values """
        if self.is_leaf:
            return np.full(len(X), self.value)
        goLeft = X[:, self.feature] < self.threshold
        output = np.empty(len(X))
        output[goLeft] = self.left.evaluate(X[goLeft])
        output[~goLeft] = self.right.evaluate(X[~goLeft])
        return output

    def to_dict(self) -> Dict[str, Any]:
        if self.is_leaf:
            return {"value": self.value, "cover": self.cover}
        return {
            "feature": self.feature,
            "threshold": self.threshold,
            "cover": self.cover,
            "value": self.value,
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    @classmethod
    def from_dict(cls, node: Mapping[str, Any]) -> "TreeNode":
        if "left" not in node:
            return cls(cover=node.get("cover"), value=float(node["value"]))
        return cls(
            cover=node.get("cover"),
            value=float(node.get("value", 0.0)),
            feature=int(node["feature"]),
            threshold=float(node["threshold"]),
            left=cls.from_dict(node["left"]),
            right=cls.from_dict(node["right"]),
        )

@dataclasses.dataclass(frozen=True, eq=False)
class TreeEnsemble:
    """ A fitted boosted ensemble - prediction(x) = base_score + learning_rate * sum of the routed leaf values

    Args:
        trees: The tree roots in boosting order
        learning_rate: The shrinkage the trees were fit with
        base_score: The initial prediction (the training target mean)
        feature_names: The feature registry shared with the training feature matrix
    """
    trees: Tuple[TreeNode, ...]
    learning_rate: float
    base_score: float
    feature_names: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "trees", tuple(self.trees))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    def __repr__(self) -> str:
        return f"<tsshap.TreeEnsemble: {len(self.trees)} trees over {self.d} features base({self.base_score})>"

    @property
    def d(self) -> int:
        return len(self.feature_names)

    def _validate(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.d:
            raise exceptions.DimensionMismatch(f"Expected feature vectors of length {self.d} - got shape {X.shape}")
        if not np.all(np.isfinite(X)):
            raise exceptions.NonFiniteFeature("Feature vectors must be finite")
        return X

    def predict(self, x: Sequence[float]) -> float:
        """ The ensemble prediction for a single feature vector

        Raises:
            DimensionMismatch: x does not have one value per feature
            NonFiniteFeature: x contains NaN or infinite values
        """
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 1:
            raise exceptions.DimensionMismatch(f"Expected a single feature vector - got shape {x.shape}")
        return float(self.predict_matrix(x.reshape(1, -1))[0])

    def predict_matrix(self, X: np.ndarray) -> np.ndarray:
        """ The ensemble predictions for every row of X """
        X = self._validate(X)
        output = np.full(len(X), self.base_score)
        for tree in self.trees:
            output += self.learning_rate * tree.evaluate(X)
        return output

    def expected_value(self) -> float:
        """ The prediction with no feature fixed - base_score plus every tree's cover weighted leaf mean """
        return self.base_score + self.learning_rate * sum(tree.expectation() for tree in self.trees)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "base_score": self.base_score,
            "learning_rate": self.learning_rate,
            "feature_names": list(self.feature_names),
            "trees": [tree.to_dict() for tree in self.trees],
        }

    @classmethod
    def from_dict(cls, document: Mapping[str, Any]) -> "TreeEnsemble":
        return cls(
            trees=[TreeNode.from_dict(tree) for tree in document["trees"]],
            learning_rate=float(document["learning_rate"]),
            base_score=float(document["base_score"]),
            feature_names=document["feature_names"],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, document: str) -> "TreeEnsemble":
        return cls.from_dict(json.loads(document))

    def save(self, path: StrOrPathLike):
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(self.to_json())

    @classmethod
    def load(cls, path: StrOrPathLike) -> "TreeEnsemble":
        with open(path, "r", encoding="utf-8") as handle:
            return cls.from_json(handle.read())

class _TreeGrower:
    """ Exact greedy growth of a single squared error regression tree """

    def __init__(self, max_depth: int, min_samples_leaf: int):
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf

    def best_split(self, X: np.ndarray, residual: np.ndarray) -> Optional[Tuple[int, float]]:
        """ The (feature, threshold) maximising the variance reduction of the residuals

        Candidate thresholds are midpoints between consecutive distinct sorted values that leave at least
        `min_samples_leaf` rows on either side. Ties go to the lowest feature index then the lowest threshold.
        """
        n = len(residual)
        leaf = self.min_samples_leaf
        total = residual.sum()
        parentScore = total ** 2 / n
        tolerance = 1e-12 * max(1.0, float(np.dot(residual, residual)))

        sizes = np.arange(leaf, n - leaf + 1)
        best: Optional[Tuple[int, float]] = None
        bestGain = 0.0

        for feature in range(X.shape[1]):
            order = np.argsort(X[:, feature], kind="stable")
            values = X[order, feature]
            cumulative = np.cumsum(residual[order])

            # Left partition holds the first `size` sorted rows
            valid = values[sizes - 1] < values[sizes]
            if not valid.any():
                continue
            candidates = sizes[valid]
            leftSum = cumulative[candidates - 1]
            gain = leftSum ** 2 / candidates + (total - leftSum) ** 2 / (n - candidates) - parentScore

            top = gain.max()
            if top <= (bestGain + tolerance if best is not None else tolerance):
                continue

            size = candidates[np.flatnonzero(gain >= top - tolerance)[0]]
            lower, upper = values[size - 1], values[size]
            threshold = (lower + upper) / 2
            if not lower < threshold <= upper:
                threshold = upper

            best, bestGain = (feature, float(threshold)), top

        return best

    def grow(self, X: np.ndarray, residual: np.ndarray, depth: int = 0) -> TreeNode:
        n = len(residual)
        value = float(residual.mean())

        if depth >= self.max_depth or n < 2 * self.min_samples_leaf:
            return TreeNode(cover=float(n), value=value)

        split = self.best_split(X, residual)
        if split is None:
            return TreeNode(cover=float(n), value=value)

        feature, threshold = split
        goLeft = X[:, feature] < threshold
        return TreeNode(
            cover=float(n),
            value=value,
            feature=feature,
            threshold=threshold,
            left=self.grow(X[goLeft], residual[goLeft], depth + 1),
            right=self.grow(X[~goLeft], residual[~goLeft], depth + 1),
        )

def gbt_fit(
    X: Union[np.ndarray, "FeatureMatrix"],
    y: Sequence[float],
    params: Optional[GbtParams] = None,
    feature_names: Optional[Sequence[str]] = None,
    callback: AbstractCallback = DefaultCallback(),
    ) -> TreeEnsemble:
    """ Fit a boosted ensemble of regression trees with squared error loss

    Round j fits a tree to the residuals y - prediction_{j-1}(X) and adds it with the learning rate shrinkage.

    Args:
        X: The training feature rows - a FeatureMatrix or an (n, d) array
        y: The n training targets
        params: The boosting hyperparameters
        feature_names: Names of the d features - taken from X when it is a FeatureMatrix
        callback: Progress callback notified per boosting round

    Returns:
        TreeEnsemble: The fitted ensemble. A constant target yields an ensemble of zero trees predicting it

    Raises:
        EmptyTraining: Fewer than two rows
        DimensionMismatch: The row and target counts differ
        NonFiniteFeature: The rows or targets contain non finite values
    """
    params = params or GbtParams()

    if hasattr(X, "rows") and hasattr(X, "names"):
        feature_names = X.names if feature_names is None else feature_names
        X = X.rows

    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or len(X) < 2:
        raise exceptions.EmptyTraining(f"Boosting requires at least two training rows - got shape {X.shape}")
    if len(y) != len(X):
        raise exceptions.DimensionMismatch(f"{len(X)} training rows were given for {len(y)} targets")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise exceptions.NonFiniteFeature("Training rows and targets must be finite")

    if feature_names is None:
        feature_names = [f"f{index}" for index in range(X.shape[1])]
    if len(feature_names) != X.shape[1]:
        raise exceptions.DimensionMismatch(f"{len(feature_names)} names were given for {X.shape[1]} features")

    baseScore = float(y.mean())
    if np.all(y == y[0]):
        log.debug("Constant training target %s - returning an ensemble without trees", y[0])
        return TreeEnsemble(trees=(), learning_rate=params.learning_rate, base_score=float(y[0]), feature_names=feature_names)

    grower = _TreeGrower(params.max_depth, params.min_samples_leaf)
    rng = np.random.default_rng(params.seed)
    sampleSize = max(2, int(round(params.subsample_fraction * len(y))))

    prediction = np.full(len(y), baseScore)
    trees: List[TreeNode] = []

    callback.boosting(params.n_trees)
    for _ in range(params.n_trees):
        residual = y - prediction
        if params.subsample_fraction < 1:
            rows = np.sort(rng.choice(len(y), size=sampleSize, replace=False))
            tree = grower.grow(X[rows], residual[rows])
        else:
            tree = grower.grow(X, residual)

        trees.append(tree)
        prediction = prediction + params.learning_rate * tree.evaluate(X)
        callback.boosted(1)

    log.debug(
        "Boosted %s trees on %s rows - training mse %s",
        len(trees), len(y), float(np.mean((y - prediction) ** 2))
    )
    return TreeEnsemble(trees=trees, learning_rate=params.learning_rate, base_score=baseScore, feature_names=feature_names)

def gbt_predict(model: TreeEnsemble, x: Sequence[float]) -> float:
    """ base_score + learning_rate * sum of the routed leaf values

    Raises:
        DimensionMismatch: x does not have one value per feature
        NonFiniteFeature: x contains NaN or infinite values
    """
    return model.predict(x)
