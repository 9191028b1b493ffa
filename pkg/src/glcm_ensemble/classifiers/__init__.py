"""The five base classifiers plus the ``fit_*`` shorthands."""

from .base import UNKNOWN, Classifier, Prediction, Standardizer, apply_threshold
from .forest import RandomForest
from .knn import KNearestNeighbors
from .naive_bayes import GaussianNaiveBayes
from .svm import LinearSVM
from .tree import DecisionTree, TreeArrays, build_tree

ALGORITHMS = {
    "rf": RandomForest,
    "svm": LinearSVM,
    "knn": KNearestNeighbors,
    "nb": GaussianNaiveBayes,
    "dt": DecisionTree,
}


def make_classifier(algorithm: str, **params) -> Classifier:
    try:
        cls = ALGORITHMS[algorithm]
    except KeyError:
        raise ValueError(f"unknown classifier {algorithm!r}") from None
    return cls(**params)


def fit_knn(X, y, k=5, tau=0.0, n_classes=None, schema_id=""):
    return KNearestNeighbors(k, tau).fit(X, y, n_classes, schema_id)


def fit_nb(X, y, tau=0.0, n_classes=None, schema_id=""):
    return GaussianNaiveBayes(tau).fit(X, y, n_classes, schema_id)


def fit_tree(X, y, max_depth=12, min_leaf=2, tau=0.0, n_classes=None, schema_id=""):
    return DecisionTree(max_depth, min_leaf, tau).fit(X, y, n_classes, schema_id)


def fit_rf(X, y, n_trees=100, seed=0, n_classes=None, schema_id="", **params):
    return RandomForest(n_trees=n_trees, seed=seed, **params).fit(X, y, n_classes, schema_id)


def fit_svm(X, y, epochs=200, lam=1e-3, seed=0, tau=0.0, n_classes=None, schema_id=""):
    return LinearSVM(epochs, lam, seed, tau).fit(X, y, n_classes, schema_id)


__all__ = [
    "ALGORITHMS",
    "UNKNOWN",
    "Classifier",
    "DecisionTree",
    "GaussianNaiveBayes",
    "KNearestNeighbors",
    "LinearSVM",
    "Prediction",
    "RandomForest",
    "Standardizer",
    "TreeArrays",
    "apply_threshold",
    "build_tree",
    "fit_knn",
    "fit_nb",
    "fit_rf",
    "fit_svm",
    "fit_tree",
    "make_classifier",
]
