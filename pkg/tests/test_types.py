import numpy as np
import pytest

from alpc import errors
from alpc.types import Hyperparams, MultiViewDataset, validate


def dataset(n=100, c=3, dims=(4, 6), labels=True):
    rng = np.random.default_rng(0)
    views = [rng.standard_normal((d, n)) for d in dims]
    return MultiViewDataset(views, c, np.arange(n) % c if labels else None)


def test_consistent_dataset_validates():
    validate(dataset(), Hyperparams(anchors_per_cluster=2))


def test_mismatched_columns():
    data = dataset()
    data.views[1] = data.views[1][:, :-1]
    with pytest.raises(errors.ViewShapeError):
        validate(data, Hyperparams())


def test_anchor_budget():
    rng = np.random.default_rng(1)
    data = MultiViewDataset([rng.standard_normal((3, 50))], 10)
    with pytest.raises(errors.AnchorBudgetError, match="100"):
        validate(data, Hyperparams(anchors_per_cluster=10))


@pytest.mark.parametrize("mutate, exc", [
    (lambda d: setattr(d, "n_clusters", 1), errors.ClusterCountError),
    (lambda d: setattr(d, "labels", np.full(100, 3)), errors.LabelRangeError),
    (lambda d: setattr(d, "labels", np.full(100, -1)), errors.LabelRangeError),
    (lambda d: d.views[0].__setitem__((0, 0), np.inf), errors.NonFiniteError),
    (lambda d: setattr(d, "views", []), errors.ViewShapeError),
])
def test_each_violation_has_its_own_error(mutate, exc):
    data = dataset()
    mutate(data)
    with pytest.raises(exc):
        validate(data, Hyperparams())


@pytest.mark.parametrize("field, value", [
    ("lambda1", 0.0), ("lambda2", -1.0), ("tol", 0.0), ("ridge_epsilon", 0.0),
    ("anchors_per_cluster", 0), ("kmeans_restarts", 0),
])
def test_bad_hyperparams(field, value):
    with pytest.raises(errors.HyperparameterError):
        validate(dataset(), Hyperparams(**{field: value}))


def test_too_few_samples_for_clusters():
    rng = np.random.default_rng(2)
    with pytest.raises(errors.ClusterCountError):
        validate(MultiViewDataset([rng.standard_normal((2, 3))], 4), Hyperparams(anchors_per_cluster=1))


def test_dataset_equality():
    assert dataset() == dataset()
    other = dataset()
    other.views[0] = np.nextafter(other.views[0], np.inf)
    assert dataset() != other
    assert dataset() != dataset(labels=False)
