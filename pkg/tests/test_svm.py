import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.base import clone

from hellylab import LabeledSample, NotSeparable, ValidationError
from hellylab.compression import check_stability, check_validity
from hellylab.svm import (
    HalfspaceHypothesis,
    HardMarginSVC,
    SupportVectorCompression,
    brute_force_hard_margin,
    hard_margin_svm,
    separable,
)


def random_separable(rng, n_points, dim, gap=0.05):
    """Points in the unit cube labelled by a random hyperplane, none closer than ``gap``."""
    w = rng.normal(size=dim)
    w /= np.linalg.norm(w)
    v = float(w @ rng.random(dim))
    X = rng.random((4 * n_points, dim))
    keep = np.abs(X @ w - v) > gap
    X = X[keep][:n_points]
    y = np.where(X @ w - v >= 0, 1, -1)
    return X, y


# -- separability ----------------------------------------------------------------


def test_separable_examples():
    assert separable([[-1, 0], [1, 0]], [-1, 1])
    assert not separable([[0, 0], [1, 1], [0, 1], [1, 0]], [1, 1, -1, -1])
    assert not separable([[0, 0], [0, 0]], [1, -1])
    assert separable([[3, 3]], [1])
    with pytest.raises(ValidationError):
        separable([[0, 0], [1]], [1, -1])


# -- solver examples -------------------------------------------------------------


def test_two_point_solution():
    sol = hard_margin_svm([[-1, 0], [1, 0]], [-1, 1])
    assert np.allclose(sol.hypothesis.weights, [1, 0])
    assert sol.hypothesis.threshold == pytest.approx(0, abs=1e-9)
    assert sol.margin == pytest.approx(1)
    assert sol.support_indices == (0, 1)


def test_three_point_solution():
    sol = hard_margin_svm([[0, 0], [2, 0], [0, 2]], [-1, 1, 1])
    assert np.allclose(sol.hypothesis.weights, [math.sqrt(0.5)] * 2)
    assert sol.hypothesis.threshold == pytest.approx(math.sqrt(0.5))
    assert sol.margin == pytest.approx(math.sqrt(2) / 2)
    assert sol.support_indices == (0, 1, 2)


def test_one_dimensional_solution():
    sol = hard_margin_svm([[0], [2]], [-1, 1])
    assert sol.hypothesis.weights.tolist() == pytest.approx([1])
    assert sol.hypothesis.threshold == pytest.approx(1)
    assert sol.margin == pytest.approx(1)


def test_not_separable_and_duplicates():
    with pytest.raises(NotSeparable):
        hard_margin_svm([[0, 0], [1, 1], [0, 1], [1, 0]], [1, 1, -1, -1])
    with pytest.raises(NotSeparable):
        hard_margin_svm([[1, 1], [1, 1]], [1, -1])
    sol = hard_margin_svm([[-1, 0], [1, 0], [1, 0]], [-1, 1, 1])
    assert sol.margin == pytest.approx(1)
    assert sol.support_indices == (0, 1, 2)


def test_one_class_sample_gives_constant():
    sol = hard_margin_svm([[0, 0], [1, 2]], [-1, -1])
    assert sol.hypothesis.is_constant()
    assert sol.hypothesis.predict([[5, 5], [-3, 0]]).tolist() == [-1, -1]
    assert sol.support_indices == ()


def test_sign_zero_is_positive():
    h = HalfspaceHypothesis(np.array([1.0, 0.0]), 1.0)
    assert h.predict([[1.0, 7.0], [0.999, 0.0]]).tolist() == [1, -1]


def test_brute_force_oracle_examples():
    sol = brute_force_hard_margin([[0, 0], [2, 0], [0, 2]], [-1, 1, 1])
    assert sol.margin == pytest.approx(math.sqrt(2) / 2)


# -- properties ------------------------------------------------------------------


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 8), st.sampled_from([2, 3]))
def test_matches_brute_force(seed, n, dim):
    X, y = random_separable(np.random.default_rng(seed), n, dim)
    if len(set(y.tolist())) < 2:
        return
    fast = hard_margin_svm(X, y)
    slow = brute_force_hard_margin(X, y)
    assert fast.margin == pytest.approx(slow.margin, rel=1e-6)
    assert fast.hypothesis.close_to(slow.hypothesis, 1e-6)
    assert set(fast.support_indices) == set(slow.support_indices)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 12), st.sampled_from([1, 2, 3]))
def test_solution_invariants(seed, n, dim):
    rng = np.random.default_rng(seed)
    X, y = random_separable(rng, n, dim)
    if len(set(y.tolist())) < 2:
        return
    sol = hard_margin_svm(X, y)
    h = sol.hypothesis
    assert np.linalg.norm(h.weights) == pytest.approx(1)
    assert np.all(y * h.decision_function(X) >= sol.margin * (1 - 1e-7))
    # removing a non-support point changes nothing
    for i in range(len(y)):
        if i in sol.support_indices:
            continue
        keep = [j for j in range(len(y)) if j != i]
        sub = hard_margin_svm(X[keep], y[keep])
        assert sub.hypothesis.close_to(h, 1e-6)
        assert sub.margin == pytest.approx(sol.margin, rel=1e-6)
        assert [keep[j] for j in sub.support_indices] == list(sol.support_indices)
    # permutation and translation
    perm = rng.permutation(len(y))
    p = hard_margin_svm(X[perm], y[perm])
    assert p.hypothesis.close_to(h, 1e-6)
    shift = rng.normal(size=dim)
    t = hard_margin_svm(X + shift, y)
    assert np.allclose(t.hypothesis.weights, h.weights, atol=1e-6)
    assert t.hypothesis.threshold == pytest.approx(h.threshold + h.weights @ shift, abs=1e-6)


# -- compression -----------------------------------------------------------------


def test_compression_examples():
    scheme = SupportVectorCompression()
    S = LabeledSample(np.array([[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]]), np.array([-1, 1, 1]))
    assert scheme.compress(S) == [0, 1, 2]
    bigger = S.concat(LabeledSample(np.array([[5.0, 5.0]]), np.array([1])))
    assert scheme.compress(bigger) == [0, 1, 2]
    assert check_validity(scheme, bigger) and check_stability(scheme, bigger)
    assert scheme.declared_size(S) == 3


def test_compression_of_degenerate_support():
    # four points on the margin lines; two of them already determine the solution
    X = np.array([[0.0, 0.0], [0.0, 1.0], [2.0, 0.0], [2.0, 1.0]])
    y = np.array([-1, -1, 1, 1])
    S = LabeledSample(X, y)
    scheme = SupportVectorCompression()
    kept = scheme.compress(S)
    assert len(kept) <= 3
    assert check_validity(scheme, S) and check_stability(scheme, S)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 10), st.sampled_from([1, 2, 3]))
def test_compression_random(seed, n, dim):
    X, y = random_separable(np.random.default_rng(seed), n, dim)
    S = LabeledSample(X, y)
    scheme = SupportVectorCompression()
    assert len(scheme.compress(S)) <= dim + 1
    assert check_validity(scheme, S)
    assert check_stability(scheme, S)


def test_estimator():
    X = np.array([[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]])
    y = np.array([-1, 1, 1])
    est = clone(HardMarginSVC()).fit(X, y)
    assert est.margin_ == pytest.approx(math.sqrt(2) / 2)
    assert est.predict(X).tolist() == y.tolist()
    assert est.score(X, y) == 1.0
    assert est.support_.tolist() == [0, 1, 2]
    svc = SupportVectorCompression().fit(X, y)
    assert svc.predict([[3.0, 3.0]]).tolist() == [1]
