import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hellylab import LabeledSample, ValidationError, generate_class
from hellylab.compression import (
    ClosureCompression,
    RowPredictor,
    SingletonCompression,
    block_family,
    check_stability,
    check_validity,
    generalization_bound,
)
from hellylab.exceptions import Unrepresentable


def sample(*pairs):
    return LabeledSample.from_pairs(pairs)


class AllPositive(SingletonCompression):
    def reconstruct(self, compressed):
        return RowPredictor(np.ones(self.concept_class.n_points, dtype=np.int8))


class MiddleEntry(SingletonCompression):
    def compress(self, sample):
        return [len(sample) // 2] if len(sample) else []


# -- singleton scheme ------------------------------------------------------------


def test_singleton_examples():
    scheme = SingletonCompression(generate_class("singletons", N=9))
    S = sample((2, -1), (4, 1))
    assert scheme.kappa(S) == sample((4, 1))
    assert np.flatnonzero(scheme.rho(scheme.kappa(S)).row > 0).tolist() == [4]
    S = sample((2, -1), (5, -1), (3, -1))
    assert scheme.kappa(S) == sample((5, -1))
    assert np.flatnonzero(scheme.rho(scheme.kappa(S)).row > 0).tolist() == [6]
    assert check_validity(scheme, S)
    assert scheme.kappa(sample((7, -1))) == sample((7, -1))
    assert check_stability(scheme, S)
    # dropping the non-maximal negative 3 keeps the compression set
    assert scheme.kappa(S.remove(2)) == scheme.kappa(S)


def test_singleton_last_point_is_unrepresentable():
    scheme = SingletonCompression(generate_class("singletons", N=4))
    with pytest.raises(Unrepresentable):
        scheme.rho(sample((3, -1)))
    assert not check_validity(scheme, sample((3, -1), (1, -1)))


def test_singleton_reconstruction_is_proper():
    cls = generate_class("singletons", N=6)
    pred = SingletonCompression(cls).rho(sample((2, -1)))
    assert pred.index == 3


def test_negative_controls():
    cls = generate_class("singletons", N=8)
    S = sample((1, -1), (4, 1))
    assert not check_validity(AllPositive(cls), S)
    # removing an earlier entry shifts which entry sits in the middle
    S = sample((1, -1), (5, -1), (3, -1), (6, -1))
    assert check_validity(MiddleEntry(cls), S)
    assert not check_stability(MiddleEntry(cls), S)


# -- closure scheme --------------------------------------------------------------


def test_closure_examples():
    ints = generate_class("intervals", grid=8)
    scheme = ClosureCompression(ints)
    assert scheme.declared_size() == 2
    S = sample((2, 1), (5, 1), (3, 1), (0, -1))
    assert scheme.kappa(S) == sample((2, 1), (5, 1))
    row = scheme.rho(scheme.kappa(S)).row
    assert np.flatnonzero(row > 0).tolist() == [2, 3, 4, 5]
    assert check_validity(scheme, S) and check_stability(scheme, S)
    assert scheme.kappa(S.remove(2)) == scheme.kappa(S)
    neg = sample((1, -1), (4, -1))
    assert len(scheme.kappa(neg)) == 0
    assert np.all(scheme.rho(scheme.kappa(neg)).row < 0)


def test_closure_rejects_non_closed_class():
    scheme = ClosureCompression(generate_class("singletons", N=4))
    with pytest.raises(ValidationError):
        scheme.compress(sample((0, 1)))


def test_scheme_estimator_api():
    cls = generate_class("intervals", grid=6)
    est = ClosureCompression(cls).fit([0, 2, 4], [-1, 1, 1])
    assert est.compression_set_.tolist() == [1, 2]
    assert est.predict([0, 3, 5]).tolist() == [-1, 1, -1]
    assert est.size_ == 2


# -- randomized suites -----------------------------------------------------------


def random_realizable(cls, rng, max_size):
    target = cls.matrix[rng.integers(cls.n_hypotheses)]
    pts = rng.integers(0, cls.n_points, size=rng.integers(0, max_size + 1))
    return LabeledSample(pts, target[pts])


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_closure_scheme_on_intervals(seed):
    cls = generate_class("intervals", grid=8)
    scheme = ClosureCompression(cls)
    S = random_realizable(cls, np.random.default_rng(seed), 10)
    assert check_validity(scheme, S)
    assert check_stability(scheme, S)
    assert len(scheme.kappa(S)) <= 2


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_singleton_scheme_random(seed):
    # one extra domain point keeps every negative representable
    cls = generate_class("singletons", N=11)
    rng = np.random.default_rng(seed)
    target = -np.ones(11, dtype=int)
    if rng.random() < 0.5:
        target[rng.integers(10)] = 1
    pts = rng.integers(0, 10, size=rng.integers(1, 11))
    S = LabeledSample(pts, target[pts])
    assert check_validity(SingletonCompression(cls), S)
    assert check_stability(SingletonCompression(cls), S)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_stability_survives_pair_removal(seed):
    cls = generate_class("intervals", grid=8)
    scheme = ClosureCompression(cls)
    S = random_realizable(cls, np.random.default_rng(seed), 7)
    kept = set(scheme.compress(S))
    ref = scheme.kappa(S)
    others = [i for i in range(len(S)) if i not in kept]
    for a, b in itertools.combinations(others, 2):
        assert scheme.kappa(S.subset([i for i in range(len(S)) if i not in (a, b)])) == ref


# -- bound and block family ------------------------------------------------------


def test_bound_values():
    assert generalization_bound(1, 100, 0.05) == pytest.approx(0.0894290, abs=1e-6)
    assert generalization_bound(3, 300, 0.05) == pytest.approx(0.0486709, abs=1e-6)
    assert generalization_bound(2, 50, 0.1) == pytest.approx(2 / 46 * (2 * math.log(4) + math.log(10)))
    with pytest.raises(ValidationError):
        generalization_bound(1, 2, 0.5)
    with pytest.raises(ValidationError):
        generalization_bound(1, 10, 1.5)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 5), st.integers(20, 500), st.floats(0.001, 0.9))
def test_bound_monotonicity(l, m, delta):
    b = generalization_bound(l, m, delta)
    assert generalization_bound(l, m + 1, delta) < b
    assert generalization_bound(l + 1, m, delta) > b
    assert generalization_bound(l, m, delta / 2) > b


def test_block_family_examples():
    bf = block_family(12, 2)
    assert [len(b) for b in bf.blocks] == [3, 3, 3, 3]
    assert (len(bf.family), bf.T_m) == (6, 6)
    assert bf.cover_property_holds() and bf.size_property_holds()
    bf = block_family(10, 2)
    assert sorted(len(b) for b in bf.blocks) == [2, 2, 3, 3]
    assert bf.T_m == 4
    assert sorted(itertools.chain.from_iterable(bf.blocks)) == list(range(1, 11))
    with pytest.raises(ValidationError):
        block_family(3, 2)


@pytest.mark.parametrize("l", [1, 2, 3])
def test_block_family_small_exhaustive(l):
    for m in range(2 * l, 20):
        bf = block_family(m, l)
        assert len(bf.family) == math.comb(2 * l, l)
        assert bf.size_property_holds() and bf.cover_property_holds()
