import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hellylab import (
    ConceptClass,
    LabeledSample,
    ValidationError,
    consistent_subclass,
    generate_class,
    intersection_closure,
    is_intersection_closed,
    is_realizable,
    neighbors,
)
from hellylab.concept_class import DomainPoint

from oracles import naive_parameters, realizable


def sample(*pairs):
    return LabeledSample.from_pairs(pairs)


# -- construction ----------------------------------------------------------------


def test_rejects_duplicate_rows():
    with pytest.raises(ValidationError):
        ConceptClass([[1, -1], [1, -1]])


def test_rejects_non_pm1_entries():
    with pytest.raises(ValidationError):
        ConceptClass([[1, 0], [1, -1]])


def test_rejects_duplicate_ids_and_mixed_coords():
    with pytest.raises(ValidationError):
        ConceptClass([[1, -1]], [DomainPoint("a"), DomainPoint("a")])
    with pytest.raises(ValidationError):
        ConceptClass([[1, -1]], [DomainPoint("a", (0.0,)), DomainPoint("b")])


def test_json_round_trip(tmp_path):
    cls = generate_class("intervals", grid=4)
    path = tmp_path / "c.json"
    cls.to_json(path)
    again = ConceptClass.from_json(path)
    assert again == cls
    data = json.loads(path.read_text())
    assert set(data) == {"domain", "hypotheses"}
    assert all(v in (-1, 1) for row in data["hypotheses"] for v in row)


@pytest.mark.parametrize("bad", [[[1, 0]], [[1, True]], [[1.0, -1]], [["1", -1]]])
def test_json_labels_must_be_integers(bad):
    with pytest.raises(ValidationError):
        ConceptClass.from_dict({"domain": [{"id": "a"}, {"id": "b"}], "hypotheses": bad})


# -- realizability ---------------------------------------------------------------


def test_consistent_subclass_singletons():
    cls = generate_class("singletons", N=4)
    assert consistent_subclass(cls, sample((1, 1))).tolist() == [1]
    assert consistent_subclass(cls, LabeledSample()).tolist() == [0, 1, 2, 3]
    assert consistent_subclass(cls, sample((0, 1), (1, 1))).tolist() == []


def test_is_realizable_examples():
    cls = generate_class("singletons", N=4)
    assert is_realizable(cls, sample((2, 1)))
    assert not is_realizable(cls, sample((0, -1), (1, -1), (2, -1), (3, -1)))
    assert not is_realizable(cls, sample((1, 1), (1, -1)))


def test_neighbors():
    S = sample((0, 1), (2, -1), (3, 1))
    nb = neighbors(S)
    assert len(nb) == 3
    for i, T in enumerate(nb):
        assert [a != b for a, b in zip(S.labels, T.labels)] == [j == i for j in range(3)]
        assert neighbors(T)[i] == S
    assert neighbors(sample((4, 1))) == [sample((4, -1))]
    with pytest.raises(ValidationError):
        neighbors(LabeledSample())


def test_sample_rejects_bad_labels():
    with pytest.raises(ValidationError):
        LabeledSample([0, 1], [1, 0])


# -- generators ------------------------------------------------------------------


def test_singletons():
    cls = generate_class("singletons", N=4)
    assert cls.n_hypotheses == 4
    assert np.array_equal(cls.matrix, 2 * np.eye(4, dtype=int) - 1)
    aug = generate_class("singletons", N=4, augment_all_negative=True)
    assert aug.n_hypotheses == 5
    assert aug.index_of_row(-np.ones(4)) is not None


def test_thresholds_and_intervals():
    thr = generate_class("thresholds", grid=5)
    assert thr.n_hypotheses == 5
    assert all(np.all(np.diff(row) >= 0) for row in thr.matrix)
    assert generate_class("intervals", grid=5, include_empty=True).n_hypotheses == 16
    assert generate_class("intervals", grid=5, include_empty=False).n_hypotheses == 15


@pytest.mark.parametrize("d,k_w,n_points,n_hyps", [(2, 4, 10, 10), (3, 6, 27, 56), (2, 5, 15, 15)])
def test_hard_class_sizes(d, k_w, n_points, n_hyps):
    cls = generate_class("hard", d=d, k_w=k_w)
    assert (cls.n_points, cls.n_hypotheses) == (n_points, n_hyps)


def test_hard_class_rows_follow_the_construction():
    d, k_w = 3, 5
    cls = generate_class("hard", d=d, k_w=k_w)
    groups = [tuple(map(int, p.id.strip("()").split(","))) for p in cls.domain]
    for row in cls.matrix:
        negatives = {groups[c] for c in np.flatnonzero(row < 0)}
        firsts = {i for i, _ in negatives}
        if not negatives:
            # group d-1 has exactly d-1 points, so J covers it
            continue
        # negatives sit in one group i and leave exactly d-1 of its points positive
        assert len(firsts) == 1
        (i,) = firsts
        assert len(negatives) == i - (d - 1)


@pytest.mark.parametrize("d,k_w", [(1, 3), (2, 3), (3, 2), (3, 3), (2, 2), (4, 2)])
def test_hard_class_parameters_by_brute_force(d, k_w):
    cls = generate_class("hard", d=d, k_w=k_w)
    if cls.n_points > 9:
        pytest.skip("too large for the naive oracle")
    vc, _, hollow, helly = naive_parameters(cls.matrix)
    assert (vc, helly) == (d, k_w)
    assert hollow == helly


def test_halfspace_dichotomies_closed_under_the_oracle():
    from hellylab.svm import separable

    pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    cls = generate_class("halfspace_dichotomies", points=pts)
    rows = {tuple(r) for r in cls.matrix.tolist()}
    assert (1, 1, 1, 1) in rows
    for labels in np.array(np.meshgrid(*[[-1, 1]] * 4)).T.reshape(-1, 4):
        assert (tuple(labels.tolist()) in rows) == separable(pts, labels)
    # two-point parity labelings are the non-separable ones
    assert cls.n_hypotheses == 14


def test_halfspace_dichotomies_rejects_duplicate_points():
    with pytest.raises(ValidationError):
        generate_class("halfspace_dichotomies", points=[[0, 0], [0, 0], [1, 1]])


def test_random_class_is_deterministic():
    a = generate_class("random", n_points=6, n_hypotheses=10, seed=3)
    b = generate_class("random", n_points=6, n_hypotheses=10, seed=3)
    assert a == b
    assert len({tuple(r) for r in a.matrix.tolist()}) == 10


def test_unknown_family_and_bad_params():
    with pytest.raises(ValidationError):
        generate_class("circles", n=3)
    with pytest.raises(ValidationError):
        generate_class("hard", d=0, k_w=3)
    with pytest.raises(ValidationError):
        generate_class("singletons", N=0)


# -- intersection closure --------------------------------------------------------


def test_closure_examples():
    ints = generate_class("intervals", grid=5)
    assert is_intersection_closed(ints)
    assert intersection_closure(ints) == ints
    cls = ConceptClass([[1, 1, -1], [-1, 1, 1]])
    closed = intersection_closure(cls)
    assert closed.index_of_row([-1, 1, -1]) is not None
    assert closed.n_hypotheses == 3
    assert intersection_closure(closed) == closed


# -- properties ------------------------------------------------------------------


@st.composite
def class_and_samples(draw):
    n = draw(st.integers(1, 6))
    k = draw(st.integers(1, min(12, 2**n)))
    cls = generate_class("random", n_points=n, n_hypotheses=k, seed=draw(st.integers(0, 10_000)))
    entry = st.tuples(st.integers(0, n - 1), st.sampled_from([-1, 1]))
    S = draw(st.lists(entry, max_size=6))
    T = draw(st.lists(entry, max_size=6))
    return cls, S, T


@settings(max_examples=200, deadline=None)
@given(class_and_samples())
def test_consistent_subclass_is_intersection(data):
    cls, S, T = data
    a = set(consistent_subclass(cls, LabeledSample.from_pairs(S)).tolist())
    b = set(consistent_subclass(cls, LabeledSample.from_pairs(T)).tolist())
    both = set(consistent_subclass(cls, LabeledSample.from_pairs(S + T)).tolist())
    assert both == a & b
    assert is_realizable(cls, LabeledSample.from_pairs(S)) == realizable(cls.matrix, S)


@settings(max_examples=200, deadline=None)
@given(class_and_samples(), st.data())
def test_realizability_is_monotone(data, picker):
    cls, S, _ = data
    if not is_realizable(cls, LabeledSample.from_pairs(S)):
        return
    keep = picker.draw(st.lists(st.booleans(), min_size=len(S), max_size=len(S)))
    sub = [e for e, k in zip(S, keep) if k]
    assert is_realizable(cls, LabeledSample.from_pairs(sub))


@settings(max_examples=100, deadline=None)
@given(class_and_samples())
def test_closure_is_idempotent_superset(data):
    cls, _, _ = data
    closed = intersection_closure(cls)
    assert is_intersection_closed(closed)
    assert intersection_closure(closed) == closed
    assert all(closed.index_of_row(r) is not None for r in cls.matrix)
