"""ERM, majority vote, projection and the two recursive proper learners.

The functional API works on :class:`~hellylab.concept_class.LabeledSample`
objects and returns hypothesis indices. The estimator classes at the bottom
wrap it in the scikit-learn ``fit``/``predict`` protocol, with ``X`` holding
domain point indices.
"""

import math
from functools import lru_cache

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_int, check_labels, check_point_indices
from .concept_class import ConceptClass, LabeledSample, consistent_subclass
from .exceptions import NoProjection, Unrealizable, ValidationError

__all__ = [
    "ABSTAIN",
    "erm",
    "majority_vote",
    "majority_label",
    "agreement_region",
    "project",
    "algorithm_A",
    "algorithm_A_erm",
    "resolve_k",
    "ERMClassifier",
    "ProjectionLearner",
    "ConsistentProjectionLearner",
]

ABSTAIN = 0


def erm(concept_class, sample):
    """Lowest-index hypothesis consistent with every entry of ``sample``."""
    idx = consistent_subclass(concept_class, sample)
    if idx.size == 0:
        raise Unrealizable("no hypothesis is consistent with the sample", size=len(sample))
    return int(idx[0])


def _check_multiset(concept_class, multiset):
    m = np.asarray(multiset, dtype=np.int64).reshape(-1)
    if m.size == 0:
        raise ValidationError("the hypothesis multiset must be non-empty")
    if m.min() < 0 or m.max() >= concept_class.n_hypotheses:
        raise ValidationError("hypothesis index out of range")
    return m


def _vote(concept_class, multiset):
    m = _check_multiset(concept_class, multiset)
    n_pos = (concept_class.matrix[m] > 0).sum(axis=0)
    n = m.size
    maj = np.where(2 * n_pos > n, 1, np.where(2 * (n - n_pos) > n, -1, ABSTAIN)).astype(np.int8)
    disagree = np.where(maj > 0, n - n_pos, n_pos)
    return maj, disagree, n


def majority_vote(concept_class, multiset):
    """Majority label of the multiset at every domain point (0 marks a tie)."""
    return _vote(concept_class, multiset)[0]


def majority_label(concept_class, multiset, point):
    """Strict-majority label at one point: +1, -1, or :data:`ABSTAIN` on a tie."""
    point = int(check_point_indices([point], concept_class.n_points, "point")[0])
    return int(majority_vote(concept_class, multiset)[point])


def agreement_region(concept_class, multiset, l):
    """Points where fewer than ``|multiset| / l`` members disagree with the majority.

    Tie points are excluded: there at least half the members disagree, which
    is never below ``|multiset| / l`` for ``l >= 2``.
    """
    l = check_int(l, "l")
    if l < 2:
        raise ValidationError("l must be >= 2")
    maj, disagree, n = _vote(concept_class, multiset)
    return np.flatnonzero((maj != ABSTAIN) & (l * disagree < n))


def project(concept_class, multiset, k):
    """Lowest-index hypothesis matching the majority vote on the agreement region at ``k``."""
    k = check_int(k, "k")
    if k < 2:
        raise ValidationError("k must be >= 2")
    maj, disagree, n = _vote(concept_class, multiset)
    region = np.flatnonzero((maj != ABSTAIN) & (k * disagree < n))
    if region.size == 0:
        return 0
    cols = concept_class.matrix[:, region]
    hits = np.flatnonzero(np.all(cols == maj[region], axis=1))
    if hits.size == 0:
        raise NoProjection(
            f"no hypothesis agrees with the majority vote on the agreement region at k={k}",
            k=k,
            multiset=[int(i) for i in np.asarray(multiset).reshape(-1)],
        )
    return int(hits[0])


def _seed_sequence(seed):
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, np.random.Generator):
        return np.random.SeedSequence(int(seed.integers(2**63)))
    return np.random.SeedSequence(seed)


def algorithm_A(concept_class, S, T=None, k_p=2, seed=None):
    """Recursive proper learner built from majority votes of ``k_p + 1`` sub-learners.

    If ``|S| < 4`` it returns ERM on ``S`` followed by ``T``. Otherwise ``S0``
    is the first ``ceil(|S|/2)`` entries of ``S``; each of ``k_p + 1``
    branches draws ``floor(|S|/4)`` entries of the remainder without
    replacement, recurses on ``(S0, T + draw)`` and the results are
    projected at level ``k_p``. Branch ``i`` of a call takes its randomness
    from the seed sequence spawned at path position ``i``, so the output only
    depends on ``seed``. The result is always correct on every entry of ``T``.
    """
    k_p = check_int(k_p, "k_p")
    if k_p < 2:
        raise ValidationError("k_p must be >= 2")
    T = T if T is not None else LabeledSample()
    return _algorithm_A(concept_class, S, T, k_p, _seed_sequence(seed))


def _algorithm_A(concept_class, S, T, k_p, ss):
    if len(S) < 4:
        return erm(concept_class, S.concat(T))
    half = math.ceil(len(S) / 2)
    S0 = S[:half]
    rest = S[half:]
    size = len(S) // 4
    hyps = []
    for child in ss.spawn(k_p + 1):
        rng = np.random.default_rng(child)
        draw = rng.choice(len(rest), size=size, replace=False)
        hyps.append(_algorithm_A(concept_class, S0, T.concat(rest.subset(draw)), k_p, child.spawn(1)[0]))
    return project(concept_class, hyps, k_p)


def algorithm_A_erm(concept_class, S, k_p=2):
    """Sample-consistent variant: leave-one-block-out recursion, then projection.

    ``S`` is split by position into ``k_p + 1`` contiguous blocks, the first
    ``k_p`` of size ``floor(|S|/(k_p+1))`` and the last taking the remainder;
    branch ``i`` recurses on the other blocks (kept in sequence order).
    Samples shorter than ``k_p + 1`` go to ERM. Deterministic; the output is
    consistent with all of ``S``.
    """
    k_p = check_int(k_p, "k_p")
    if k_p < 2:
        raise ValidationError("k_p must be >= 2")

    # the recursion revisits identical position subsets along different paths
    @lru_cache(maxsize=None)
    def run(positions):
        n = len(positions)
        sub = S.subset(list(positions))
        if n < k_p + 1:
            return erm(concept_class, sub)
        b = n // (k_p + 1)
        cuts = [i * b for i in range(k_p + 1)] + [n]
        hyps = []
        for i in range(k_p + 1):
            others = positions[: cuts[i]] + positions[cuts[i + 1]:]
            hyps.append(run(others))
        return project(concept_class, hyps, k_p)

    return run(tuple(range(len(S))))


def resolve_k(concept_class, k):
    """Map ``k="auto"`` to the dual Helly number, which equals the projection number on finite classes."""
    if k == "auto" or k is None:
        from .parameters import dual_helly_number

        kw = dual_helly_number(
            concept_class,
            max_points=max(concept_class.n_points, 20),
            max_hypotheses=max(concept_class.n_hypotheses, 64),
        )
        return max(kw, 2)
    k = check_int(k, "k")
    if k < 2:
        raise ValidationError("k must be >= 2")
    return k


# -- estimators ----------------------------------------------------------------


class _FiniteClassLearner(ClassifierMixin, BaseEstimator):
    """Shared plumbing for learners over a finite :class:`ConceptClass`.

    Fitted learners expose ``hypothesis_index_`` (an index into the class)
    and ``hypothesis_`` (its prediction row). They are proper: ``predict``
    only ever evaluates a member of the class.
    """

    def _validate(self, X, y):
        if not isinstance(self.concept_class, ConceptClass):
            raise ValidationError("concept_class must be a ConceptClass")
        X = check_point_indices(X, self.concept_class.n_points)
        y = check_labels(y, "y")
        if X.shape[0] != y.shape[0]:
            raise ValidationError("X and y have different lengths")
        return LabeledSample(X, y)

    def _set_result(self, index):
        self.hypothesis_index_ = int(index)
        self.hypothesis_ = self.concept_class.matrix[index]
        self.classes_ = np.array([-1, 1])
        return self

    def predict(self, X):
        check_is_fitted(self, "hypothesis_index_")
        X = check_point_indices(X, self.concept_class.n_points)
        return self.hypothesis_[X].astype(int)


class ERMClassifier(_FiniteClassLearner):
    """Empirical risk minimizer choosing the lowest-index consistent hypothesis.

    Parameters
    ----------
    concept_class : ConceptClass
        The hypothesis class to learn.
    """

    def __init__(self, concept_class=None):
        self.concept_class = concept_class

    def fit(self, X, y):
        sample = self._validate(X, y)
        return self._set_result(erm(self.concept_class, sample))


class ProjectionLearner(_FiniteClassLearner):
    """The randomized recursive proper learner (``algorithm_A`` with ``T`` empty).

    Parameters
    ----------
    concept_class : ConceptClass
    k : int or "auto", default="auto"
        Projection level; ``"auto"`` uses the dual Helly number of the class.
    random_state : int, SeedSequence or None
        Seed for the subsampling; equal seeds give identical fits.
    """

    def __init__(self, concept_class=None, k="auto", random_state=None):
        self.concept_class = concept_class
        self.k = k
        self.random_state = random_state

    def fit(self, X, y):
        sample = self._validate(X, y)
        self.k_ = resolve_k(self.concept_class, self.k)
        index = algorithm_A(self.concept_class, sample, None, self.k_, seed=self.random_state)
        return self._set_result(index)


class ConsistentProjectionLearner(_FiniteClassLearner):
    """The deterministic sample-consistent recursive learner (``algorithm_A_erm``).

    Parameters
    ----------
    concept_class : ConceptClass
    k : int or "auto", default="auto"
    """

    def __init__(self, concept_class=None, k="auto"):
        self.concept_class = concept_class
        self.k = k

    def fit(self, X, y):
        sample = self._validate(X, y)
        self.k_ = resolve_k(self.concept_class, self.k)
        return self._set_result(algorithm_A_erm(self.concept_class, sample, self.k_))
