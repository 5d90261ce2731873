"""Sample compression schemes, their validity and stability checks, and the
stable-compression generalization bound.

A scheme is a pair ``(kappa, rho)``: ``compress`` picks a subsequence of the
training sample (returned as sorted positions) and ``reconstruct`` turns such
a subsequence back into a predictor. Schemes are scikit-learn classifiers:
``fit`` compresses and reconstructs, ``predict`` evaluates the result.
"""

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_int, check_labels, check_point_indices, check_probability
from .concept_class import ConceptClass, LabeledSample, is_intersection_closed
from .exceptions import HellyLabError, Unrealizable, Unrepresentable, ValidationError

__all__ = [
    "RowPredictor",
    "CompressionScheme",
    "SingletonCompression",
    "ClosureCompression",
    "check_validity",
    "check_stability",
    "generalization_bound",
    "BlockFamily",
    "block_family",
]


@dataclass(frozen=True)
class RowPredictor:
    """A predictor over a finite domain given by its full label row.

    ``index`` is the class member the row equals, when the scheme is proper.
    """

    row: np.ndarray
    index: int = None

    def predict(self, X):
        X = check_point_indices(X, self.row.shape[0])
        return self.row[X].astype(int)


class CompressionScheme(ClassifierMixin, BaseEstimator):
    """Base class for compression schemes.

    Subclasses implement ``compress(sample)``, returning the sorted positions
    of the kept entries, ``reconstruct(compressed)``, returning an object with
    a ``predict`` method, and ``declared_size(sample)``.
    """

    def compress(self, sample):
        raise NotImplementedError

    def reconstruct(self, compressed):
        raise NotImplementedError

    def declared_size(self, sample=None):
        raise NotImplementedError

    def kappa(self, sample):
        """The compressed subsequence itself."""
        return sample.subset(self.compress(sample))

    def rho(self, compressed):
        return self.reconstruct(compressed)

    def _make_sample(self, X, y):
        raise NotImplementedError

    def fit(self, X, y):
        sample = self._make_sample(X, y)
        self.compression_set_ = np.asarray(self.compress(sample), dtype=np.int64)
        self.predictor_ = self.reconstruct(sample.subset(self.compression_set_))
        self.size_ = self.declared_size(sample)
        self.classes_ = np.array([-1, 1])
        return self

    def predict(self, X):
        check_is_fitted(self, "predictor_")
        return np.asarray(self.predictor_.predict(X), dtype=int)


class _FiniteDomainScheme(CompressionScheme):
    def _make_sample(self, X, y):
        if not isinstance(self.concept_class, ConceptClass):
            raise ValidationError("concept_class must be a ConceptClass")
        X = check_point_indices(X, self.concept_class.n_points)
        y = check_labels(y, "y")
        if X.shape[0] != y.shape[0]:
            raise ValidationError("X and y have different lengths")
        return LabeledSample(X, y)

    def _predictor(self, row):
        row = np.asarray(row, dtype=np.int8)
        return RowPredictor(row, self.concept_class.index_of_row(row))


class SingletonCompression(_FiniteDomainScheme):
    """Size-one stable scheme for the class of singletons on an ordered domain.

    A positive example is kept as is. Otherwise the negative at the largest
    domain point is kept and reconstructed as the singleton at the next
    point, which is why the last domain point cannot be represented.

    Parameters
    ----------
    concept_class : ConceptClass
        A singleton class; domain point ``i`` must have its singleton row.
    """

    def __init__(self, concept_class=None):
        self.concept_class = concept_class

    def declared_size(self, sample=None):
        return 1

    def compress(self, sample):
        if len(sample) == 0:
            return []
        labels = sample.labels
        pos = np.flatnonzero(labels > 0)
        if pos.size:
            return [int(pos[0])]
        # argmax returns the first occurrence of the largest point
        return [int(np.argmax(sample.points))]

    def reconstruct(self, compressed):
        n = self.concept_class.n_points
        if len(compressed) == 0:
            # nothing was seen; fall back to the all-negative row if present
            row = -np.ones(n, dtype=np.int8)
            if self.concept_class.index_of_row(row) is None:
                raise Unrepresentable("the empty compression set needs the all-negative hypothesis")
            return self._predictor(row)
        (x, y), = compressed.entries()
        target = x if y > 0 else x + 1
        if target >= n:
            raise Unrepresentable(
                "a negative at the last domain point has no successor to place the singleton on",
                point=int(x),
            )
        row = -np.ones(n, dtype=np.int8)
        row[target] = 1
        return self._predictor(row)


class ClosureCompression(_FiniteDomainScheme):
    """Closure-based stable scheme for intersection-closed classes.

    ``compress`` keeps a minimal set of positives whose closure equals the
    closure of all positives, found by greedy removal in position order.
    ``reconstruct`` returns the smallest class member containing the kept
    positives. The declared size is the VC dimension of the class.

    Parameters
    ----------
    concept_class : ConceptClass
        Must be intersection-closed.
    """

    def __init__(self, concept_class=None):
        self.concept_class = concept_class

    @cached_property
    def _checked(self):
        cls = self.concept_class
        if not isinstance(cls, ConceptClass):
            raise ValidationError("concept_class must be a ConceptClass")
        if not is_intersection_closed(cls):
            raise ValidationError("the closure scheme needs an intersection-closed class")
        from .parameters import vc_dimension

        sets = [sum(1 << x for x in ps) for ps in cls.positive_sets]
        return sets, vc_dimension(cls, max_points=max(cls.n_points, 20), max_hypotheses=max(cls.n_hypotheses, 64))

    def declared_size(self, sample=None):
        return self._checked[1]

    def _closure(self, points_mask):
        sets = self._checked[0]
        best = None
        for i, s in enumerate(sets):
            if s & points_mask == points_mask and (best is None or s.bit_count() < sets[best].bit_count()):
                best = i
        return best

    def compress(self, sample):
        positives = [i for i, y in enumerate(sample.labels) if y > 0]
        pts = [int(p) for p in sample.points]

        def mask(positions):
            out = 0
            for i in positions:
                out |= 1 << pts[i]
            return out

        target = self._closure(mask(positives))
        if target is None:
            raise Unrealizable("no class member contains all positive points")
        kept = list(positives)
        for p in positives:
            trial = [q for q in kept if q != p]
            if self._closure(mask(trial)) == target:
                kept = trial
        return kept

    def reconstruct(self, compressed):
        m = 0
        for x, _ in compressed.entries():
            m |= 1 << int(x)
        index = self._closure(m)
        if index is None:
            raise Unrealizable("no class member contains the compressed positives")
        return RowPredictor(self.concept_class.matrix[index], index)


def check_validity(scheme, sample):
    """True iff the reconstruction from ``kappa(sample)`` labels all of ``sample`` correctly.

    Also requires the compression set to be a subsequence of at most the
    declared size. Errors raised by the scheme count as failure.
    """
    try:
        positions = list(scheme.compress(sample))
        if len(positions) > scheme.declared_size(sample):
            return False
        if any(b <= a for a, b in zip(positions, positions[1:])):
            return False
        if positions and (positions[0] < 0 or positions[-1] >= len(sample)):
            return False
        if len(sample) == 0:
            return True
        predictor = scheme.reconstruct(sample.subset(positions))
        pred = np.asarray(predictor.predict(sample.points))
        return bool(np.array_equal(pred, sample.labels))
    except HellyLabError:
        return False


def check_stability(scheme, sample):
    """True iff removing any entry outside the compression set leaves it unchanged.

    Compression sets are compared as sequences of entries.
    """
    try:
        positions = set(scheme.compress(sample))
        reference = scheme.kappa(sample)
        for i in range(len(sample)):
            if i in positions:
                continue
            if scheme.kappa(sample.remove(i)) != reference:
                return False
        return True
    except HellyLabError:
        return False


def generalization_bound(l, m, delta):
    """Error bound ``2/(m - 2l) * (l ln 4 + ln(1/delta))`` for a stable scheme of size ``l``."""
    l = check_int(l, "l", minimum=0)
    m = check_int(m, "m")
    delta = check_probability(delta, "delta")
    if m <= 2 * l:
        raise ValidationError(f"need m > 2l, got m={m}, l={l}")
    return 2.0 / (m - 2 * l) * (l * math.log(4.0) + math.log(1.0 / delta))


@dataclass(frozen=True)
class BlockFamily:
    """Unions of ``l`` out of ``2l`` contiguous blocks of ``{1, ..., m}``.

    Attributes
    ----------
    m, l : int
    blocks : tuple of tuple of int
        The ``2l`` blocks, larger blocks first.
    family : tuple of frozenset
        All unions of ``l`` blocks, in lexicographic order of block choice.
    T_m : int
        ``l * floor(m / (2l))``; every member has at most ``m - T_m`` indices.
    """

    m: int
    l: int
    blocks: tuple
    family: tuple
    T_m: int

    def size_property_holds(self):
        return all(len(member) <= self.m - self.T_m for member in self.family)

    def cover_property_holds(self):
        """Check exhaustively that every ``l`` indices lie inside one member."""
        contains = np.zeros((len(self.family), self.m + 1), dtype=bool)
        for r, member in enumerate(self.family):
            contains[r, list(member)] = True
        combos = np.array(list(itertools.combinations(range(1, self.m + 1), self.l)), dtype=np.int64)
        covered = contains[:, combos].all(axis=2).any(axis=0)
        return bool(covered.all())


def block_family(m, l):
    """Build the block family for sample size ``m`` and scheme size ``l``."""
    m = check_int(m, "m")
    l = check_int(l, "l", minimum=1)
    if m < 2 * l:
        raise ValidationError(f"need m >= 2l, got m={m}, l={l}")
    q, r = divmod(m, 2 * l)
    sizes = [q + 1] * r + [q] * (2 * l - r)
    blocks, start = [], 1
    for s in sizes:
        blocks.append(tuple(range(start, start + s)))
        start += s
    family = tuple(
        frozenset(itertools.chain.from_iterable(blocks[i] for i in choice))
        for choice in itertools.combinations(range(2 * l), l)
    )
    return BlockFamily(m=m, l=l, blocks=tuple(blocks), family=family, T_m=l * q)
