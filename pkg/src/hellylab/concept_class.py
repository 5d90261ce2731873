"""Finite concept classes, labeled samples, realizability and class families.

A concept class is stored densely as an ``(n_hypotheses, n_points)`` matrix of
``-1``/``+1`` predictions. Samples are sequences of ``(point, label)`` pairs;
for finite classes a point is a domain index, for geometric settings it is a
coordinate vector.
"""

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Optional, Sequence

import numpy as np

from ._validation import check_int, check_labels, check_point_indices
from .exceptions import ValidationError

__all__ = [
    "DomainPoint",
    "Hypothesis",
    "ConceptClass",
    "LabeledSample",
    "consistent_subclass",
    "is_realizable",
    "neighbors",
    "generate_class",
    "hard_class_layout",
    "intersection_closure",
    "is_intersection_closed",
]


@dataclass(frozen=True)
class DomainPoint:
    id: str
    coords: Optional[tuple] = None


class Hypothesis(NamedTuple):
    index: int
    predictions: np.ndarray


class ConceptClass:
    """A finite set of +/-1 classifiers over a finite domain.

    Parameters
    ----------
    matrix : array-like of shape (n_hypotheses, n_points)
        Predictions, entries in {-1, +1}. Rows must be pairwise distinct.
    domain : sequence of DomainPoint or str, optional
        Point descriptors. Defaults to ids ``"0" .. "n_points-1"``.
    name : str, optional
        Free-form tag recorded by the generators (e.g. ``"singletons"``).
    """

    def __init__(self, matrix, domain=None, name=None):
        m = np.asarray(matrix)
        if m.ndim != 2:
            raise ValidationError("class matrix must be 2-d (hypotheses x points)")
        rows = check_labels(m.reshape(-1), "hypothesis predictions").reshape(m.shape)
        if rows.shape[0] == 0:
            raise ValidationError("a concept class needs at least one hypothesis")
        if len({r.tobytes() for r in rows}) != rows.shape[0]:
            raise ValidationError("duplicate hypotheses (identical prediction rows)")
        rows = np.ascontiguousarray(rows)
        rows.setflags(write=False)
        self._matrix = rows

        if domain is None:
            domain = [DomainPoint(str(i)) for i in range(rows.shape[1])]
        domain = tuple(
            p if isinstance(p, DomainPoint) else DomainPoint(str(p)) for p in domain
        )
        if len(domain) != rows.shape[1]:
            raise ValidationError("domain size does not match the class matrix")
        if len({p.id for p in domain}) != len(domain):
            raise ValidationError("domain point ids must be unique")
        with_coords = [p.coords is not None for p in domain]
        if any(with_coords):
            if not all(with_coords):
                raise ValidationError("either every domain point has coords or none does")
            if len({len(p.coords) for p in domain}) != 1:
                raise ValidationError("domain coordinates must share one arity")
        self._domain = domain
        self.name = name

    @property
    def matrix(self):
        return self._matrix

    @property
    def domain(self):
        return self._domain

    @property
    def n_points(self):
        return self._matrix.shape[1]

    @property
    def n_hypotheses(self):
        return self._matrix.shape[0]

    def __len__(self):
        return self.n_hypotheses

    def __repr__(self):
        tag = f"{self.name}, " if self.name else ""
        return f"ConceptClass({tag}n_hypotheses={self.n_hypotheses}, n_points={self.n_points})"

    def __eq__(self, other):
        if not isinstance(other, ConceptClass):
            return NotImplemented
        return self._domain == other._domain and np.array_equal(self._matrix, other._matrix)

    def __hash__(self):
        return hash((self._domain, self._matrix.tobytes()))

    def hypothesis(self, index):
        return Hypothesis(int(index), self._matrix[index])

    @property
    def coordinates(self):
        """Domain coordinates as an array, or None for abstract domains."""
        if self._domain and self._domain[0].coords is not None:
            return np.array([p.coords for p in self._domain], dtype=float)
        return None

    @cached_property
    def agreement_masks(self):
        """Per-point bitsets over hypotheses.

        Returns ``(pos, neg)`` where bit ``h`` of ``pos[x]`` is set iff
        hypothesis ``h`` predicts +1 at point ``x``.
        """
        pos, neg = [], []
        for col in self._matrix.T:
            p = n = 0
            for h, v in enumerate(col):
                if v > 0:
                    p |= 1 << h
                else:
                    n |= 1 << h
            pos.append(p)
            neg.append(n)
        return pos, neg

    @cached_property
    def positive_sets(self):
        return [frozenset(np.flatnonzero(r > 0).tolist()) for r in self._matrix]

    def index_of_row(self, row):
        """Index of the hypothesis with prediction row ``row``, or None."""
        row = np.asarray(row)
        hits = np.flatnonzero(np.all(self._matrix == row, axis=1))
        return int(hits[0]) if hits.size else None

    def to_dict(self):
        domain = []
        for p in self._domain:
            entry = {"id": p.id}
            if p.coords is not None:
                entry["coords"] = [float(c) for c in p.coords]
            domain.append(entry)
        return {"domain": domain, "hypotheses": self._matrix.astype(int).tolist()}

    @classmethod
    def from_dict(cls, data):
        try:
            domain = [
                DomainPoint(str(p["id"]), tuple(float(c) for c in p["coords"]) if p.get("coords") is not None else None)
                for p in data["domain"]
            ]
            hyps = data["hypotheses"]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed class file: {exc}") from exc
        for row in hyps:
            for v in row:
                if isinstance(v, bool) or v not in (-1, 1) or not isinstance(v, int):
                    raise ValidationError("class file labels must be the integers -1 and 1")
        if not hyps:
            raise ValidationError("class file has no hypotheses")
        return cls(np.array(hyps, dtype=np.int8).reshape(len(hyps), len(domain)), domain)

    def to_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh)
            fh.write("\n")

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


class LabeledSample:
    """An ordered sequence of ``(point, label)`` entries; duplicates allowed.

    ``points`` is a 1-d integer array of domain indices for finite classes or
    a 2-d float array of coordinates for geometric settings.
    """

    __slots__ = ("_points", "_labels")

    def __init__(self, points=(), labels=()):
        labels = check_labels(labels)
        pts = np.asarray(points)
        if pts.size == 0 and labels.size == 0:
            pts = np.zeros(0, dtype=np.int64)
        elif pts.ndim == 1:
            if pts.dtype.kind == "f" and not np.all(pts == np.round(pts)):
                raise ValidationError("1-d sample points must be integer indices")
            pts = pts.astype(np.int64)
        elif pts.ndim == 2:
            pts = pts.astype(float)
        else:
            raise ValidationError("sample points must be 1-d indices or 2-d coordinates")
        if len(pts) != len(labels):
            raise ValidationError("points and labels differ in length")
        pts = np.ascontiguousarray(pts)
        pts.setflags(write=False)
        labels = np.ascontiguousarray(labels)
        labels.setflags(write=False)
        self._points = pts
        self._labels = labels

    @classmethod
    def from_pairs(cls, pairs):
        pairs = list(pairs)
        if not pairs:
            return cls()
        pts, labs = zip(*pairs)
        return cls(np.array(pts), np.array(labs))

    @classmethod
    def empty(cls, like=None):
        if like is not None and like.is_geometric:
            return cls(np.zeros((0, like.points.shape[1])), np.zeros(0, dtype=np.int8))
        return cls()

    @property
    def points(self):
        return self._points

    @property
    def labels(self):
        return self._labels

    @property
    def is_geometric(self):
        return self._points.ndim == 2

    def __len__(self):
        return len(self._labels)

    def __iter__(self):
        for p, y in zip(self._points, self._labels):
            yield (tuple(p.tolist()) if self.is_geometric else int(p)), int(y)

    def entries(self):
        return tuple(self)

    def __eq__(self, other):
        if not isinstance(other, LabeledSample):
            return NotImplemented
        return self.entries() == other.entries()

    def __hash__(self):
        return hash(self.entries())

    def __repr__(self):
        return f"LabeledSample({list(self)})"

    def __getitem__(self, item):
        if isinstance(item, slice):
            return LabeledSample(self._points[item], self._labels[item])
        p, y = self._points[item], self._labels[item]
        return (tuple(p.tolist()) if self.is_geometric else int(p)), int(y)

    def subset(self, positions):
        positions = np.asarray(positions, dtype=np.int64).reshape(-1)
        if positions.size == 0:
            return LabeledSample.empty(like=self)
        return LabeledSample(self._points[positions], self._labels[positions])

    def remove(self, position):
        keep = np.ones(len(self), dtype=bool)
        keep[position] = False
        return self.subset(np.flatnonzero(keep))

    def concat(self, other):
        if other is None or len(other) == 0:
            return self
        if len(self) == 0:
            return other
        if self.is_geometric != other.is_geometric:
            raise ValidationError("cannot concatenate finite and geometric samples")
        return LabeledSample(
            np.concatenate([self._points, other._points]),
            np.concatenate([self._labels, other._labels]),
        )

    def flip(self, position):
        labels = self._labels.copy()
        labels[position] = -labels[position]
        return LabeledSample(self._points, labels)

    def to_dict(self):
        pts = self._points.tolist()
        return {"entries": [[p, int(y)] for p, y in zip(pts, self._labels.tolist())]}

    @classmethod
    def from_dict(cls, data):
        """Read ``{"entries": [[x, y], ...]}``, ``{"points": [...], "labels": [...]}`` or a bare entry list."""
        try:
            if isinstance(data, dict) and "entries" not in data:
                if len(data["points"]) != len(data["labels"]):
                    raise ValidationError("sample points and labels have different lengths")
                entries = list(zip(data["points"], data["labels"]))
            else:
                entries = data["entries"] if isinstance(data, dict) else data
            pairs = [(p, y) for p, y in entries]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed sample: {exc!r}") from None
        return cls.from_pairs(pairs)


def _check_sample(concept_class, sample):
    if sample.is_geometric:
        raise ValidationError("finite classes need samples of point indices")
    check_point_indices(sample.points, concept_class.n_points, name="sample points")


def consistent_subclass(concept_class, sample):
    """Indices of the hypotheses that agree with every entry of ``sample``.

    Returns a sorted 1-d integer array (empty when the sample is unrealizable).
    """
    _check_sample(concept_class, sample)
    if len(sample) == 0:
        return np.arange(concept_class.n_hypotheses)
    cols = concept_class.matrix[:, sample.points]
    return np.flatnonzero(np.all(cols == sample.labels, axis=1))


def is_realizable(concept_class, sample):
    return consistent_subclass(concept_class, sample).size > 0


def neighbors(sample):
    """The samples that differ from ``sample`` in exactly one label."""
    if len(sample) == 0:
        raise ValidationError("the empty sample has no neighbors")
    return [sample.flip(i) for i in range(len(sample))]


# -- class families ----------------------------------------------------------


def _grid(grid):
    if isinstance(grid, (int, np.integer)):
        check_int(grid, "grid", minimum=1)
        return np.arange(1, int(grid) + 1, dtype=float)
    g = np.asarray(grid, dtype=float).reshape(-1)
    if g.size == 0:
        raise ValidationError("grid must be non-empty")
    if len(np.unique(g)) != g.size:
        raise ValidationError("duplicate coordinate points in grid")
    return np.sort(g)


def _line_domain(values):
    def fmt(v):
        return str(int(v)) if float(v).is_integer() else repr(float(v))

    return [DomainPoint(fmt(v), (float(v),)) for v in values]


def _singletons(n_points, augment_all_negative=False):
    n = check_int(n_points, "N", minimum=1)
    rows = 2 * np.eye(n, dtype=np.int8) - 1
    if augment_all_negative:
        rows = np.vstack([rows, -np.ones((1, n), dtype=np.int8)])
    return ConceptClass(rows, _line_domain(range(1, n + 1)), name="singletons")


def _thresholds(grid, augment_all_negative=False):
    g = _grid(grid)
    rows = np.where(g[None, :] >= g[:, None], 1, -1).astype(np.int8)
    if augment_all_negative:
        rows = np.vstack([rows, -np.ones((1, g.size), dtype=np.int8)])
    return ConceptClass(rows, _line_domain(g), name="thresholds")


def _intervals(grid, include_empty=True):
    g = _grid(grid)
    n = g.size
    rows = []
    for a in range(n):
        for b in range(a, n):
            r = -np.ones(n, dtype=np.int8)
            r[a : b + 1] = 1
            rows.append(r)
    if include_empty:
        rows.append(-np.ones(n, dtype=np.int8))
    return ConceptClass(np.array(rows), _line_domain(g), name="intervals")


def hard_class_layout(d, k_w):
    """Domain and hypothesis layout of the lower-bound class for ``(d, k_w)``.

    Returns ``(points, hypotheses)`` where ``points`` is a list of ``(i, j)``
    pairs and ``hypotheses`` a list of ``(i, J)`` pairs with ``J`` a sorted
    tuple; hypothesis ``(i, J)`` is -1 exactly on ``{(i, j) : j not in J}``.
    Only defined for ``d >= 2`` and ``k_w >= d + 1``.
    """
    d = check_int(d, "d", minimum=2)
    k_w = check_int(k_w, "k_w", minimum=2)
    if k_w < d + 1:
        raise ValidationError("the grouped construction needs k_w >= d + 1")
    groups = range(d - 1, k_w + d - 1)
    points = [(i, j) for i in groups for j in range(1, i + 1)]
    hyps = [(i, J) for i in groups for J in itertools.combinations(range(1, i + 1), d - 1)]
    return points, hyps


def _hard(d, k_w):
    d = check_int(d, "d", minimum=1)
    k_w = check_int(k_w, "k_w", minimum=2)
    if d == 1:
        cls = _singletons(k_w)
        cls.name = "hard"
        return cls
    if k_w <= d:
        # small-k_w variant: X = {1..d-1+k_w}, positive sets I with |I & {1..k_w}| = 1
        n = d - 1 + k_w
        rows = []
        for t in range(k_w):
            for rest in itertools.product((-1, 1), repeat=d - 1):
                r = -np.ones(n, dtype=np.int8)
                r[t] = 1
                r[k_w:] = rest
                rows.append(r)
        return ConceptClass(np.array(rows), _line_domain(range(1, n + 1)), name="hard")
    points, hyps = hard_class_layout(d, k_w)
    where = {p: c for c, p in enumerate(points)}
    rows = np.ones((len(hyps), len(points)), dtype=np.int8)
    for r, (i, J) in enumerate(hyps):
        for j in range(1, i + 1):
            if j not in J:
                rows[r, where[(i, j)]] = -1
    domain = [DomainPoint(f"({i},{j})", (float(i), float(j))) for i, j in points]
    return ConceptClass(rows, domain, name="hard")


def _halfspace_dichotomies(points, separable=None):
    from .svm import separable as default_separable

    separable = separable or default_separable
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValidationError("halfspace dichotomies need a 2-d array of points")
    if len({tuple(p) for p in pts.tolist()}) != len(pts):
        raise ValidationError("duplicate coordinate points")
    rows = [
        np.array(lab, dtype=np.int8)
        for lab in itertools.product((-1, 1), repeat=len(pts))
        if separable(pts, np.array(lab))
    ]
    domain = [DomainPoint(str(i), tuple(float(c) for c in p)) for i, p in enumerate(pts)]
    return ConceptClass(np.array(rows), domain, name="halfspace_dichotomies")


def _random(n_points, n_hypotheses, seed=0):
    n = check_int(n_points, "|X|", minimum=1)
    k = check_int(n_hypotheses, "|H|", minimum=1)
    if n > 62:
        raise ValidationError("random classes support at most 62 points")
    if k > 2**n:
        raise ValidationError("|H| exceeds the number of labelings of the domain")
    rng = np.random.default_rng(seed)
    codes = set()
    while len(codes) < k:
        codes.add(int(rng.integers(0, 2**n, dtype=np.uint64)))
    codes = sorted(codes)
    bits = (np.array(codes, dtype=np.uint64)[:, None] >> np.arange(n, dtype=np.uint64)) & np.uint64(1)
    rows = np.where(bits == 1, 1, -1).astype(np.int8)
    order = rng.permutation(k)
    return ConceptClass(rows[order], name="random")


_FAMILIES = {
    "singletons": _singletons,
    "thresholds": _thresholds,
    "intervals": _intervals,
    "hard": _hard,
    "halfspace_dichotomies": _halfspace_dichotomies,
    "random": _random,
}


def generate_class(kind, **params):
    """Build one of the named class families.

    ``singletons(N, augment_all_negative=False)``,
    ``thresholds(grid, augment_all_negative=False)``,
    ``intervals(grid, include_empty=True)``, ``hard(d, k_w)``,
    ``halfspace_dichotomies(points)`` and ``random(n_points, n_hypotheses, seed)``.
    ``grid`` is either a size (grid ``1..size``) or explicit coordinates.
    """
    try:
        factory = _FAMILIES[kind]
    except KeyError:
        raise ValidationError(
            f"unknown class family {kind!r}; expected one of {sorted(_FAMILIES)}"
        ) from None
    if kind == "singletons" and "N" in params:
        params["n_points"] = params.pop("N")
    try:
        return factory(**params)
    except TypeError as exc:
        raise ValidationError(f"bad parameters for {kind}: {exc}") from exc


# -- intersection closure ----------------------------------------------------


def _positive_bits(concept_class):
    return [int(sum(1 << x for x in s)) for s in concept_class.positive_sets]


def is_intersection_closed(concept_class):
    sets = set(_positive_bits(concept_class))
    return all((a & b) in sets for a, b in itertools.combinations(sets, 2))


def intersection_closure(concept_class):
    """Smallest superclass whose positive sets are closed under intersection.

    Added hypotheses are appended after the original rows, ordered by their
    positive sets as bitmasks.
    """
    original = _positive_bits(concept_class)
    closed = set(original)
    frontier = list(closed)
    while frontier:
        new = set()
        for a in frontier:
            for b in closed:
                c = a & b
                if c not in closed:
                    new.add(c)
        closed |= new
        frontier = list(new)
    extra = sorted(closed - set(original))
    if not extra:
        return concept_class
    n = concept_class.n_points
    rows = [np.where((m >> np.arange(n)) & 1, 1, -1).astype(np.int8) for m in extra]
    matrix = np.vstack([concept_class.matrix, np.array(rows)])
    return ConceptClass(matrix, concept_class.domain, name=concept_class.name)
