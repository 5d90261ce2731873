"""Exhaustive computation of VC, star, hollow star and dual Helly numbers.

All searches work on labeled subsets with one label per distinct point, plus
the contradictory pair ``{(x, +1), (x, -1)}``; a repeated same-label entry
always has an unrealizable neighbor, so longer sequences never matter.
Realizability is evaluated with per-point bitsets over the hypotheses.
"""

import itertools
import logging
from dataclasses import asdict, dataclass, field
from typing import Optional, Union

import numpy as np

from ._validation import check_int
from .concept_class import LabeledSample
from .exceptions import CapExceeded, NoProjection, ValidationError

logger = logging.getLogger(__name__)

__all__ = [
    "CAP_EXCEEDED",
    "DEFAULT_MAX_POINTS",
    "DEFAULT_MAX_HYPOTHESES",
    "ParameterReport",
    "ProjectionVerdict",
    "HollowStar",
    "vc_dimension",
    "star_number",
    "hollow_star_number",
    "max_hollow_star",
    "dual_helly_number",
    "minimal_unrealizable_sets",
    "projection_check",
    "compute_parameters",
]

CAP_EXCEEDED = "cap-exceeded"
DEFAULT_MAX_POINTS = 20
DEFAULT_MAX_HYPOTHESES = 64

REFUTED = "REFUTED"
CERTIFIED = "CERTIFIED_UP_TO_BUDGET"


def _check_caps(concept_class, max_points, max_hypotheses, *, need_three=True):
    if concept_class.n_points > max_points:
        raise CapExceeded(
            f"|X| = {concept_class.n_points} exceeds the search cap {max_points}"
        )
    if concept_class.n_hypotheses > max_hypotheses:
        raise CapExceeded(
            f"|H| = {concept_class.n_hypotheses} exceeds the search cap {max_hypotheses}"
        )
    if need_three and concept_class.n_hypotheses < 3:
        raise ValidationError("parameter computations assume |H| >= 3")


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _lowest(mask):
    return (mask & -mask).bit_length() - 1


# -- VC dimension ------------------------------------------------------------


def _shattered(matrix, subset):
    k = len(subset)
    codes = (matrix[:, subset] > 0).astype(np.int64) @ (1 << np.arange(k, dtype=np.int64))
    return np.unique(codes).size == 1 << k


def vc_dimension(concept_class, max_points=DEFAULT_MAX_POINTS, max_hypotheses=DEFAULT_MAX_HYPOTHESES):
    """Largest size of a shattered set of domain points.

    Subsets are searched by ascending size; since every subset of a shattered
    set is shattered, size ``s`` candidates are grown from shattered sets of
    size ``s - 1`` and the search stops at the first empty level.
    """
    _check_caps(concept_class, max_points, max_hypotheses, need_three=False)
    matrix = concept_class.matrix
    n = concept_class.n_points
    level = [()]
    size = 0
    while level:
        if 1 << (size + 1) > concept_class.n_hypotheses:
            break
        nxt = []
        for s in level:
            start = s[-1] + 1 if s else 0
            for x in range(start, n):
                cand = s + (x,)
                if _shattered(matrix, list(cand)):
                    nxt.append(cand)
        if not nxt:
            break
        level = nxt
        size += 1
    return size


# -- star and hollow star sets -------------------------------------------------


@dataclass(frozen=True)
class HollowStar:
    """A hollow star set with, for each entry, a hypothesis erring only there."""

    sample: LabeledSample
    witnesses: tuple

    def __len__(self):
        return len(self.sample)


class _StarSearch:
    """Depth-first enumeration of star sets in increasing point order.

    A node is a star set ``W`` (realizable, every one-flip neighbor
    realizable). Star sets are closed under taking subsets, so children only
    extend ``W`` by labeled points that already extended the parent to a star
    set. Extending a star set by one labeled point can also produce a hollow
    star set; every hollow star arises this way (drop its last point).
    """

    def __init__(self, concept_class):
        self.cls = concept_class
        pos, neg = concept_class.agreement_masks
        # agree[x][0] -> label -1, agree[x][1] -> label +1
        self.agree = [(n, p) for p, n in zip(pos, neg)]
        self.full = (1 << concept_class.n_hypotheses) - 1

    def _extend(self, R, N, x, yi):
        a, f = self.agree[x][yi], self.agree[x][1 - yi]
        nn = R & f
        if not nn:
            return None
        newN = []
        for m in N:
            m &= a
            if not m:
                return None
            newN.append(m)
        newN.append(nn)
        return R & a, newN

    def run(self, want_star, want_hollow, star_cap=None):
        self.best_star = 0
        self.best_hollow = 0
        self.hollow = None
        self.star_capped = False
        n = self.cls.n_points
        root = [(x, yi) for x in range(n) for yi in (0, 1)]
        self._dfs([], self.full, [], root, want_star, want_hollow, star_cap)
        return self

    def _dfs(self, W, R, N, cand, want_star, want_hollow, star_cap):
        children = []
        for x, yi in cand:
            if W and x <= W[-1][0]:
                continue
            ext = self._extend(R, N, x, yi)
            if ext is None:
                continue
            R2, N2 = ext
            if R2:
                children.append((x, yi, R2, N2))
            elif want_hollow and len(W) + 1 > self.best_hollow:
                self.best_hollow = len(W) + 1
                self.hollow = (W + [(x, yi)], N2)
        if want_star and len(W) > self.best_star:
            self.best_star = len(W)
            if star_cap is not None and self.best_star > star_cap:
                self.star_capped = True
                return True
        if not children:
            return False
        child_labels = [(x, yi) for x, yi, _, _ in children]
        for idx, (x, yi, R2, N2) in enumerate(children):
            # later members of any star or hollow star through this child are
            # themselves children of W with larger points
            bound = len(W) + 1 + len({c[0] for c in child_labels[idx:] if c[0] > x})
            useful = (want_star and bound > self.best_star) or (
                want_hollow and bound > self.best_hollow
            )
            if not useful:
                continue
            if self._dfs(W + [(x, yi)], R2, N2, child_labels, want_star, want_hollow, star_cap):
                return True
        return False


def _contradictory_pair(concept_class):
    """A size-2 hollow star ``{(x,+1),(x,-1)}`` if some point takes both labels."""
    pos, neg = concept_class.agreement_masks
    for x, (p, n) in enumerate(zip(pos, neg)):
        if p and n:
            sample = LabeledSample([x, x], [1, -1])
            # witness for entry (x,+1) errs there, i.e. predicts -1
            return HollowStar(sample, (_lowest(n), _lowest(p)))
    return None


def star_number(concept_class, cap=None, max_points=DEFAULT_MAX_POINTS,
                max_hypotheses=DEFAULT_MAX_HYPOTHESES):
    """Largest realizable sample all of whose one-flip neighbors are realizable.

    Returns :data:`CAP_EXCEEDED` as soon as a star set of size ``cap + 1`` is
    found (``cap=None`` searches exhaustively).
    """
    _check_caps(concept_class, max_points, max_hypotheses, need_three=False)
    search = _StarSearch(concept_class).run(True, False, star_cap=cap)
    if search.star_capped:
        return CAP_EXCEEDED
    return search.best_star


def max_hollow_star(concept_class, max_points=DEFAULT_MAX_POINTS,
                    max_hypotheses=DEFAULT_MAX_HYPOTHESES):
    """A largest hollow star set together with its witness hypotheses.

    Returns None only when the class has no hollow star at all (a single
    hypothesis over an empty domain).
    """
    _check_caps(concept_class, max_points, max_hypotheses, need_three=False)
    search = _StarSearch(concept_class).run(False, True)
    best = None
    if search.hollow is not None:
        W, N = search.hollow
        sample = LabeledSample([x for x, _ in W], [1 if yi else -1 for _, yi in W])
        best = HollowStar(sample, tuple(_lowest(m) for m in N))
    pair = _contradictory_pair(concept_class)
    if pair is not None and (best is None or len(best) < 2):
        best = pair
    return best


def hollow_star_number(concept_class, max_points=DEFAULT_MAX_POINTS,
                       max_hypotheses=DEFAULT_MAX_HYPOTHESES):
    """Size of the largest unrealizable sample whose one-flip neighbors are all realizable."""
    _check_caps(concept_class, max_points, max_hypotheses)
    best = max_hollow_star(concept_class, max_points, max_hypotheses)
    if best is None:
        logger.warning("class has no unrealizable sample; reporting hollow star number 0")
        return 0
    return len(best)


# -- minimal unrealizable sets -------------------------------------------------


def _minimal_unrealizable(concept_class):
    """Yield every inclusion-minimal unrealizable set of labeled points.

    A labeled point ``(x, y)`` rules out the hypotheses with ``h(x) != y``;
    a set is unrealizable iff it rules out every hypothesis, and minimal iff
    each member rules out some hypothesis no other member does. This is
    minimal hitting set enumeration over the hypergraph whose edges are the
    hypotheses, done with the MMCS branching scheme (branch on the uncovered
    hypothesis with the fewest candidate killers, keep each member critical).
    Vertex ``2x`` is ``(x, -1)`` and ``2x+1`` is ``(x, +1)``.
    """
    pos, neg = concept_class.agreement_masks
    n_h = concept_class.n_hypotheses
    kill = []
    for p, n in zip(pos, neg):
        kill.append(p)  # (x, -1) rules out hypotheses predicting +1
        kill.append(n)
    edge = [0] * n_h
    for v, km in enumerate(kill):
        for h in _bits(km):
            edge[h] |= 1 << v
    everything = (1 << n_h) - 1
    all_vertices = (1 << len(kill)) - 1

    def rec(S, crit, uncov, cand):
        if not uncov:
            yield S, crit
            return
        best_h, best_c = -1, None
        for h in _bits(uncov):
            c = edge[h] & cand
            if best_c is None or bin(c).count("1") < bin(best_c).count("1"):
                best_h, best_c = h, c
                if not c:
                    break
        if not best_c:
            return
        cand &= ~best_c
        for v in _bits(best_c):
            kv = kill[v]
            new_crit = []
            ok = True
            for c in crit:
                c &= ~kv
                if not c:
                    ok = False
                    break
                new_crit.append(c)
            if ok:
                new_crit.append(uncov & kv)
                yield from rec(S + [v], new_crit, uncov & ~kv, cand)
            cand |= 1 << v

    yield from rec([], [], everything, all_vertices)


def minimal_unrealizable_sets(concept_class, max_points=DEFAULT_MAX_POINTS,
                              max_hypotheses=DEFAULT_MAX_HYPOTHESES):
    """All inclusion-minimal unrealizable labeled sets, as samples.

    Entries are ordered by point index (label -1 before +1 at a shared point).
    """
    _check_caps(concept_class, max_points, max_hypotheses, need_three=False)
    out = []
    for S, _ in _minimal_unrealizable(concept_class):
        S = sorted(S)
        out.append(LabeledSample([v // 2 for v in S], [1 if v % 2 else -1 for v in S]))
    return out


def dual_helly_number(concept_class, max_points=DEFAULT_MAX_POINTS,
                      max_hypotheses=DEFAULT_MAX_HYPOTHESES, return_witness=False):
    """Smallest k such that every unrealizable set has an unrealizable subset of size <= k.

    Computed as the largest size of an inclusion-minimal unrealizable set.
    With ``return_witness`` a ``(k, witness_sample)`` pair is returned, the
    witness being the lexicographically first largest minimal set.
    """
    _check_caps(concept_class, max_points, max_hypotheses)
    best, witness = 0, None
    for S, _ in _minimal_unrealizable(concept_class):
        S = sorted(S)
        if len(S) > best or (len(S) == best and witness is not None and S < witness):
            best, witness = len(S), S
    if witness is None:
        logger.warning("class has no unrealizable sample; reporting dual Helly number 0")
    if return_witness:
        sample = None
        if witness is not None:
            sample = LabeledSample([v // 2 for v in witness], [1 if v % 2 else -1 for v in witness])
        return best, sample
    return best


# -- projection number ---------------------------------------------------------


@dataclass
class ProjectionVerdict:
    status: str
    k: int
    witness: Optional[tuple] = None
    multisets_tested: int = 0

    @property
    def refuted(self):
        return self.status == REFUTED


def projection_check(concept_class, k, multiset_budget=200, seed=0, hollow_star=None):
    """Search for a multiset whose majority vote has no projection at level ``k``.

    The deterministic witness (the hypotheses of a largest hollow star) is
    tried first; it refutes every ``k`` below the hollow star number. Then
    ``multiset_budget`` seeded random multisets of sizes ``1 .. 3|H|`` are
    tried. A verdict that is not REFUTED only certifies ``k`` up to the budget.
    """
    from .learners import project

    k = check_int(k, "k")
    if k < 2:
        raise ValidationError("projection level k must be >= 2")
    if hollow_star is None:
        hollow_star = max_hollow_star(concept_class, max_points=max(concept_class.n_points, DEFAULT_MAX_POINTS),
                                      max_hypotheses=max(concept_class.n_hypotheses, DEFAULT_MAX_HYPOTHESES))
    tested = 0
    if hollow_star is not None and k < len(hollow_star):
        tested += 1
        try:
            project(concept_class, hollow_star.witnesses, k)
        except NoProjection:
            return ProjectionVerdict(REFUTED, k, tuple(hollow_star.witnesses), tested)
    rng = np.random.default_rng(seed)
    n_h = concept_class.n_hypotheses
    for _ in range(multiset_budget):
        size = int(rng.integers(1, 3 * n_h + 1))
        multiset = tuple(int(i) for i in np.sort(rng.integers(0, n_h, size=size)))
        tested += 1
        try:
            project(concept_class, multiset, k)
        except NoProjection:
            return ProjectionVerdict(REFUTED, k, multiset, tested)
    return ProjectionVerdict(CERTIFIED, k, None, tested)


# -- report --------------------------------------------------------------------


@dataclass
class ParameterReport:
    vc: int
    star: Union[int, str]
    hollow_star: int
    dual_helly: int
    projection_status: dict = field(default_factory=dict)
    realizes_all_labelings: bool = False

    def to_dict(self):
        return asdict(self)


def compute_parameters(concept_class, max_points=DEFAULT_MAX_POINTS, star_cap=12,
                       max_hypotheses=DEFAULT_MAX_HYPOTHESES, multiset_budget=200, seed=0):
    """Compute every parameter of ``concept_class`` into a :class:`ParameterReport`."""
    _check_caps(concept_class, max_points, max_hypotheses)
    caps = dict(max_points=max_points, max_hypotheses=max_hypotheses)
    vc = vc_dimension(concept_class, **caps)
    star = star_number(concept_class, cap=star_cap, **caps)
    hs = max_hollow_star(concept_class, **caps)
    k_o = len(hs) if hs is not None else 0
    k_w = dual_helly_number(concept_class, **caps)
    full = vc == concept_class.n_points
    status = {"certified_k": None, "refuted_below": None}
    if k_w >= 2:
        verdict = projection_check(concept_class, k_w, multiset_budget, seed, hollow_star=hs)
        if not verdict.refuted:
            status["certified_k"] = k_w
        else:
            status["refuted_at_k_w"] = list(verdict.witness)
    if k_o >= 3:
        below = projection_check(concept_class, k_o - 1, 0, seed, hollow_star=hs)
        if below.refuted:
            status["refuted_below"] = list(below.witness)
    return ParameterReport(vc, star, k_o, k_w, status, full)
