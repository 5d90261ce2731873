"""Hard-margin SVM for separable samples in R^n.

The solver runs sequential minimal optimization on the hard-margin dual,
then polishes the result by solving the equality-constrained problem on the
points it found to lie on the margin. ``brute_force_hard_margin`` is an
independent primal oracle for tiny instances, used for certification.
"""

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_coordinates, check_labels
from .compression import CompressionScheme
from .concept_class import LabeledSample
from .exceptions import NotSeparable, ValidationError

__all__ = [
    "SEPARABILITY_TOL",
    "MARGIN_TOL",
    "HalfspaceHypothesis",
    "SvmSolution",
    "separable",
    "hard_margin_svm",
    "brute_force_hard_margin",
    "HardMarginSVC",
    "SupportVectorCompression",
]

SEPARABILITY_TOL = 1e-9
MARGIN_TOL = 1e-7


@dataclass(frozen=True)
class HalfspaceHypothesis:
    """Classifier ``x -> sign(<w, x> - v)`` with ``sign(0) = +1``.

    A zero weight vector with an infinite threshold encodes a constant
    classifier, which is what a one-class sample trains to.
    """

    weights: np.ndarray
    threshold: float

    def decision_function(self, X):
        X = check_coordinates(X)
        if X.shape[1] != self.weights.shape[0]:
            raise ValidationError("point dimension does not match the hypothesis")
        if np.isinf(self.threshold):
            return np.full(X.shape[0], -self.threshold)
        return X @ self.weights - self.threshold

    def predict(self, X):
        return np.where(self.decision_function(X) >= 0, 1, -1)

    def is_constant(self):
        return bool(np.isinf(self.threshold))

    def close_to(self, other, tol=MARGIN_TOL):
        if self.is_constant() or other.is_constant():
            return self.threshold == other.threshold
        scale = 1.0 + abs(self.threshold)
        return bool(
            np.linalg.norm(self.weights - other.weights) <= tol
            and abs(self.threshold - other.threshold) <= tol * scale
        )

    def to_dict(self):
        return {"w": self.weights.tolist(), "v": float(self.threshold)}


@dataclass(frozen=True)
class SvmSolution:
    """Maximum-margin separator with unit-norm weights.

    ``support_indices`` are positions in the training input (duplicates
    included) whose distance to the hyperplane is the margin, within tolerance.
    """

    hypothesis: HalfspaceHypothesis
    margin: float
    support_indices: tuple

    def to_dict(self):
        out = self.hypothesis.to_dict()
        out["margin"] = float(self.margin)
        out["support_indices"] = [int(i) for i in self.support_indices]
        return out


def _check_xy(points, labels):
    X = check_coordinates(points)
    y = check_labels(labels)
    if X.shape[0] != y.shape[0]:
        raise ValidationError("points and labels have different lengths")
    if X.shape[0] == 0:
        raise ValidationError("need at least one point")
    return X, y.astype(float)


def _lp_separator(X, y):
    """Solve ``max t`` s.t. ``y_i (<w, x_i> - v) >= t``, ``|w_j| <= 1``, ``t <= 1``."""
    n, dim = X.shape
    # variables (w, v, t); linprog minimizes, so the objective is -t
    c = np.zeros(dim + 2)
    c[-1] = -1.0
    A = np.hstack([-y[:, None] * X, y[:, None], np.ones((n, 1))])
    bounds = [(-1.0, 1.0)] * dim + [(None, None), (None, 1.0)]
    res = linprog(c, A_ub=A, b_ub=np.zeros(n), bounds=bounds, method="highs")
    if res.status != 0:
        raise RuntimeError(f"separability LP failed: {res.message}")
    return res.x[:dim], res.x[dim], -res.fun


def separable(points, labels, tol=SEPARABILITY_TOL):
    """Whether some hyperplane strictly separates the two label classes.

    Solves ``max t`` subject to ``y_i (<w, x_i> - v) >= t``, ``|w_j| <= 1``,
    ``t <= 1`` and reports ``t* > tol``.
    """
    X, y = _check_xy(points, labels)
    return bool(_lp_separator(X, y)[2] > tol)


def _collapse(X, y):
    """Unique points with their labels; conflicting labels are not separable."""
    uniq, first, inverse = np.unique(X, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)
    labels = np.zeros(len(uniq))
    for i, u in enumerate(inverse):
        if labels[u] == 0:
            labels[u] = y[i]
        elif labels[u] != y[i]:
            raise NotSeparable("the same point carries both labels", index=int(i))
    # restore first-occurrence order so the solve does not depend on sorting
    order = np.argsort(first, kind="stable")
    remap = np.empty_like(order)
    remap[order] = np.arange(len(order))
    return uniq[order], labels[order], remap[inverse]


def _smo(K, y, alpha=None, tol=1e-9, max_iter=1_000_000):
    """SMO with maximal violating pairs for the hard-margin dual (no upper bound)."""
    n = len(y)
    alpha = np.zeros(n) if alpha is None else alpha.copy()
    Q = (y[:, None] * y[None, :]) * K
    grad = Q @ alpha - 1.0  # gradient of 0.5 a'Qa - sum(a)
    pos = y > 0
    for _ in range(max_iter):
        score = -y * grad
        free = alpha > 0
        i = int(np.argmax(np.where(pos | free, score, -np.inf)))
        j = int(np.argmin(np.where(~pos | free, score, np.inf)))
        gap = score[i] - score[j]
        if gap <= tol * max(1.0, abs(score[i])):
            break
        curv = max(K[i, i] + K[j, j] - 2 * K[i, j], 1e-15)
        t = gap / curv
        # keep alpha_i + y_i t >= 0 and alpha_j - y_j t >= 0
        if y[i] < 0:
            t = min(t, alpha[i])
        if y[j] > 0:
            t = min(t, alpha[j])
        di, dj = y[i] * t, -y[j] * t
        alpha[i] += di
        alpha[j] += dj
        grad += Q[:, i] * di + Q[:, j] * dj
    return alpha


def _equality_solution(X, y, active):
    """Minimum-norm ``(w, v)`` with ``y_i (<w, x_i> - v) = 1`` on ``active``, via the dual KKT system."""
    Xa, ya = X[active], y[active]
    k = len(active)
    M = np.zeros((k + 1, k + 1))
    M[:k, :k] = (ya[:, None] * ya[None, :]) * (Xa @ Xa.T)
    M[:k, k] = -ya
    M[k, :k] = ya
    rhs = np.concatenate([np.ones(k), [0.0]])
    sol = np.linalg.lstsq(M, rhs, rcond=None)[0]
    if np.linalg.norm(M @ sol - rhs) > 1e-8 * (1 + np.abs(M).max()):
        return None
    lam = sol[:k]
    return (lam * ya) @ Xa, sol[k], lam


def _rescale(X, y, w):
    """Threshold midway between the classes, scaled to unit functional margin."""
    proj = X @ w
    v = 0.5 * (proj[y > 0].min() + proj[y < 0].max())
    scale = (y * (proj - v)).min()
    return w / scale, v / scale


def _feasible(X, y, w, v, slack=1e-9):
    return bool(np.all(y * (X @ w - v) >= 1 - slack))


def _constant_solution(X, y):
    v = -np.inf if y[0] > 0 else np.inf
    hyp = HalfspaceHypothesis(np.zeros(X.shape[1]), v)
    return SvmSolution(hyp, np.inf, ())


def _support(X, y, hyp, margin, tol):
    dist = y * (X @ hyp.weights - hyp.threshold)
    return tuple(int(i) for i in np.flatnonzero(dist <= margin * (1 + tol)))


def _kkt_point(Uc, yu, active):
    """Equality solution on ``active`` if it satisfies the optimality conditions, else None."""
    if len(set(yu[active].tolist())) < 2:
        return None
    sol = _equality_solution(Uc, yu, active)
    # feasibility, equality on the active set and nonnegative multipliers
    # together are the optimality conditions of the hard-margin problem
    if sol is None or sol[2].min() < -1e-9 or not _feasible(Uc, yu, sol[0], sol[1]):
        return None
    return sol[0], sol[1]


def _solve_dense(Uc, yu):
    """Hard-margin solve on all given points: SMO, then an exact polish.

    The polish guesses the active set from the approximate solution, trying
    the points of smallest functional margin first.
    """
    K = Uc @ Uc.T
    n, dim = Uc.shape
    alpha = None
    # short SMO bursts; a crude iterate usually already ranks the support
    # points first, and the KKT check makes any accepted guess exact
    for burst in range(200):
        alpha = _smo(K, yu, alpha, tol=1e-13, max_iter=50 * (burst + 1))
        w, v = _rescale(Uc, yu, (alpha * yu) @ Uc)
        funct = yu * (Uc @ w - v)
        order = np.argsort(funct, kind="stable")
        near = order[: min(n, 2 * dim + 4)]
        guesses = [np.sort(order[:r]) for r in range(2, len(near) + 1)]
        # in general position at most dim + 1 points are active
        guesses += [
            np.array(sorted(c))
            for r in range(2, dim + 2)
            for c in itertools.combinations(near.tolist(), r)
        ]
        for active in guesses:
            sol = _kkt_point(Uc, yu, active)
            if sol is not None:
                return sol
    return w, v


def hard_margin_svm(points, labels, tol=MARGIN_TOL):
    """Maximum-margin separating hyperplane.

    Parameters
    ----------
    points : array-like of shape (m, n)
    labels : array-like of shape (m,)
        Entries in {-1, +1}.
    tol : float
        Relative tolerance for margin membership of support points.

    Returns
    -------
    SvmSolution
        Unit-norm weights. A sample with one label gives a constant
        classifier with infinite margin and no support points.

    Raises
    ------
    NotSeparable
        If the labels cannot be strictly separated.
    """
    X, y = _check_xy(points, labels)
    if np.all(y == y[0]):
        return _constant_solution(X, y)
    U, yu, _ = _collapse(X, y)
    w_lp, v_lp, t_lp = _lp_separator(U, yu)
    if not t_lp > SEPARABILITY_TOL:
        raise NotSeparable("the sample is not linearly separable", size=int(X.shape[0]))
    # centering keeps the kernel well conditioned; v is shifted back below
    center = U.mean(axis=0)
    Uc = U - center
    # working set: start from the points nearest the LP separator, solve,
    # then add the worst violators until the subset solution is feasible
    dim = U.shape[1]
    slack = yu * (U @ w_lp - v_lp)
    working = set()
    for label in (1.0, -1.0):
        idx = np.flatnonzero(yu == label)
        working.update(idx[np.argsort(slack[idx], kind="stable")[: dim + 1]].tolist())
    while True:
        W = np.array(sorted(working))
        w, v = _solve_dense(Uc[W], yu[W])
        funct = yu * (Uc @ w - v)
        bad = np.flatnonzero(funct < 1 - 1e-9)
        if bad.size == 0 or working.issuperset(bad.tolist()):
            break
        worst = bad[np.argsort(funct[bad], kind="stable")[: max(dim + 1, 8)]]
        working.update(worst.tolist())
    norm = np.linalg.norm(w)
    w_unit = w / norm
    v_unit = v / norm + w_unit @ center
    hyp = HalfspaceHypothesis(w_unit, float(v_unit))
    margin = float((y * (X @ w_unit - v_unit)).min())
    return SvmSolution(hyp, margin, _support(X, y, hyp, margin, tol))


def brute_force_hard_margin(points, labels):
    """Maximum margin by enumerating candidate active sets of the primal.

    For every subset ``A`` holding both labels, minimize ``|w|`` subject to
    ``y_i (<w, x_i> - v) = 1`` on ``A`` by solving the primal optimality
    system; keep the smallest ``|w|`` that satisfies all constraints. The
    optimum's active set is among the candidates, so the result is exact.
    Exponential in the number of points; meant for at most about 10.

    Returns
    -------
    SvmSolution
    """
    X, y = _check_xy(points, labels)
    if np.all(y == y[0]):
        return _constant_solution(X, y)
    U, yu, _ = _collapse(X, y)
    m, n = U.shape
    best = None
    for size in range(2, m + 1):
        for A in itertools.combinations(range(m), size):
            A = list(A)
            if len(set(yu[A])) < 2:
                continue
            # stationarity of 0.5|w|^2 + sum mu_i (1 - y_i(<w,x_i> - v)) with
            # the equality constraints; unknowns (w, v, mu)
            k = len(A)
            B = np.hstack([yu[A, None] * U[A], -yu[A, None]])
            P = np.diag(np.r_[np.ones(n), 0.0])
            KKT = np.block([[P, -B.T], [B, np.zeros((k, k))]])
            rhs = np.r_[np.zeros(n + 1), np.ones(k)]
            sol = np.linalg.lstsq(KKT, rhs, rcond=None)[0]
            if np.linalg.norm(KKT @ sol - rhs) > 1e-8 * (1 + np.abs(KKT).max()):
                continue
            w, v = sol[:n], sol[n]
            if not _feasible(U, yu, w, v):
                continue
            nw = np.linalg.norm(w)
            if best is None or nw < best[0] - 1e-12:
                best = (nw, w, v)
    if best is None:
        raise NotSeparable("no feasible active set; the sample is not separable")
    nw, w, v = best
    hyp = HalfspaceHypothesis(w / nw, float(v / nw))
    margin = float((y * (X @ hyp.weights - hyp.threshold)).min())
    return SvmSolution(hyp, margin, _support(X, y, hyp, margin, MARGIN_TOL))


class HardMarginSVC(ClassifierMixin, BaseEstimator):
    """Hard-margin linear SVM estimator.

    Parameters
    ----------
    tol : float, default=1e-7
        Relative tolerance for margin membership of support points.

    Attributes
    ----------
    coef_ : ndarray of shape (n_features,)
        Unit-norm weight vector.
    threshold_ : float
        Offset ``v``; prediction is ``sign(<coef_, x> - threshold_)``.
    margin_ : float
    support_ : ndarray of int
        Indices of training points on the margin.
    """

    def __init__(self, tol=MARGIN_TOL):
        self.tol = tol

    def fit(self, X, y):
        sol = hard_margin_svm(X, y, tol=self.tol)
        self.solution_ = sol
        self.coef_ = sol.hypothesis.weights
        self.threshold_ = sol.hypothesis.threshold
        self.margin_ = sol.margin
        self.support_ = np.array(sol.support_indices, dtype=np.int64)
        self.n_features_in_ = self.coef_.shape[0]
        self.classes_ = np.array([-1, 1])
        return self

    def decision_function(self, X):
        check_is_fitted(self, "solution_")
        return self.solution_.hypothesis.decision_function(X)

    def predict(self, X):
        check_is_fitted(self, "solution_")
        return self.solution_.hypothesis.predict(X)


class SupportVectorCompression(CompressionScheme):
    """Stable compression of size ``n + 1`` through the hard-margin SVM.

    ``compress`` keeps the smallest subset of support points (lexicographic
    among subsets of that size) whose own max-margin solution equals the
    full one. A one-label sample is compressed to its first entry and
    reconstructed as the constant classifier.

    Parameters
    ----------
    tol : float, default=1e-7
        Tolerance for comparing two solutions.
    """

    def __init__(self, tol=MARGIN_TOL):
        self.tol = tol

    def declared_size(self, sample=None):
        if sample is None:
            raise ValidationError("the SVM scheme size depends on the sample dimension")
        return sample.points.shape[1] + 1

    def _make_sample(self, X, y):
        X = check_coordinates(X)
        y = check_labels(y, "y")
        if X.shape[0] != y.shape[0]:
            raise ValidationError("X and y have different lengths")
        return LabeledSample(X, y)

    def compress(self, sample):
        if len(sample) == 0:
            return []
        X, y = sample.points, sample.labels
        if np.all(y == y[0]):
            return [0]
        full = hard_margin_svm(X, y, tol=self.tol)
        support = full.support_indices
        for size in range(2, len(support) + 1):
            for subset in itertools.combinations(support, size):
                sub = list(subset)
                if len(set(y[sub].tolist())) < 2:
                    continue
                sol = hard_margin_svm(X[sub], y[sub], tol=self.tol)
                if sol.hypothesis.close_to(full.hypothesis, self.tol):
                    return sub
        return list(support)

    def reconstruct(self, compressed):
        if len(compressed) == 0:
            raise ValidationError("cannot reconstruct from an empty compression set")
        return hard_margin_svm(compressed.points, compressed.labels, tol=self.tol).hypothesis
