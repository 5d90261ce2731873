"""Finite-support PAC experiments.

Every distribution has finite support, so the true error of a trained
hypothesis is an exact weighted sum rather than a test-set estimate. Trial
``t`` of an experiment with master seed ``s`` draws all of its randomness
from ``SeedSequence(s, spawn_key=(t,))``, so results do not depend on how
trials are spread over workers.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed
from scipy.stats import binomtest
from sklearn.base import clone

from ._validation import check_int, check_probability
from .compression import (
    ClosureCompression,
    RowPredictor,
    SingletonCompression,
    check_stability,
    check_validity,
    generalization_bound,
)
from .concept_class import ConceptClass, LabeledSample, generate_class, hard_class_layout
from .exceptions import HellyLabError, ValidationError
from .learners import ConsistentProjectionLearner, ERMClassifier, ProjectionLearner, resolve_k
from .svm import HalfspaceHypothesis, SupportVectorCompression, hard_margin_svm

__all__ = [
    "DiscreteDistribution",
    "PacInstance",
    "ExperimentConfig",
    "ExperimentResult",
    "SampleComplexityEstimate",
    "CouponCollectorResult",
    "SvmBenchResult",
    "wilson_interval",
    "true_error",
    "make_learner",
    "run_pac",
    "estimate_sample_complexity",
    "hollow_star_instance",
    "hollow_star_experiment",
    "hard_class_i_eps",
    "hard_class_instance",
    "hard_class_experiment",
    "coupon_collector",
    "coupon_lemma_bound",
    "random_halfspace_instance",
    "svm_bench",
    "CompressionSuiteResult",
    "random_scheme_sample",
    "compression_suite",
]

QUANTILES = (0.1, 0.25, 0.5, 0.75, 0.9)


@dataclass(frozen=True)
class DiscreteDistribution:
    """Finite-support distribution over domain indices or coordinate points.

    Zero-mass support points are allowed.
    """

    support: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self):
        support = np.asarray(self.support)
        probs = np.asarray(self.probabilities, dtype=float).reshape(-1)
        if support.shape[0] != probs.shape[0]:
            raise ValidationError("support and probabilities have different lengths")
        if probs.size == 0:
            raise ValidationError("a distribution needs a non-empty support")
        if np.any(probs < 0) or not np.all(np.isfinite(probs)):
            raise ValidationError("probabilities must be finite and nonnegative")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise ValidationError(f"probabilities sum to {probs.sum()!r}, not 1")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probabilities", probs)

    def draw(self, n, rng):
        """Positions (into ``support``) of ``n`` i.i.d. draws."""
        return rng.choice(self.probabilities.shape[0], size=n, p=self.probabilities)


@dataclass(frozen=True)
class PacInstance:
    """A distribution plus a target, either in a finite class or a halfspace.

    Parameters
    ----------
    distribution : DiscreteDistribution
        Over domain indices when ``concept_class`` is given, else over points.
    target : int or HalfspaceHypothesis
    concept_class : ConceptClass, optional
    """

    distribution: DiscreteDistribution
    target: object
    concept_class: ConceptClass = None

    def __post_init__(self):
        if self.concept_class is not None:
            if not isinstance(self.target, (int, np.integer)):
                raise ValidationError("a finite-class instance needs an integer target index")
            if not 0 <= self.target < self.concept_class.n_hypotheses:
                raise ValidationError("target index out of range")
            object.__setattr__(self, "target", int(self.target))
        elif not isinstance(self.target, HalfspaceHypothesis):
            raise ValidationError("a halfspace instance needs a HalfspaceHypothesis target")

    @property
    def setting(self):
        return "finite" if self.concept_class is not None else "halfspace"

    def labels(self, positions=None):
        """Target labels at the given support positions (all by default)."""
        support = self.distribution.support
        if positions is not None:
            support = support[positions]
        if self.concept_class is not None:
            return self.concept_class.matrix[self.target, support].astype(np.int8)
        return self.target.predict(support).astype(np.int8)


@dataclass(frozen=True)
class ExperimentConfig:
    epsilon: float
    delta: float
    n: int
    trials: int
    seed: int = 0

    def __post_init__(self):
        check_probability(self.epsilon, "epsilon")
        check_probability(self.delta, "delta")
        check_int(self.n, "n", minimum=0)
        check_int(self.trials, "trials", minimum=1)
        check_int(self.seed, "seed", minimum=0)


def wilson_interval(successes, trials):
    """Wilson score 95% interval for a binomial proportion."""
    ci = binomtest(int(successes), int(trials)).proportion_ci(0.95, method="wilson")
    return float(ci.low), float(ci.high)


@dataclass(frozen=True)
class ExperimentResult:
    """Failure statistics of one Monte Carlo experiment.

    ``failure_rate`` is the fraction of trials whose true error exceeds
    ``epsilon``; ``errors`` holds the per-trial true errors in trial order.
    """

    n: int
    epsilon: float
    trials: int
    failures: int
    failure_rate: float
    wilson_95_interval: tuple
    error_quantiles: dict
    errors: np.ndarray = field(repr=False, compare=False)

    def to_dict(self):
        lo, hi = self.wilson_95_interval
        return {
            "n": self.n,
            "epsilon": self.epsilon,
            "trials": self.trials,
            "failures": self.failures,
            "failure_rate": self.failure_rate,
            "wilson_lo": lo,
            "wilson_hi": hi,
            "error_quantiles": {str(q): v for q, v in self.error_quantiles.items()},
        }


def _summarize(errors, n, epsilon, exceed=None):
    errors = np.asarray(errors, dtype=float)
    failed = errors > epsilon if exceed is None else exceed(errors)
    k = int(failed.sum())
    return ExperimentResult(
        n=int(n),
        epsilon=float(epsilon),
        trials=int(errors.size),
        failures=k,
        failure_rate=k / errors.size,
        wilson_95_interval=wilson_interval(k, errors.size),
        error_quantiles={q: float(np.quantile(errors, q)) for q in QUANTILES},
        errors=errors,
    )


def true_error(hypothesis, instance):
    """Exact probability mass of the points where ``hypothesis`` and the target disagree.

    ``hypothesis`` may be a hypothesis index or prediction row (finite
    setting), a :class:`HalfspaceHypothesis` (halfspace setting), or any
    fitted object with a ``predict`` method.
    """
    support = instance.distribution.support
    if isinstance(hypothesis, (int, np.integer)):
        if instance.setting != "finite":
            raise ValidationError("a hypothesis index needs a finite-class instance")
        pred = instance.concept_class.matrix[int(hypothesis), support]
    elif isinstance(hypothesis, np.ndarray) and hypothesis.ndim == 1 and instance.setting == "finite":
        if hypothesis.shape[0] != instance.concept_class.n_points:
            raise ValidationError("prediction row length does not match the domain")
        pred = hypothesis[support]
    elif isinstance(hypothesis, HalfspaceHypothesis):
        if instance.setting != "halfspace":
            raise ValidationError("a halfspace hypothesis needs a halfspace instance")
        pred = hypothesis.predict(support)
    elif isinstance(hypothesis, RowPredictor) or hasattr(hypothesis, "predict"):
        pred = hypothesis.predict(support)
    else:
        raise ValidationError(f"cannot evaluate a hypothesis of type {type(hypothesis).__name__}")
    wrong = np.asarray(pred) != instance.labels()
    return float(instance.distribution.probabilities[wrong].sum())


def make_learner(name, concept_class=None, k="auto"):
    """Learner for a name: ``"erm"``, ``"A"``, ``"A_ERM"``, ``"svm"`` or ``"oracle"``.

    ``k="auto"`` is resolved once here, not per trial.
    """
    if name == "oracle":
        return "oracle"
    if name == "svm":
        from .svm import HardMarginSVC

        return HardMarginSVC()
    if name not in ("erm", "A", "A_ERM"):
        raise ValidationError(f"unknown learner {name!r}; expected erm, A, A_ERM, svm or oracle")
    if concept_class is None:
        raise ValidationError(f"learner {name!r} needs a concept class")
    if name == "erm":
        return ERMClassifier(concept_class)
    k = resolve_k(concept_class, k)
    if name == "A":
        return ProjectionLearner(concept_class, k=k)
    return ConsistentProjectionLearner(concept_class, k=k)


def _trial_streams(seed, trial):
    data, learner = np.random.SeedSequence(seed, spawn_key=(trial,)).spawn(2)
    return np.random.default_rng(data), int(learner.generate_state(1)[0])


def _fit_and_score(learner, instance, n, rng, learner_seed, trial):
    """Draw ``n`` examples, train, and return the exact true error."""
    positions = instance.distribution.draw(n, rng)
    if isinstance(learner, str):
        if learner != "oracle":
            raise ValidationError(f"unknown learner {learner!r}")
        return true_error(instance.target, instance)
    est = clone(learner)
    if "random_state" in est.get_params() and est.get_params()["random_state"] is None:
        est.set_params(random_state=learner_seed)
    X = instance.distribution.support[positions]
    y = instance.labels(positions)
    try:
        est.fit(X, y)
    except HellyLabError as exc:
        exc.context["trial"] = trial
        exc.trial = trial
        raise
    if instance.setting == "finite" and hasattr(est, "hypothesis_index_"):
        return true_error(est.hypothesis_index_, instance)
    if hasattr(est, "solution_"):
        return true_error(est.solution_.hypothesis, instance)
    return true_error(est, instance)


def _run_trials(fn, trials, n_jobs):
    if n_jobs in (None, 1):
        return [fn(t) for t in range(trials)]
    return Parallel(n_jobs=n_jobs)(delayed(fn)(t) for t in range(trials))


def run_pac(learner, instance, config, n_jobs=1):
    """Failure rate of ``learner`` at sample size ``config.n`` on a fixed instance.

    Parameters
    ----------
    learner : estimator or "oracle"
        A scikit-learn style estimator, cloned for every trial; estimators
        with an unset ``random_state`` get a per-trial seed.
    instance : PacInstance
    config : ExperimentConfig
    n_jobs : int, default=1
        Worker processes; results are identical for every value.

    Returns
    -------
    ExperimentResult
    """
    def one(trial):
        rng, lseed = _trial_streams(config.seed, trial)
        return _fit_and_score(learner, instance, config.n, rng, lseed, trial)

    errors = _run_trials(one, config.trials, n_jobs)
    return _summarize(errors, config.n, config.epsilon)


@dataclass(frozen=True)
class SampleComplexityEstimate:
    """Smallest tested ``n`` whose failure-rate Wilson upper bound is at most ``delta``.

    ``n`` is None when the search hit ``n_cap`` first (``capped`` is then True).
    ``trace`` lists ``(n, failure_rate, wilson_hi)`` in evaluation order.
    """

    n: int
    capped: bool
    trace: tuple

    def to_dict(self):
        return {
            "n": self.n,
            "capped": self.capped,
            "trace": [{"n": n, "failure_rate": r, "wilson_hi": h} for n, r, h in self.trace],
        }


def estimate_sample_complexity(learner, instance, epsilon, delta, trials, seed=0, n_cap=4096, n_jobs=1):
    """Doubling search then bisection on the Wilson upper bound of the failure rate.

    Each tested ``n`` reuses the same seed, so runs at different ``n`` share
    their per-trial random streams.
    """
    n_cap = check_int(n_cap, "n_cap", minimum=1)
    trace = []
    cache = {}

    def ok(n):
        if n not in cache:
            res = run_pac(learner, instance, ExperimentConfig(epsilon, delta, n, trials, seed), n_jobs=n_jobs)
            hi = res.wilson_95_interval[1]
            trace.append((n, res.failure_rate, hi))
            cache[n] = hi <= delta
        return cache[n]

    if ok(0):
        return SampleComplexityEstimate(0, False, tuple(trace))
    lo, hi = 0, 1
    while not ok(hi):
        lo = hi
        hi *= 2
        if hi > n_cap:
            if ok(n_cap):
                hi = n_cap
                break
            return SampleComplexityEstimate(None, True, tuple(trace))
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return SampleComplexityEstimate(hi, False, tuple(trace))


# -- lower-bound constructions ---------------------------------------------------


def hollow_star_instance(k, epsilon, i_star):
    """Singletons on ``k`` points with the target's own point at zero mass.

    Points ``1..k-1`` (0-based) other than ``i_star`` get mass
    ``epsilon/(1-epsilon)`` each and point 0 takes the rest. The target is
    the singleton at ``i_star``, so every example is labeled -1.
    """
    k = check_int(k, "k", minimum=3)
    epsilon = check_probability(epsilon, "epsilon")
    if epsilon > 1.0 / k:
        raise ValidationError(f"need epsilon <= 1/k, got epsilon={epsilon}, k={k}")
    i_star = check_int(i_star, "i_star", minimum=1)
    if i_star >= k:
        raise ValidationError("i_star must be a point other than the first")
    cls = generate_class("singletons", n_points=k)
    mass = epsilon / (1.0 - epsilon)
    probs = np.full(k, mass)
    probs[i_star] = 0.0
    probs[0] = 0.0
    probs[0] = 1.0 - probs.sum()
    return PacInstance(DiscreteDistribution(np.arange(k), probs), i_star, cls)


def _resolve_learner(learner, concept_class):
    if isinstance(learner, str) and learner != "oracle":
        return make_learner(learner, concept_class)
    return learner


def hollow_star_experiment(k, epsilon, n, trials, seed=0, learner="erm", n_jobs=1):
    """Failure rate on the hollow-star lower-bound instance for singletons.

    The target point is drawn uniformly from points 2..k in every trial.
    """
    k = check_int(k, "k", minimum=3)
    n = check_int(n, "n", minimum=0)
    trials = check_int(trials, "trials", minimum=1)
    hollow_star_instance(k, epsilon, 1)
    learner = _resolve_learner(learner, generate_class("singletons", n_points=k))

    def one(trial):
        rng, lseed = _trial_streams(seed, trial)
        inst = hollow_star_instance(k, epsilon, int(rng.integers(1, k)))
        return _fit_and_score(learner, inst, n, rng, lseed, trial)

    return _summarize(_run_trials(one, trials, n_jobs), n, epsilon)


def hard_class_i_eps(d, k_w, epsilon):
    """Index of the group the hard distribution lives on."""
    return min(math.floor((d - 1) / (4 * epsilon)) + d - 1, k_w + d - 2)


def hard_class_instance(d, k_w, epsilon, J_star, concept_class=None):
    """Hard distribution on the ``(d, k_w)`` class for a given target set ``J_star``.

    Group ``i_eps`` points outside ``J_star`` get mass ``4 epsilon/(d-1)``;
    the remainder sits on the point ``(d-1, 1)``, which every hypothesis
    labels +1. The target is ``h_{i_eps, J_star}``.
    """
    d, k_w, epsilon = _check_hard(d, k_w, epsilon)
    i_eps = hard_class_i_eps(d, k_w, epsilon)
    J_star = tuple(sorted(int(j) for j in J_star))
    if len(J_star) != d - 1 or len(set(J_star)) != d - 1 or not all(1 <= j <= i_eps for j in J_star):
        raise ValidationError(f"J_star must be {d - 1} distinct values in 1..{i_eps}")
    cls = concept_class if concept_class is not None else generate_class("hard", d=d, k_w=k_w)
    points, hyps = hard_class_layout(d, k_w)
    where = {p: c for c, p in enumerate(points)}
    probs = np.zeros(len(points))
    mass = 4 * epsilon / (d - 1)
    for j in range(1, i_eps + 1):
        if j not in J_star:
            probs[where[(i_eps, j)]] = mass
    probs[where[(d - 1, 1)]] += 1.0 - probs.sum()
    target = hyps.index((i_eps, J_star))
    return PacInstance(DiscreteDistribution(np.arange(len(points)), probs), target, cls)


def _check_hard(d, k_w, epsilon):
    d = check_int(d, "d", minimum=2)
    k_w = check_int(k_w, "k_w", minimum=2)
    if k_w < d + 1:
        raise ValidationError("the hard-class experiment needs k_w >= d + 1")
    epsilon = check_probability(epsilon, "epsilon")
    if epsilon > (d - 1) / 4:
        raise ValidationError(f"need epsilon <= (d-1)/4 so the hard group has negatives, got {epsilon}")
    return d, k_w, epsilon


def hard_class_experiment(d, k_w, epsilon, n, trials, seed=0, learner="erm", n_jobs=1):
    """Failure rate on the hard ``(d, k_w)`` instance with a random target set per trial."""
    d, k_w, epsilon = _check_hard(d, k_w, epsilon)
    n = check_int(n, "n", minimum=0)
    trials = check_int(trials, "trials", minimum=1)
    cls = generate_class("hard", d=d, k_w=k_w)
    learner = _resolve_learner(learner, cls)
    i_eps = hard_class_i_eps(d, k_w, epsilon)

    def one(trial):
        rng, lseed = _trial_streams(seed, trial)
        J = rng.choice(np.arange(1, i_eps + 1), size=d - 1, replace=False)
        inst = hard_class_instance(d, k_w, epsilon, J, cls)
        return _fit_and_score(learner, inst, n, rng, lseed, trial)

    return _summarize(_run_trials(one, trials, n_jobs), n, epsilon)


# -- coupon collector ------------------------------------------------------------


def coupon_lemma_bound(k, m):
    """``k (ln(k/m) - 1 - sqrt(2/m))``: draws below this rarely reach ``k - m`` distinct values."""
    return k * (math.log(k / m) - 1.0 - math.sqrt(2.0 / m))


@dataclass(frozen=True)
class CouponCollectorResult:
    k: int
    m: int
    trials: int
    median: float
    mean: float
    lemma_bound: float
    fraction_at_or_below_bound: float
    draws: np.ndarray = field(repr=False, compare=False)

    def to_dict(self):
        return {
            "k": self.k,
            "m": self.m,
            "trials": self.trials,
            "median": self.median,
            "mean": self.mean,
            "lemma_bound": self.lemma_bound,
            "fraction_at_or_below_bound": self.fraction_at_or_below_bound,
        }


def _collect(k, need, rng):
    seen = np.zeros(k, dtype=bool)
    distinct = draws = 0
    while distinct < need:
        batch = rng.integers(0, k, size=max(need - distinct, 16))
        for x in batch:
            draws += 1
            if not seen[x]:
                seen[x] = True
                distinct += 1
                if distinct == need:
                    break
    return draws


def coupon_collector(k, m, trials, seed=0):
    """Number of uniform draws from ``k`` values until ``k - m`` distinct ones are seen."""
    k = check_int(k, "k", minimum=1)
    m = check_int(m, "m", minimum=1)
    trials = check_int(trials, "trials", minimum=1)
    if m > k:
        raise ValidationError(f"need m <= k, got m={m}, k={k}")
    draws = np.array(
        [_collect(k, k - m, np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(t,)))) for t in range(trials)]
    )
    bound = coupon_lemma_bound(k, m)
    return CouponCollectorResult(
        k=k,
        m=m,
        trials=trials,
        median=float(np.median(draws)),
        mean=float(draws.mean()),
        lemma_bound=bound,
        fraction_at_or_below_bound=float(np.mean(draws <= bound)),
        draws=draws,
    )


# -- SVM benchmark ---------------------------------------------------------------


@dataclass(frozen=True)
class SvmBenchResult:
    """Exact-error exceedances of the stable-compression bound for the hard-margin SVM."""

    dimension: int
    m: int
    delta: float
    bound: float
    trials: int
    exceedances: int
    exceed_fraction: float
    wilson_95_interval: tuple
    redraws: int
    error_quantiles: dict
    errors: np.ndarray = field(repr=False, compare=False)

    def to_dict(self):
        lo, hi = self.wilson_95_interval
        return {
            "dimension": self.dimension,
            "m": self.m,
            "delta": self.delta,
            "bound": self.bound,
            "trials": self.trials,
            "exceedances": self.exceedances,
            "exceed_fraction": self.exceed_fraction,
            "wilson_lo": lo,
            "wilson_hi": hi,
            "redraws": self.redraws,
            "error_quantiles": {str(q): v for q, v in self.error_quantiles.items()},
        }


def random_halfspace_instance(dimension, support_size, rng, max_redraws=1000):
    """Uniform masses on random points of the unit cube, labeled by a random halfspace.

    Targets labeling every support point alike are redrawn. Returns the
    instance and the number of redraws.
    """
    for redraws in range(max_redraws):
        pts = rng.random((support_size, dimension))
        w = rng.normal(size=dimension)
        w /= np.linalg.norm(w)
        v = float(w @ rng.random(dimension))
        target = HalfspaceHypothesis(w, v)
        labels = target.predict(pts)
        if np.all(labels > 0) or np.all(labels < 0):
            continue
        probs = np.full(support_size, 1.0 / support_size)
        probs[-1] = 1.0 - probs[:-1].sum()
        return PacInstance(DiscreteDistribution(pts, probs), target), redraws
    raise RuntimeError("could not draw a two-class halfspace instance")


def svm_bench(dimension, m, delta, trials, seed=0, support_size=1000, n_jobs=1):
    """Fraction of trials whose exact SVM error reaches the size-``(n+1)`` compression bound.

    Returns
    -------
    SvmBenchResult
    """
    dimension = check_int(dimension, "dimension", minimum=1)
    support_size = check_int(support_size, "support_size", minimum=2)
    trials = check_int(trials, "trials", minimum=1)
    bound = generalization_bound(dimension + 1, m, delta)

    def one(trial):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))
        inst, redraws = random_halfspace_instance(dimension, support_size, rng)
        pos = inst.distribution.draw(m, rng)
        sol = hard_margin_svm(inst.distribution.support[pos], inst.labels(pos))
        return true_error(sol.hypothesis, inst), redraws

    out = _run_trials(one, trials, n_jobs)
    errors = np.array([e for e, _ in out])
    k = int(np.sum(errors >= bound))
    return SvmBenchResult(
        dimension=dimension,
        m=int(m),
        delta=float(delta),
        bound=bound,
        trials=trials,
        exceedances=k,
        exceed_fraction=k / trials,
        wilson_95_interval=wilson_interval(k, trials),
        redraws=int(sum(r for _, r in out)),
        error_quantiles={q: float(np.quantile(errors, q)) for q in QUANTILES},
        errors=errors,
    )


# -- compression suites ----------------------------------------------------------


@dataclass(frozen=True)
class CompressionSuiteResult:
    scheme: str
    trials: int
    declared_size: int
    validity_failures: int
    stability_failures: int
    max_kappa_size: int

    @property
    def validity_pass(self):
        return self.validity_failures == 0

    @property
    def stability_pass(self):
        return self.stability_failures == 0

    def to_dict(self):
        return {
            "scheme": self.scheme,
            "trials": self.trials,
            "declared_size": self.declared_size,
            "validity_pass": self.validity_pass,
            "stability_pass": self.stability_pass,
            "validity_failures": self.validity_failures,
            "stability_failures": self.stability_failures,
            "max_kappa_size": self.max_kappa_size,
        }


def _scheme_for(name, n_points=10, grid=8, dimension=2):
    if name == "singleton":
        # one spare point at the end so every negative has a successor
        return SingletonCompression(generate_class("singletons", n_points=n_points + 1))
    if name == "closure":
        return ClosureCompression(generate_class("intervals", grid=grid, include_empty=True))
    if name == "svm":
        return SupportVectorCompression()
    raise ValidationError(f"unknown scheme {name!r}; expected singleton, closure or svm")


def random_scheme_sample(name, scheme, rng, max_size=10, dimension=2):
    """A random realizable sample for the named scheme's host class.

    Finite schemes draw points with replacement and label them by a random
    class member; for ``singleton`` the spare last point is never drawn.
    The SVM sample draws from a small pool of cube points, so repeats occur,
    and labels them by a random halfspace.
    """
    size = int(rng.integers(1, max_size + 1))
    if name in ("singleton", "closure"):
        cls = scheme.concept_class
        usable = cls.n_points - 1 if name == "singleton" else cls.n_points
        target = int(rng.integers(cls.n_hypotheses))
        pts = rng.integers(0, usable, size=size)
        return LabeledSample(pts, cls.matrix[target, pts])
    pool = rng.random((max(size, 2) + 2, dimension))
    pts = pool[rng.integers(0, len(pool), size=size)]
    w = rng.normal(size=dimension)
    target = HalfspaceHypothesis(w / np.linalg.norm(w), float(w @ rng.random(dimension) / np.linalg.norm(w)))
    return LabeledSample(pts, target.predict(pts))


def compression_suite(name, trials, seed=0, max_size=10, n_points=10, grid=8, dimension=2, n_jobs=1):
    """Run validity and stability checks of one scheme on random realizable samples."""
    trials = check_int(trials, "trials", minimum=1)
    scheme = _scheme_for(name, n_points=n_points, grid=grid, dimension=dimension)
    declared = dimension + 1 if name == "svm" else scheme.declared_size()

    def one(trial):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))
        sample = random_scheme_sample(name, scheme, rng, max_size=max_size, dimension=dimension)
        size = len(scheme.compress(sample))
        return check_validity(scheme, sample), check_stability(scheme, sample), size

    out = _run_trials(one, trials, n_jobs)
    return CompressionSuiteResult(
        scheme=name,
        trials=trials,
        declared_size=declared,
        validity_failures=sum(not v for v, _, _ in out),
        stability_failures=sum(not s for _, s, _ in out),
        max_kappa_size=max(k for _, _, k in out),
    )
