"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``[PASS]`` or ``[FAIL]`` line (visible with or
without ``-s``) before asserting, so ``pytest tests/test_acceptance.py``
doubles as a readable report.
"""

import math

import numpy as np
import pytest

from hellylab import LabeledSample, generate_class
from hellylab.compression import block_family
from hellylab.learners import algorithm_A, algorithm_A_erm
from hellylab.parameters import (
    CERTIFIED,
    REFUTED,
    dual_helly_number,
    hollow_star_number,
    max_hollow_star,
    projection_check,
    star_number,
    vc_dimension,
)
from hellylab.simulation import compression_suite, coupon_collector, hollow_star_experiment, svm_bench
from hellylab.svm import brute_force_hard_margin, hard_margin_svm


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
        assert ok, detail

    return emit


def test_criterion_1_known_examples(report):
    checks = {}
    ints = generate_class("intervals", grid=8, include_empty=True)
    checks["intervals"] = (vc_dimension(ints), hollow_star_number(ints), dual_helly_number(ints)) == (2, 3, 3)
    sing = generate_class("singletons", N=8)
    checks["singletons"] = hollow_star_number(sing) == dual_helly_number(sing) == 8
    aug = generate_class("singletons", N=8, augment_all_negative=True)
    checks["singletons+neg"] = dual_helly_number(aug) == 2
    thr = generate_class("thresholds", grid=8, augment_all_negative=True)
    checks["thresholds+neg"] = (
        dual_helly_number(thr) == 2 and projection_check(thr, 2, multiset_budget=500).status == CERTIFIED
    )
    pts = np.array([[0.0, 0.0], [6.0, 0.0], [0.0, 6.0], [2.0, 2.0], [7.1, 3.3], [-1.7, 4.6], [3.9, -2.4]])
    half = generate_class("halfspace_dichotomies", points=pts)
    checks["halfspaces R^2"] = (vc_dimension(half), hollow_star_number(half), dual_helly_number(half)) == (3, 4, 4)
    report(1, all(checks.values()), ", ".join(f"{k}={'ok' if v else 'WRONG'}" for k, v in checks.items()))


def test_criterion_2_equality_suite(report):
    rng = np.random.default_rng(2024)
    bad = []
    n_classes = 60
    for i in range(n_classes):
        n = int(rng.integers(2, 9))
        k = int(rng.integers(3, min(16, 2**n) + 1))
        cls = generate_class("random", n_points=n, n_hypotheses=k, seed=int(rng.integers(2**31)))
        k_o, k_w, star = hollow_star_number(cls), dual_helly_number(cls), star_number(cls)
        ok = k_o == k_w and k_o - 1 <= star
        ok &= projection_check(cls, k_w, multiset_budget=200, seed=i).status != REFUTED
        if k_o >= 3:
            hs = max_hollow_star(cls)
            below = projection_check(cls, k_o - 1, multiset_budget=0, hollow_star=hs)
            ok &= below.status == REFUTED and below.witness == tuple(hs.witnesses)
        if not ok:
            bad.append(i)
    report(2, not bad, f"{n_classes} random classes, failures at {bad}")


def test_criterion_3_hard_classes(report):
    got = {}
    for d, k_w in [(1, 4), (2, 4), (2, 5), (3, 6)]:
        cls = generate_class("hard", d=d, k_w=k_w)
        cap = dict(max_points=max(cls.n_points, 27), max_hypotheses=max(cls.n_hypotheses, 64))
        got[(d, k_w)] = (vc_dimension(cls, **cap), dual_helly_number(cls, **cap))
    ok = all(v == k for k, v in got.items())
    report(3, ok, "  ".join(f"hard{k}: vc={v[0]} k_w={v[1]}" for k, v in got.items()))


LEARNER_CLASSES = [
    (generate_class("thresholds", grid=8), 2),
    (generate_class("intervals", grid=6), 3),
    (generate_class("singletons", N=6, augment_all_negative=True), 2),
    (generate_class("singletons", N=5), 5),
    (generate_class("hard", d=2, k_w=4), 4),
]


def test_criterion_4_learner_invariants(report):
    bad_a = bad_erm = 0
    runs = 1000
    for seed in range(runs):
        rng = np.random.default_rng(seed)
        cls, k = LEARNER_CLASSES[seed % len(LEARNER_CLASSES)]
        target = cls.matrix[rng.integers(cls.n_hypotheses)]
        n_s, n_t = int(rng.integers(0, 13)), int(rng.integers(0, 5))
        pts = rng.integers(0, cls.n_points, size=n_s + n_t)
        S = LabeledSample(pts[:n_s], target[pts[:n_s]])
        T = LabeledSample(pts[n_s:], target[pts[n_s:]])
        h = algorithm_A(cls, S, T, k, seed=seed)
        ok = 0 <= h < cls.n_hypotheses and np.all(cls.matrix[h, T.points] == T.labels)
        ok &= algorithm_A(cls, S, T, k, seed=seed) == h
        bad_a += not ok
        g = algorithm_A_erm(cls, S, k)
        ok = 0 <= g < cls.n_hypotheses and np.all(cls.matrix[g, S.points] == S.labels)
        ok &= algorithm_A_erm(cls, S, k) == g
        bad_erm += not ok
    report(4, bad_a == 0 and bad_erm == 0, f"{runs} runs each: A failures={bad_a}, A_ERM failures={bad_erm}")


def test_criterion_5_compression_suites(report):
    parts = []
    ok = True
    for name, size in [("singleton", 1), ("closure", 2), ("svm", 3)]:
        res = compression_suite(name, 1000, seed=5, dimension=2)
        good = res.validity_pass and res.stability_pass and res.max_kappa_size <= size == res.declared_size
        ok &= good
        parts.append(f"{name}: valid={res.validity_pass} stable={res.stability_pass} max|k|={res.max_kappa_size}<={size}")
    report(5, ok, "; ".join(parts))


def test_criterion_6_block_family(report):
    bad = []
    checked = 0
    for l in range(1, 5):
        for m in range(max(4, 2 * l), 41):
            bf = block_family(m, l)
            checked += 1
            ok = bf.size_property_holds() and bf.cover_property_holds()
            ok &= len(bf.family) == math.comb(2 * l, l) and bf.T_m == l * (m // (2 * l))
            if not ok:
                bad.append((m, l))
    report(6, not bad, f"{checked} (m, l) pairs, failures {bad}")


def test_criterion_7_svm_benchmark(report):
    res = svm_bench(2, 300, 0.05, 2000, seed=0)
    lo, hi = res.wilson_95_interval
    ok = abs(res.bound - 0.048671) <= 1e-6 and hi <= 0.05
    report(7, ok, f"bound={res.bound:.7f} exceed={res.exceed_fraction:.4f} wilson_hi={hi:.4f} redraws={res.redraws}")


def test_criterion_8_hollow_star_floor(report):
    threshold = (1 / 8) * ((1 - 1 / 32) / (1 / 32)) * math.log(30)
    res = hollow_star_experiment(32, 1 / 32, 13, 2000, seed=0, learner="erm")
    ok = 13 < threshold and res.failure_rate >= 0.15
    report(8, ok, f"n=13 < {threshold:.2f}, failure rate {res.failure_rate:.4f} (floor 0.15)")


def test_criterion_9_coupon_collector(report):
    res = coupon_collector(100, 10, 4000, seed=0)
    ok = res.median >= 85.537 and abs(res.lemma_bound - 85.537) < 1e-3
    report(9, ok, f"median={res.median} lemma_bound={res.lemma_bound:.4f}")


def test_criterion_10_svm_certification(report):
    rng = np.random.default_rng(10)
    worst = 0.0
    bad = 0
    done = 0
    while done < 200:
        dim = 2 + done % 2
        n = int(rng.integers(2, 9))
        w = rng.normal(size=dim)
        w /= np.linalg.norm(w)
        X = rng.random((n, dim))
        v = float(w @ rng.random(dim))
        y = np.where(X @ w - v >= 0, 1, -1)
        if len(set(y.tolist())) < 2 or np.min(np.abs(X @ w - v)) < 1e-3:
            continue
        done += 1
        sol = hard_margin_svm(X, y)
        ref = brute_force_hard_margin(X, y)
        rel = abs(sol.margin - ref.margin) / ref.margin
        worst = max(worst, rel)
        ok = rel <= 1e-6
        for i in set(range(n)) - set(sol.support_indices):
            keep = [j for j in range(n) if j != i]
            sub = hard_margin_svm(X[keep], y[keep])
            ok &= sub.hypothesis.close_to(sol.hypothesis, 1e-6)
            ok &= abs(sub.margin - sol.margin) <= 1e-6 * sol.margin
        bad += not ok
    report(10, bad == 0, f"200 instances, failures={bad}, worst relative margin gap {worst:.2e}")
