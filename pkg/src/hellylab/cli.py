"""Command-line front end.

Results go to ``--out`` or standard output as JSON (or CSV where a command
produces rows). Every result file gets a ``<out>.manifest.json`` sidecar
recording the command line, seed, version, input digests and duration.
Errors are printed to standard error as JSON carrying a machine-readable
code; the exit status is 2 for invalid input and 3 for violated
preconditions such as an unrealizable sample.
"""

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .compression import generalization_bound
from .concept_class import ConceptClass, LabeledSample, generate_class
from .exceptions import HellyLabError, ValidationError
from .learners import algorithm_A, algorithm_A_erm, erm, resolve_k
from .parameters import compute_parameters
from .simulation import (
    DiscreteDistribution,
    ExperimentConfig,
    PacInstance,
    coupon_collector,
    compression_suite,
    hard_class_experiment,
    hollow_star_experiment,
    make_learner,
    run_pac,
    svm_bench,
)
from .svm import hard_margin_svm

SEED_ENV = "HELLYLAB_SEED"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(json.dumps({"code": "VALIDATION_ERROR", "message": message}) + "\n")
        sys.exit(2)


def _clean(value):
    """Round floats to 12 significant digits; non-finite floats become strings."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return _clean(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return "inf" if value > 0 else ("-inf" if value < 0 else "nan")
        return float(f"{value:.12g}")
    return value


def _fmt(value):
    value = _clean(value)
    return repr(value) if isinstance(value, float) else str(value)


def _to_json(obj):
    return json.dumps(_clean(obj), indent=2) + "\n"


def _to_csv(rows, columns):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def _digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _seed(args):
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        seed = int(env)
    except ValueError:
        raise ValidationError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    if seed < 0:
        raise ValidationError(f"{SEED_ENV} must be nonnegative")
    return seed


def _load_json(path, what):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {what} file {path!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{what} file {path!r} is not valid JSON: {exc}") from None


def _load_class(path):
    return ConceptClass.from_dict(_load_json(path, "class"))


def _parse_k(text):
    if text == "auto":
        return "auto"
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("k must be 'auto' or an integer") from None


def _read_points_csv(path):
    """Rows of ``n`` coordinates followed by a label; a header row is skipped."""
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise ValidationError(f"cannot read points file {path!r}: {exc.strerror}") from None
    if not rows:
        raise ValidationError("the points file is empty")
    try:
        [float(c) for c in rows[0]]
    except ValueError:
        rows = rows[1:]
    try:
        data = np.array([[float(c) for c in r] for r in rows])
    except ValueError as exc:
        raise ValidationError(f"non-numeric value in points file: {exc}") from None
    if data.ndim != 2 or data.shape[1] < 2:
        raise ValidationError("each row needs at least one coordinate and a label")
    return data[:, :-1], data[:, -1]


# -- subcommands -----------------------------------------------------------------


def cmd_gen_class(args):
    params = {}
    kind = args.kind
    if kind == "singletons":
        params = {"n_points": _require(args.n, "--n"), "augment_all_negative": args.augment_all_negative}
    elif kind == "thresholds":
        params = {"grid": _require(args.grid, "--grid"), "augment_all_negative": args.augment_all_negative}
    elif kind == "intervals":
        params = {"grid": _require(args.grid, "--grid"), "include_empty": not args.no_empty}
    elif kind == "hard":
        params = {"d": _require(args.d, "--d"), "k_w": _require(args.k_w, "--k-w")}
    elif kind == "halfspace_dichotomies":
        path = _require(args.points, "--points")
        try:
            pts = np.loadtxt(path, delimiter=",", ndmin=2)
        except OSError as exc:
            raise ValidationError(f"cannot read points file {path!r}: {exc}") from None
        except ValueError as exc:
            raise ValidationError(f"bad points file {path!r}: {exc}") from None
        params = {"points": pts}
    elif kind == "random":
        params = {
            "n_points": _require(args.n, "--n"),
            "n_hypotheses": _require(args.n_hypotheses, "--n-hypotheses"),
            "seed": _seed(args),
        }
    return generate_class(kind, **params).to_dict(), [args.points] if args.points else []


def _require(value, flag):
    if value is None:
        raise ValidationError(f"{flag} is required for this class family")
    return value


def cmd_params(args):
    cls = _load_class(args.class_file)
    report = compute_parameters(
        cls,
        max_points=args.cap,
        star_cap=args.star_cap,
        max_hypotheses=args.max_hypotheses,
        multiset_budget=args.budget,
        seed=_seed(args),
    )
    return report.to_dict(), [args.class_file]


def cmd_learn(args):
    cls = _load_class(args.class_file)
    sample = LabeledSample.from_dict(_load_json(args.sample, "sample"))
    if sample.is_geometric or (len(sample) and sample.points.max() >= cls.n_points):
        raise ValidationError("sample points must be domain indices of the class")
    if args.algo == "erm":
        index, k = erm(cls, sample), None
    else:
        k = resolve_k(cls, args.k)
        if args.algo == "A":
            index = algorithm_A(cls, sample, None, k, seed=_seed(args))
        else:
            index = algorithm_A_erm(cls, sample, k)
    out = {"algo": args.algo, "k": k, "index": index, "predictions": cls.matrix[index].tolist()}
    return out, [args.class_file, args.sample]


def cmd_compress_check(args):
    res = compression_suite(
        args.scheme,
        args.trials,
        seed=_seed(args),
        max_size=args.max_size,
        n_points=args.n_points,
        grid=args.grid,
        dimension=args.dimension,
        n_jobs=args.threads,
    )
    return res.to_dict(), []


def cmd_svm_solve(args):
    X, y = _read_points_csv(args.points)
    return hard_margin_svm(X, y).to_dict(), [args.points]


def cmd_svm_bench(args):
    res = svm_bench(
        args.dimension,
        args.m,
        args.delta,
        args.trials,
        seed=_seed(args),
        support_size=args.support_size,
        n_jobs=args.threads,
    )
    return res.to_dict(), []


_ROW_COLUMNS = ["n", "failure_rate", "wilson_lo", "wilson_hi"]


def _rows(results):
    return [r.to_dict() for r in results]


def cmd_simulate_pac(args):
    cfg = _load_json(args.config, "config")
    try:
        cls = ConceptClass.from_dict(cfg["class"]) if isinstance(cfg["class"], dict) else _load_class(cfg["class"])
        target = int(cfg["target"])
        epsilon, delta = float(cfg["epsilon"]), float(cfg["delta"])
        sizes = cfg["n"] if isinstance(cfg["n"], list) else [cfg["n"]]
        trials = int(cfg.get("trials", 1000))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad simulation config: {exc!r}") from None
    support = np.asarray(cfg.get("support", list(range(cls.n_points))), dtype=np.int64)
    probs = cfg.get("probabilities")
    if probs is None:
        probs = np.full(len(support), 1.0 / len(support))
    instance = PacInstance(DiscreteDistribution(support, probs), target, cls)
    learner = make_learner(cfg.get("learner", "erm"), cls, cfg.get("k", "auto"))
    seed = int(cfg["seed"]) if "seed" in cfg else _seed(args)
    results = [
        run_pac(learner, instance, ExperimentConfig(epsilon, delta, int(n), trials, seed), n_jobs=args.threads)
        for n in sizes
    ]
    return _rows(results), [args.config]


def cmd_simulate_lower_bound(args):
    results = [
        hollow_star_experiment(args.k, args.epsilon, n, args.trials, seed=_seed(args),
                               learner=args.learner, n_jobs=args.threads)
        for n in args.n
    ]
    return _rows(results), []


def cmd_simulate_hard_class(args):
    results = [
        hard_class_experiment(args.d, args.k_w, args.epsilon, n, args.trials, seed=_seed(args),
                              learner=args.learner, n_jobs=args.threads)
        for n in args.n
    ]
    return _rows(results), []


def cmd_simulate_coupon(args):
    return coupon_collector(args.k, args.m, args.trials, seed=_seed(args)).to_dict(), []


def cmd_bound(args):
    return {"l": args.l, "m": args.m, "delta": args.delta, "bound": generalization_bound(args.l, args.m, args.delta)}, []


# -- parser ----------------------------------------------------------------------


def _common(p, seed=True, out=True):
    if seed:
        p.add_argument("--seed", type=int, default=None, help=f"master seed (default: ${SEED_ENV} or 0)")
    if out:
        p.add_argument("--out", default=None, help="output file (default: standard output)")
    p.add_argument("--threads", type=int, default=1, help="worker processes for Monte Carlo trials")


def _rows_format(p):
    p.add_argument("--format", choices=["json", "csv"], default="json")


def build_parser():
    parser = _Parser(prog="hellylab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hellylab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen-class", help="generate a named class family as JSON")
    p.add_argument("kind", choices=["singletons", "thresholds", "intervals", "hard", "halfspace_dichotomies", "random"])
    p.add_argument("--n", type=int, help="number of points (singletons, random)")
    p.add_argument("--grid", type=int, help="grid size 1..G (thresholds, intervals)")
    p.add_argument("--augment-all-negative", action="store_true")
    p.add_argument("--no-empty", action="store_true", help="intervals without the empty interval")
    p.add_argument("--d", type=int)
    p.add_argument("--k-w", type=int)
    p.add_argument("--points", help="CSV of coordinates (halfspace_dichotomies)")
    p.add_argument("--n-hypotheses", type=int)
    _common(p)
    p.set_defaults(func=cmd_gen_class)

    p = sub.add_parser("params", help="compute VC, star, hollow star and dual Helly numbers")
    p.add_argument("--class", dest="class_file", required=True)
    p.add_argument("--cap", type=int, default=20, help="maximum domain size for exhaustive search")
    p.add_argument("--star-cap", type=int, default=12)
    p.add_argument("--max-hypotheses", type=int, default=64)
    p.add_argument("--budget", type=int, default=200, help="random multisets for the projection check")
    _common(p)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("learn", help="run a proper learner on a sample")
    p.add_argument("--algo", choices=["A", "A_ERM", "erm"], required=True)
    p.add_argument("--class", dest="class_file", required=True)
    p.add_argument("--sample", required=True)
    p.add_argument("--k", type=_parse_k, default="auto")
    _common(p)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("compress", help="compression scheme checks")
    csub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = csub.add_parser("check", help="validity and stability on random realizable samples")
    c.add_argument("--scheme", choices=["svm", "singleton", "closure"], required=True)
    c.add_argument("--trials", type=int, default=1000)
    c.add_argument("--max-size", type=int, default=10)
    c.add_argument("--n-points", type=int, default=10, help="singleton domain size")
    c.add_argument("--grid", type=int, default=8, help="interval grid size")
    c.add_argument("--dimension", type=int, default=2, help="SVM dimension")
    _common(c)
    c.set_defaults(func=cmd_compress_check)

    p = sub.add_parser("svm", help="hard-margin SVM")
    ssub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    s = ssub.add_parser("solve", help="solve from a CSV of coordinates and labels")
    s.add_argument("--points", required=True)
    _common(s, seed=False)
    s.set_defaults(func=cmd_svm_solve)
    _svm_bench_args(ssub.add_parser("bench", help="exact-error check of the compression bound"))

    p = sub.add_parser("simulate", help="Monte Carlo experiments")
    msub = p.add_subparsers(dest="experiment", required=True, parser_class=_Parser)
    m = msub.add_parser("pac", help="failure rates on a finite-class instance from a JSON config")
    m.add_argument("--config", required=True)
    _rows_format(m)
    _common(m)
    m.set_defaults(func=cmd_simulate_pac, rows=True)

    m = msub.add_parser("lower-bound", help="hollow-star lower-bound instance on singletons")
    m.add_argument("--k", type=int, required=True)
    m.add_argument("--epsilon", type=float, required=True)
    m.add_argument("--n", type=int, nargs="+", required=True)
    m.add_argument("--trials", type=int, default=2000)
    m.add_argument("--learner", choices=["erm", "A", "A_ERM", "oracle"], default="erm")
    _rows_format(m)
    _common(m)
    m.set_defaults(func=cmd_simulate_lower_bound, rows=True)

    m = msub.add_parser("hard-class", help="hard (d, k_w) class instance")
    m.add_argument("--d", type=int, required=True)
    m.add_argument("--k-w", type=int, required=True)
    m.add_argument("--epsilon", type=float, required=True)
    m.add_argument("--n", type=int, nargs="+", required=True)
    m.add_argument("--trials", type=int, default=2000)
    m.add_argument("--learner", choices=["erm", "A", "A_ERM", "oracle"], default="erm")
    _rows_format(m)
    _common(m)
    m.set_defaults(func=cmd_simulate_hard_class, rows=True)

    m = msub.add_parser("coupon", help="coupon-collector draws versus the lemma bound")
    m.add_argument("--k", type=int, required=True)
    m.add_argument("--m", type=int, required=True)
    m.add_argument("--trials", type=int, default=4000)
    _common(m)
    m.set_defaults(func=cmd_simulate_coupon)

    _svm_bench_args(msub.add_parser("svm-bench", help="same as `svm bench`"))

    p = sub.add_parser("bound", help="evaluate the stable-compression generalization bound")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    _common(p, seed=False)
    p.set_defaults(func=cmd_bound)
    return parser


def _svm_bench_args(b):
    b.add_argument("--dimension", type=int, default=2)
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--delta", type=float, default=0.05)
    b.add_argument("--trials", type=int, default=2000)
    b.add_argument("--support-size", type=int, default=1000)
    _common(b)
    b.set_defaults(func=cmd_svm_bench)


def _render(result, args):
    if getattr(args, "rows", False) and getattr(args, "format", "json") == "csv":
        return _to_csv(result, _ROW_COLUMNS)
    return _to_json(result)


def main(argv=None):
    """Run the command line; returns the exit status."""
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        if args.threads < 1:
            raise ValidationError("--threads must be >= 1")
        result, inputs = args.func(args)
        text = _render(result, args)
        if args.out:
            with open(args.out, "w", newline="") as fh:
                fh.write(text)
            manifest = {
                "command_line": ["hellylab", *argv],
                "seed": _seed(args) if hasattr(args, "seed") else None,
                "version": __version__,
                "input_digests": {path: _digest(path) for path in inputs},
                "wall_clock_seconds": round(time.perf_counter() - start, 3),
            }
            with open(args.out + ".manifest.json", "w") as fh:
                fh.write(json.dumps(manifest, indent=2) + "\n")
        else:
            sys.stdout.write(text)
    except HellyLabError as exc:
        sys.stderr.write(json.dumps(_clean(exc.to_dict())) + "\n")
        return exc.exit_status
    return 0


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
