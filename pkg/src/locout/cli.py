"""Command-line front end: ``locout {score,simulate,evaluate,bench,profile}``.

Data go to files or standard output; every diagnostic goes to standard
error. Exit status is 0 on success, 1 on usage or validation errors and 2 on
numerical failures.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
import warnings
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from locout.data import DataMatrix, TiesPolicy, load_csv, validate
from locout.errors import DegenerateCoreError, LocOutError, ParameterError
from locout.evaluation import KNN_GRID, METHODS, auc, profile, run_benchmark, write_report
from locout.neighborhood import NeighborhoodParams
from locout.projection import CdVariant
from locout.scoring import locout_scores
from locout.simulation import SimulationConfig, generate

logger = logging.getLogger("locout")


class UsageError(LocOutError):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _default_threads() -> int:
    env = os.environ.get("LOCOUT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def _params(args) -> NeighborhoodParams:
    return NeighborhoodParams(k=args.k, alpha=args.alpha)


def _add_locout_args(p: argparse.ArgumentParser, k: int = 20) -> None:
    p.add_argument("--k", type=int, default=k, help="number of nearest neighbours")
    p.add_argument("--alpha", type=float, default=0.5,
                   help="core proportion of the neighbours, in (0, 1]")
    p.add_argument("--cd-variant", choices=[v.value for v in CdVariant],
                   default=CdVariant.LITERAL.value)


def _add_sim_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--groups", type=_int_list, default=[150, 150, 100])
    p.add_argument("--p-inf", type=int, default=50)
    p.add_argument("--outlier-fraction", type=float, default=0.05)


def cmd_score(args) -> int:
    X, _ = load_csv(args.input, has_header=args.header,
                    label_column=args.label_column, drop_columns=args.drop)
    X = validate(X, TiesPolicy(mode=args.ties))
    report = locout_scores(X, _params(args), args.cd_variant,
                           threads=args.threads, zero_scale=args.zero_scale)
    with _output(args.output) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["row_id", "locout"])
        for rid, s in zip(X.row_labels(), report.locout):
            w.writerow([rid, _fmt(s)])
    return 0


def cmd_simulate(args) -> int:
    cfg = SimulationConfig(
        group_sizes=tuple(args.groups), p_inf=args.p_inf, p_noise=args.noise,
        outlier_fraction=args.outlier_fraction, distribution=args.setup,
        seed=args.seed,
    )
    data = generate(cfg)
    print("provenance:", data.provenance_line(), file=sys.stderr)
    with _output(args.output) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(data.X.col_labels()) + ["label", "group"])
        for row, lab, g in zip(data.X.values, data.labels, data.group_ids):
            w.writerow([_fmt(v) for v in row] + [int(lab), int(g)])
    return 0


def _split_spec(spec: str, default_col: str) -> tuple[str, str]:
    path, sep, col = spec.rpartition(":")
    if sep and path and not Path(spec).exists():
        return path, col
    return spec, default_col


def _read_column(path: str, column: str) -> np.ndarray:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise UsageError(f"{path}: empty file")
    header = [c.strip() for c in rows[0]]
    if column not in header:
        raise UsageError(
            f"{path}: no column {column!r} (have {', '.join(header[:10])}); "
            "pass FILE:COLUMN to choose one"
        )
    j = header.index(column)
    try:
        return np.array([float(r[j]) for r in rows[1:]])
    except (ValueError, IndexError) as exc:
        raise UsageError(f"{path}: bad value in column {column!r}: {exc}") from None


def cmd_evaluate(args) -> int:
    spath, scol = _split_spec(args.scores, "locout")
    lpath, lcol = _split_spec(args.labels, "label")
    scores = _read_column(spath, scol)
    labels = _read_column(lpath, lcol)
    if len(scores) != len(labels):
        raise UsageError(f"{len(scores)} scores but {len(labels)} labels")
    if not np.all(np.isin(labels, (0, 1))):
        raise UsageError("labels must be 0 (inlier) or 1 (outlier)")
    print(auc(scores, labels.astype(int)).auc)
    return 0


def cmd_bench(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    setups = [s.strip() for s in args.setups.split(",") if s.strip()]
    configs = [
        SimulationConfig(group_sizes=tuple(args.groups), p_inf=args.p_inf,
                         p_noise=pn, outlier_fraction=args.outlier_fraction,
                         distribution=setup)
        for setup in setups for pn in args.noise
    ]
    rows = run_benchmark(configs, _params(args), methods, args.reps,
                         master_seed=args.seed, variant=args.cd_variant,
                         knn_grid=args.knn_grid, threads=args.threads)
    with _output(args.output) as fh:
        write_report(rows, fh)
    return 0


PROFILE_COLUMNS = ("n", "p", "k", "t_distances", "t_core_selection", "t_svd",
                   "t_cd", "t_od", "t_weights", "t_total")


def cmd_profile(args) -> int:
    params = _params(args)
    instances = []
    if args.input:
        X, _ = load_csv(args.input, has_header=args.header,
                        label_column=args.label_column, drop_columns=args.drop)
        instances.append(validate(X, TiesPolicy(mode=args.ties)))
    else:
        rng = np.random.default_rng(args.seed)
        for p in args.p:
            instances.append(DataMatrix(rng.standard_normal((args.n, p))))
    with _output(args.output) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PROFILE_COLUMNS)
        for X in instances:
            prof = profile(X, params, args.cd_variant, repeats=args.repeats)
            w.writerow([getattr(prof, c) if c in ("n", "p", "k") else f"{getattr(prof, c):.6f}"
                        for c in PROFILE_COLUMNS])
    return 0


def _add_input_args(p: argparse.ArgumentParser, required: bool) -> None:
    p.add_argument("--input", required=required, help="CSV file, one observation per row")
    p.add_argument("--header", action=argparse.BooleanOptionalAction, default=True,
                   help="first line holds column names (default: yes)")
    p.add_argument("--label-column", default=None,
                   help="label column to strip from the data")
    p.add_argument("--drop", type=lambda s: [c for c in s.split(",") if c], default=[],
                   help="comma-separated columns to ignore, e.g. group")
    p.add_argument("--ties", choices=("error", "jitter", "drop-duplicates"), default="error")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: $LOCOUT_THREADS or CPU count)")
    parser = argparse.ArgumentParser(
        prog="locout", description="Local-projection outlier scores (LocOut).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", parents=[common], help="LocOut score of every row of a CSV file")
    _add_input_args(p, required=True)
    _add_locout_args(p)
    p.add_argument("--zero-scale", choices=("error", "unit"), default="error",
                   help="columns constant inside a core: fail, or leave unscaled")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("simulate", parents=[common], help="draw a labeled benchmark dataset")
    p.add_argument("--setup", choices=("normal", "lognormal"), default="normal")
    p.add_argument("--noise", type=int, default=0, help="number of noise variables")
    _add_sim_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("evaluate", parents=[common], help="AUC of a score file against labels")
    p.add_argument("--scores", required=True, help="FILE[:COLUMN], column defaults to locout")
    p.add_argument("--labels", required=True, help="FILE[:COLUMN], column defaults to label")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bench", parents=[common], help="repeated simulation benchmark, long-format CSV")
    p.add_argument("--setups", default="normal", help="comma list of normal,lognormal")
    p.add_argument("--noise", type=_int_list, default=[0])
    _add_sim_args(p)
    _add_locout_args(p)
    p.add_argument("--methods", default=",".join(METHODS))
    p.add_argument("--knn-grid", type=_int_list, default=list(KNN_GRID))
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("profile", parents=[common], help="per-stage runtime of the LocOut pipeline")
    _add_input_args(p, required=False)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--p", type=_int_list, default=[500], help="comma list of dimensions")
    _add_locout_args(p, k=40)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_profile)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    warnings.simplefilter("default")
    if args.threads is None:
        args.threads = _default_threads()
    if args.threads < 1:
        print("locout: error: --threads must be >= 1", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except DegenerateCoreError as exc:
        where = f" (initiator {exc.initiator})" if exc.initiator is not None else ""
        print(f"locout: numerical failure{where}: {exc}", file=sys.stderr)
        return 2
    except np.linalg.LinAlgError as exc:
        print(f"locout: numerical failure: {exc}", file=sys.stderr)
        return 2
    except (LocOutError, ParameterError, OSError, ValueError) as exc:
        print(f"locout: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
