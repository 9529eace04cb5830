"""Command-line interface.

Exit codes: 0 success, 2 usage error or feature bound exceeded, 3 malformed
input file, 4 shape mismatch between model and data.
"""
import argparse
import csv
import sys
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from . import io as sio
from .errors import FeatureBoundError, MalformedFileError, ShapeError
from .evaluation import data_synth, run_gallery_probe, run_split_protocol, variance_report
from .trainer import TrainConfig, sort_features_by_scatter, train
from .tvp import Variant, batch_tvp_project

EXIT_USAGE = 2
EXIT_MALFORMED = 3
EXIT_SHAPE = 4


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _int_list(s):
    try:
        vals = [int(v) for v in s.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from None
    if not vals or any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError(f"expected positive integers, got {s!r}")
    return vals


def _dims(s):
    try:
        dims = tuple(int(v) for v in s.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed dims {s!r}, expected e.g. 10x8x6") from None
    if not dims or any(d < 1 for d in dims):
        raise argparse.ArgumentTypeError(f"malformed dims {s!r}, expected e.g. 10x8x6")
    return dims


def _auto_int(s):
    if s == "auto":
        return None
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or an integer, got {s!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s!r}")
    return v


def _algos(s):
    try:
        return [Variant(a.strip().lower()) for a in s.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"unknown algorithm in {s!r}; choose from {[v.value for v in Variant]}") from None


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _load_dataset(path):
    try:
        return sio.load_dataset(path)
    except FileNotFoundError:
        raise CliError(f"no such file: {path}", EXIT_MALFORMED) from None


def _load_model(path):
    try:
        return sio.load_model(path)
    except FileNotFoundError:
        raise CliError(f"no such file: {path}", EXIT_MALFORMED) from None


def _fmt(x):
    return repr(float(x))


def cmd_train(args):
    data = _load_dataset(args.input)
    nu = None if args.nu is None else args.nu - 1
    cfg = TrainConfig(Variant(args.algo), args.features, args.iters, nu, epsilon=args.epsilon)
    model, trace = train(data, cfg)
    sio.save_model(args.out, model)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["p", "sweep", "scatter"])
    for p, hist in enumerate(trace.sweeps, 1):
        for k, s in enumerate(hist, 1):
            w.writerow([p, k, _fmt(s)])
    for p, s in enumerate(trace.final, 1):
        w.writerow([p, "final", _fmt(s)])


def cmd_project(args):
    model = _load_model(args.model)
    data = _load_dataset(args.input)
    feats = batch_tvp_project(data.samples, model)[:, sort_features_by_scatter(model)]
    with _output(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"f{i}" for i in range(1, feats.shape[1] + 1)] + ["label"])
        for row, label in zip(feats, data.labels):
            w.writerow([_fmt(v) for v in row] + [int(label)])


def _pct(x):
    return "-" if x is None else f"{100.0 * x:.2f}"


def cmd_eval(args):
    gallery_mode = args.train is not None or args.test is not None
    split_mode = args.data is not None or args.splits is not None
    if gallery_mode == split_mode:
        raise CliError("use exactly one of --train/--test or --data/--splits", EXIT_USAGE)
    if gallery_mode and (args.train is None or args.test is None):
        raise CliError("gallery-probe mode needs both --train and --test", EXIT_USAGE)
    if split_mode and (args.data is None or args.splits is None):
        raise CliError("split mode needs both --data and --splits", EXIT_USAGE)

    rows = []
    if gallery_mode:
        gallery = _load_dataset(args.train)
        probes = [(Path(p).stem, _load_dataset(p)) for p in args.test]
        for algo in args.algo:
            cfg = TrainConfig(algo, n_iter=args.iters)
            for name, probe in probes:
                rep = run_gallery_probe(gallery, probe, cfg, args.features, args.ranks)
                rows += [(algo.value, name, P, r, _pct(m), _pct(s)) for P, r, m, s in rep.rows()]
    else:
        data = _load_dataset(args.data)
        for algo in args.algo:
            cfg = TrainConfig(algo, n_iter=args.iters)
            for L in args.splits:
                try:
                    rep = run_split_protocol(data, cfg, L, args.reps, args.features, args.ranks,
                                             args.seed)
                except ValueError as exc:
                    if isinstance(exc, (ShapeError, FeatureBoundError)):
                        raise
                    raise CliError(str(exc), EXIT_USAGE) from None
                rows += [(algo.value, L, P, r, _pct(m), _pct(s)) for P, r, m, s in rep.rows()]
    with _output(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["algo", "L_or_probe", "P", "rank", "mean_rate_percent", "std_percent"])
        w.writerows(rows)


def cmd_variance(args):
    model = _load_model(args.model)
    data = _load_dataset(args.input)
    rep = variance_report(model, data)
    rank = np.empty_like(rep.order)
    rank[rep.order] = np.arange(1, rep.order.shape[0] + 1)
    with _output(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["feature_index", "scatter_unsorted", "rank_sorted", "scatter_sorted"])
        for i in range(rep.unsorted.shape[0]):
            w.writerow([i + 1, _fmt(rep.unsorted[i]), int(rank[i]), _fmt(rep.sorted[i])])


def cmd_synth(args):
    data = data_synth(args.classes, args.per_class, args.dims, args.sep, args.noise, args.seed)
    sio.save_dataset(args.out, data)


def cmd_convert(args):
    try:
        data = sio.dataset_from_csv_dir(args.input)
    except FileNotFoundError:
        raise CliError(f"no such directory: {args.input}", EXIT_MALFORMED) from None
    sio.save_dataset(args.out, data)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sompca", description="Semi-orthogonal multilinear PCA feature extraction")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a model, print the per-sweep scatter trace")
    p.add_argument("--input", required=True)
    p.add_argument("--algo", default="so-mpca-rs", choices=[v.value for v in Variant])
    p.add_argument("--features", type=_auto_int, default=None, help="P or 'auto'")
    p.add_argument("--iters", type=int, default=20)
    p.add_argument("--nu", type=_auto_int, default=None, help="1-based mode or 'auto'")
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("project", help="project samples, features sorted by scatter")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("eval", help="nearest-neighbour recognition experiments")
    p.add_argument("--train", help="gallery file (gallery-probe mode)")
    p.add_argument("--test", nargs="+", help="probe file(s) (gallery-probe mode)")
    p.add_argument("--data", help="dataset file (split mode)")
    p.add_argument("--splits", type=_int_list, help="samples per class L, e.g. 1,2,3")
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--algo", type=_algos, default=[Variant.SO_MPCA_RS],
                   help="comma-separated algorithms")
    p.add_argument("--features", type=_int_list, default=[1, 5, 10, 20, 50, 80])
    p.add_argument("--ranks", type=_int_list, default=[1])
    p.add_argument("--iters", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("variance", help="per-feature captured scatter, unsorted and sorted")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_variance)

    p = sub.add_parser("synth", help="write a synthetic Gaussian-cluster dataset")
    p.add_argument("--classes", type=int, required=True)
    p.add_argument("--per-class", type=int, required=True)
    p.add_argument("--dims", type=_dims, required=True, help="e.g. 10x8x6")
    p.add_argument("--sep", type=float, default=10.0)
    p.add_argument("--noise", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("convert", help="directory of <label>/*.csv matrices to a dataset file")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except FeatureBoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MalformedFileError as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except ShapeError as exc:
        print(f"error: shape mismatch: {exc}", file=sys.stderr)
        return EXIT_SHAPE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
