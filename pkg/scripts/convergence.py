"""Per-sweep captured scatter of selected EMPs during SO-MPCA-RS training.

    python scripts/convergence.py --input faces.ten --n-train 1 --emps 2,5
"""
import argparse
import sys

from sompca import io as sio
from sompca.evaluation import data_synth, split_indices
from sompca.trainer import TrainConfig, train
from sompca.tvp import Variant


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--input")
    ap.add_argument("--n-train", type=int, default=None)
    ap.add_argument("--emps", default="2,5", help="1-based EMP indices to report")
    ap.add_argument("--iters", type=int, default=20)
    ap.add_argument("--algo", default="so-mpca-rs", choices=[v.value for v in Variant])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    data = (sio.load_dataset(args.input) if args.input
            else data_synth(20, 8, (16, 12), seed=args.seed, mean_rank=3))
    if args.n_train:
        idx, _ = split_indices(data.labels, args.n_train, args.seed, 0)
        data = data.subset(idx)
    wanted = [int(p) for p in args.emps.split(",")]
    _, trace = train(data, TrainConfig(Variant(args.algo), max(wanted), n_iter=args.iters))
    print("p,sweep,scatter")
    for p in wanted:
        for k, s in enumerate(trace.sweeps[p - 1], 1):
            print(f"{p},{k},{s!r}")
        if not trace.sweeps[p - 1]:
            print(f"EMP {p} is fixed (relaxed start); no sweeps", file=sys.stderr)


if __name__ == "__main__":
    main()
