"""Captured variance per feature for PCA, FO-MPCA, SO-MPCA and SO-MPCA-RS.

Writes a long-format CSV (algo, feature, scatter_unsorted, scatter_sorted)
for plotting sorted and unsorted variance curves.

    python scripts/variance_study.py --input faces.ten --n-train 1 --out variance.csv
    python scripts/variance_study.py --out variance.csv          # synthetic data
"""
import argparse
import csv
import sys

import numpy as np

from sompca import io as sio
from sompca.evaluation import data_synth, split_indices, variance_report
from sompca.trainer import TrainConfig, max_features, train
from sompca.tvp import Variant


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--input", help="dataset file; synthetic data when omitted")
    ap.add_argument("--n-train", type=int, default=None,
                    help="train on L samples per class (one random split)")
    ap.add_argument("--features", type=int, default=80)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out")
    args = ap.parse_args(argv)

    data = (sio.load_dataset(args.input) if args.input
            else data_synth(20, 8, (16, 12), seed=args.seed, mean_rank=3))
    if args.n_train:
        idx, _ = split_indices(data.labels, args.n_train, args.seed, 0)
        data = data.subset(idx)

    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["algo", "feature", "scatter_unsorted", "scatter_sorted"])
    for variant in (Variant.PCA, Variant.FO_MPCA, Variant.SO_MPCA, Variant.SO_MPCA_RS):
        bound = max_features(data.shape, variant, len(data))
        model, _ = train(data, TrainConfig(variant, min(args.features, bound)))
        rep = variance_report(model, data)
        for i in range(rep.unsorted.shape[0]):
            w.writerow([variant.value, i + 1, repr(rep.unsorted[i]), repr(rep.sorted[i])])
        print(f"{variant.label:>10}: {model.n_features:3d} features, total scatter "
              f"{np.sum(rep.unsorted):.6g}", file=sys.stderr)
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
