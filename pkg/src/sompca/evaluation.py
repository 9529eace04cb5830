"""Recognition experiments: nearest-neighbour ranking, rank-k rates, split protocol."""
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ShapeError
from .tensor_core import check_shape
from .trainer import TrainConfig, max_features, sort_features_by_scatter, train
from .tvp import Variant, batch_tvp_project


@dataclass(frozen=True)
class LabeledDataset:
    """M same-shape tensors stacked as ``samples`` (M, I_1..I_N) with integer labels."""

    samples: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.samples, dtype=np.float64)
        y = np.asarray(self.labels).astype(np.int64).reshape(-1)
        if X.ndim < 2:
            raise ShapeError("samples need a leading sample axis and at least one mode")
        if X.shape[0] != y.shape[0]:
            raise ValueError(f"{X.shape[0]} samples but {y.shape[0]} labels")
        object.__setattr__(self, "samples", X)
        object.__setattr__(self, "labels", y)

    @property
    def shape(self):
        return self.samples.shape[1:]

    def __len__(self):
        return self.samples.shape[0]

    def subset(self, idx):
        return LabeledDataset(self.samples[idx], self.labels[idx])


def nn_rank(train_feats, queries, k):
    """Indices of the `k` nearest training rows for each query, nearest first.

    Distances are exact squared Euclidean distances; ties go to the lower
    training index.

    Returns:
        np.ndarray: int array of shape (Q, k).
    """
    G = np.asarray(train_feats, dtype=np.float64)
    Qf = np.asarray(queries, dtype=np.float64)
    if G.ndim != 2 or G.shape[0] == 0:
        raise ValueError("gallery must be a non-empty (M, P) array")
    if Qf.ndim == 1:
        Qf = Qf[None, :]
    if Qf.shape[1] != G.shape[1]:
        raise ShapeError(f"query dimension {Qf.shape[1]} != gallery dimension {G.shape[1]}")
    if not 1 <= k <= G.shape[0]:
        raise ValueError(f"rank depth k={k} must be in [1, {G.shape[0]}]")
    out = np.empty((Qf.shape[0], k), dtype=np.int64)
    for i, q in enumerate(Qf):
        d = ((G - q) ** 2).sum(axis=1)
        out[i] = np.argsort(d, kind="stable")[:k]
    return out


def nn_classify(train_feats, train_labels, query, k=1):
    """Labels of the `k` nearest training samples to `query`, nearest first."""
    labels = np.asarray(train_labels)
    return labels[nn_rank(train_feats, query, k)[0]].tolist()


def recognition_rate(predictions, truths, rank=1):
    """Fraction of queries whose true label is among their first `rank` predictions."""
    truths = np.asarray(truths).reshape(-1)
    if len(predictions) != truths.shape[0]:
        raise ValueError(f"{len(predictions)} prediction lists for {truths.shape[0]} truths")
    if truths.shape[0] == 0:
        raise ValueError("no queries")
    hits = 0
    for pred, t in zip(predictions, truths):
        pred = list(pred)
        if rank > len(pred):
            raise ValueError(f"rank {rank} exceeds prediction depth {len(pred)}")
        hits += t in pred[:rank]
    return hits / truths.shape[0]


@dataclass
class EvalReport:
    """Recognition rates keyed by (P, rank).

    ``cells[(P, rank)]`` holds the per-repetition rates, or ``None`` when the
    variant cannot extract P features in some repetition.
    """

    variant: Variant
    n_features: list
    ranks: list
    cells: dict = field(default_factory=dict)

    def rates(self, P, rank):
        return self.cells[(P, rank)]

    def available(self, P, rank):
        return self.cells[(P, rank)] is not None

    def mean(self, P, rank):
        r = self.cells[(P, rank)]
        return None if r is None else float(np.mean(r))

    def std(self, P, rank):
        r = self.cells[(P, rank)]
        return None if r is None else float(np.std(r))

    def rows(self):
        """Yield (P, rank, mean, std) in P-major order; mean/std are None when unavailable."""
        for P in self.n_features:
            for r in self.ranks:
                yield P, r, self.mean(P, r), self.std(P, r)


def _rep_rng(seed, rep):
    # Independent PCG64 stream per (seed, repetition).
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, rep])))


def split_indices(labels, n_train, seed, rep):
    """Random split with `n_train` training samples per class.

    Classes are visited in ascending label order; each draws a permutation
    of its sample indices from the repetition's stream.

    Returns:
        tuple: (train_idx, test_idx) sorted index arrays.
    """
    labels = np.asarray(labels)
    rng = _rep_rng(seed, rep)
    train_idx = []
    for c in np.unique(labels):
        idx = np.flatnonzero(labels == c)
        if n_train >= idx.shape[0]:
            raise ValueError(
                f"class {c} has {idx.shape[0]} samples; need more than L={n_train}"
            )
        train_idx.append(idx[rng.permutation(idx.shape[0])[:n_train]])
    train_idx = np.sort(np.concatenate(train_idx))
    test_idx = np.setdiff1d(np.arange(labels.shape[0]), train_idx)
    return train_idx, test_idx


def evaluate_once(train_set, test_set, cfg, n_features, ranks):
    """Train on `train_set`, classify `test_set`; returns {(P, rank): rate or None}."""
    n_features = list(n_features)
    ranks = list(ranks)
    M = len(train_set)
    bound = max_features(train_set.shape, cfg.variant,
                         M if cfg.variant is Variant.PCA else None, cfg.nu)
    P_train = min(max(n_features), bound)
    model, _ = train(train_set, replace(cfg, n_features=P_train))
    order = sort_features_by_scatter(model)
    G = batch_tvp_project(train_set.samples, model)[:, order]
    T = batch_tvp_project(test_set.samples, model)[:, order]
    depth = min(max(ranks), M)
    out = {}
    for P in n_features:
        if P > P_train:
            for r in ranks:
                out[(P, r)] = None
            continue
        nbrs = nn_rank(G[:, :P], T[:, :P], depth)
        preds = train_set.labels[nbrs]
        for r in ranks:
            out[(P, r)] = recognition_rate(preds, test_set.labels, min(r, depth))
    return out


def _check_labels(data):
    if np.any(data.labels < 0):
        raise ValueError("evaluation needs labelled samples (labels >= 0)")


def run_split_protocol(data, cfg, n_train, reps=10, n_features=(1, 5, 10, 20, 50, 80),
                       ranks=(1,), seed=0):
    """Repeated random L-per-class splits; train, sort features by scatter, classify.

    Args:
        data (LabeledDataset): all samples.
        cfg (TrainConfig): training settings; ``n_features`` is overridden.
        n_train (int): training samples per class (L).
        reps (int): number of random splits.
        n_features: feature counts P to evaluate.
        ranks: rank depths to report.
        seed (int): seed of the split generator.

    Returns:
        EvalReport
    """
    _check_labels(data)
    if reps < 1:
        raise ValueError("reps must be >= 1")
    report = EvalReport(Variant(cfg.variant), list(n_features), list(ranks))
    per_rep = []
    for rep in range(reps):
        tr, te = split_indices(data.labels, n_train, seed, rep)
        per_rep.append(evaluate_once(data.subset(tr), data.subset(te), cfg, n_features, ranks))
    for key in per_rep[0]:
        vals = [r[key] for r in per_rep]
        report.cells[key] = None if any(v is None for v in vals) else vals
    return report


def run_gallery_probe(gallery, probe, cfg, n_features=(5, 10, 20, 32), ranks=(1, 5)):
    """Fixed gallery/probe evaluation: a single repetition, so std is 0."""
    _check_labels(gallery)
    _check_labels(probe)
    if gallery.shape != probe.shape:
        raise ShapeError(f"gallery shape {gallery.shape} != probe shape {probe.shape}")
    report = EvalReport(Variant(cfg.variant), list(n_features), list(ranks))
    for key, v in evaluate_once(gallery, probe, cfg, n_features, ranks).items():
        report.cells[key] = None if v is None else [v]
    return report


@dataclass(frozen=True)
class VarianceReport:
    """Per-feature scatter in trained order, the descending order, and sorted values."""

    unsorted: np.ndarray
    order: np.ndarray
    sorted: np.ndarray


def variance_report(model, data):
    """Recompute each EMP's total scatter on `data`."""
    X = np.asarray(getattr(data, "samples", data), dtype=np.float64)
    Y = batch_tvp_project(X, model)
    d = Y - Y.mean(axis=0)
    s = (d * d).sum(axis=0)
    order = np.argsort(-s, kind="stable")
    return VarianceReport(s, order, s[order])


def data_synth(n_classes, per_class, shape, class_separation=10.0, noise_sigma=1.0, seed=0,
               mean_rank=None):
    """Gaussian class clusters around random mean tensors.

    Class means have N(0, class_separation^2) entries: i.i.d. by default, or,
    with `mean_rank` = R, a sum of R random rank-1 (outer-product) tensors
    rescaled to the same entry variance, which gives image-like low
    multilinear rank structure. Samples add i.i.d. N(0, noise_sigma^2) noise.
    Labels are 0..C-1, grouped by class.
    """
    if n_classes < 1 or per_class < 1:
        raise ValueError("n_classes and per_class must be >= 1")
    try:
        shape = check_shape(shape)
    except ShapeError as exc:
        raise ValueError(str(exc)) from exc
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be non-negative")
    if mean_rank is not None and mean_rank < 1:
        raise ValueError("mean_rank must be >= 1")
    rng = np.random.default_rng(seed)
    if mean_rank is None:
        means = rng.standard_normal((n_classes,) + shape)
    else:
        means = np.zeros((n_classes,) + shape)
        for c in range(n_classes):
            for _ in range(mean_rank):
                term = np.ones(())
                for d in shape:
                    term = np.multiply.outer(term, rng.standard_normal(d))
                means[c] += term
        means /= np.sqrt(mean_rank)
    means *= class_separation
    noise = noise_sigma * rng.standard_normal((n_classes, per_class) + shape)
    X = (means[:, None] + noise).reshape((n_classes * per_class,) + shape)
    y = np.repeat(np.arange(n_classes), per_class)
    return LabeledDataset(X, y)
