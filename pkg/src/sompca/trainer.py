"""Successive, conditional (ALS) training of semi-orthogonal multilinear PCA.

EMPs are derived one at a time. Within an EMP each mode vector is the
dominant eigenvector of the scatter of the partial projections, conditioned
on the other modes; in constrained modes the solve is deflated against the
vectors already accepted in that mode.
"""
import logging
from dataclasses import dataclass, field
from math import prod

import numpy as np

from . import spectral
from .errors import FeatureBoundError, ShapeError
from .tensor_core import check_shape
from .tvp import Emp, TvpModel, Variant, batch_emp_project, batch_partial_projections

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    """Training settings.

    Attributes:
        variant: algorithm variant.
        n_features: number of EMPs P; ``None`` means the variant's maximum.
        n_iter: ALS sweeps K per EMP.
        nu: 0-based constrained mode for SO variants; ``None`` selects the
            largest mode.
        seed: reserved for data synthesis; training is deterministic.
        epsilon: stop an EMP early once the relative scatter gain of a sweep
            falls below this value; 0 disables early stopping.
    """

    variant: Variant = Variant.SO_MPCA_RS
    n_features: int | None = None
    n_iter: int = 20
    nu: int | None = None
    seed: int = 0
    epsilon: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.n_iter < 1:
            raise ValueError(f"n_iter must be a positive integer, got {self.n_iter}")
        if self.n_features is not None and self.n_features < 1:
            raise ValueError(f"n_features must be positive, got {self.n_features}")
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")


@dataclass(frozen=True)
class ConstrainedSolve:
    """Diagnostics of one deflated eigen-solve (0-based p and mode, 1-based sweep)."""

    p: int
    sweep: int
    mode: int
    eigenvalue: float
    residual: float  # |G S u - lam u|
    criterion_gap: float  # |lam - u' S u|


@dataclass
class TrainTrace:
    """Scatter after every completed sweep, per EMP.

    ``sweeps[p]`` is empty for an EMP that is fixed rather than optimized.
    """

    sweeps: list = field(default_factory=list)
    final: list = field(default_factory=list)
    constrained: list = field(default_factory=list)


def select_nu(shape):
    """Index of the largest mode; the first one on ties."""
    return int(np.argmax(check_shape(shape)))


def max_features(shape, variant, n_samples=None, nu=None):
    """Maximum number of EMPs `variant` can extract for samples of `shape`."""
    shape = check_shape(shape)
    variant = Variant(variant)
    if variant is Variant.FO_MPCA:
        return min(shape)
    if variant is Variant.PCA:
        d = prod(shape)
        return d if n_samples is None else min(d, n_samples - 1)
    return shape[select_nu(shape) if nu is None else nu]


def uniform_emp(shape):
    """EMP with every mode vector equal to the normalized all-ones vector."""
    return Emp(tuple(np.full(d, 1.0 / np.sqrt(d)) for d in check_shape(shape)))


def _stack_samples(data):
    samples = getattr(data, "samples", data)
    if isinstance(samples, np.ndarray):
        X = np.asarray(samples, dtype=np.float64)
    else:
        samples = [np.asarray(s, dtype=np.float64) for s in samples]
        shapes = {s.shape for s in samples}
        if len(shapes) > 1:
            raise ShapeError(f"samples have heterogeneous shapes {sorted(shapes)}")
        X = np.stack(samples) if samples else np.zeros((0, 1))
    if X.ndim < 2:
        raise ShapeError("expected a stack of samples with a leading sample axis")
    return X


def _successive(X, n_features, constrained_modes, relaxed_start, n_iter, epsilon, trace):
    """Derive `n_features` EMPs from samples `X` of shape (M, I_1..I_N)."""
    shape = X.shape[1:]
    N = len(shape)
    projectors = {n: spectral.Projector(shape[n]) for n in constrained_modes}
    emps = []

    if relaxed_start:
        first = uniform_emp(shape)
        s = spectral.scatter_value(batch_emp_project(X, first.vectors))
        first = Emp(first.vectors, s)
        emps.append(first)
        trace.sweeps.append([])
        trace.final.append(s)
        for n in constrained_modes:
            projectors[n].add(first.vectors[n])

    # Scatter matrices of first-order data do not depend on the EMP.
    fixed_scatter = spectral.scatter_matrix(X) if N == 1 else None

    for p in range(len(emps), n_features):
        vectors = list(uniform_emp(shape).vectors)
        history = []
        for k in range(1, n_iter + 1):
            lam = 0.0
            for n in range(N):
                if fixed_scatter is not None:
                    S = fixed_scatter
                else:
                    S = spectral.scatter_matrix(batch_partial_projections(X, vectors, n))
                if n in projectors:
                    g = projectors[n]
                    u, lam = spectral.constrained_dominant_eigvec(S, g)
                    Su = S @ u
                    trace.constrained.append(ConstrainedSolve(
                        p, k, n, lam,
                        float(np.linalg.norm(spectral.apply_projector(g, Su) - lam * u)),
                        abs(lam - float(u @ Su)),
                    ))
                else:
                    u, lam = spectral.dominant_eigvec(S)
                vectors[n] = u
            history.append(lam)
            if N == 1:
                break  # further sweeps reproduce the same solve
            if epsilon > 0 and k >= 2:
                prev = history[-2]
                if lam - prev <= epsilon * max(abs(prev), np.finfo(float).tiny):
                    break
        # lam of the last mode solved equals the scatter of the finished EMP
        emps.append(Emp(tuple(vectors), lam))
        trace.sweeps.append(history)
        trace.final.append(lam)
        for n in constrained_modes:
            projectors[n].add(vectors[n])
        logger.debug("EMP %d: scatter %.6g after %d sweeps", p + 1, lam, len(history))
    return emps


def train(data, cfg=None):
    """Train a TVP model.

    Args:
        data: a `LabeledDataset`, or an array/sequence of M same-shape tensors.
        cfg (TrainConfig): training settings; defaults to SO-MPCA-RS with
            the maximum number of features and 20 sweeps.

    Returns:
        tuple: (TvpModel, TrainTrace)
    """
    cfg = cfg or TrainConfig()
    X = _stack_samples(data)
    M = X.shape[0]
    sample_shape = check_shape(X.shape[1:])
    variant = cfg.variant
    if cfg.nu is not None and not 0 <= cfg.nu < len(sample_shape):
        raise ShapeError(f"nu={cfg.nu} out of range for tensors of order {len(sample_shape)}")
    bound = max_features(sample_shape, variant, M if variant is Variant.PCA else None, cfg.nu)
    P = bound if cfg.n_features is None else cfg.n_features
    if P > bound:
        raise FeatureBoundError(P, bound, variant.label)
    if M < 2:
        raise ValueError(f"training needs at least 2 samples, got {M}")
    if not np.all(np.isfinite(X)):
        raise ValueError("samples contain non-finite values")

    trace = TrainTrace()
    if variant is Variant.PCA:
        emps = _train_pca(X, P, trace)
        model = TvpModel((prod(sample_shape),), emps, None, variant, cfg.n_iter, sample_shape)
        return model, trace

    if variant is Variant.FO_MPCA:
        nu = None
        constrained = tuple(range(len(sample_shape)))
    else:
        nu = select_nu(sample_shape) if cfg.nu is None else cfg.nu
        constrained = (nu,)
    emps = _successive(X, P, constrained, variant is Variant.SO_MPCA_RS, cfg.n_iter,
                       cfg.epsilon, trace)
    return TvpModel(sample_shape, emps, nu, variant, cfg.n_iter), trace


def _train_pca(X, P, trace):
    Y = X.reshape(X.shape[0], -1)
    M, D = Y.shape
    if D <= M:
        emps = _successive(Y, P, (0,), False, 1, 0.0, trace)
        return emps
    # The scatter lives in the span of the centered samples; solve there.
    Q, _ = np.linalg.qr((Y - Y.mean(axis=0)).T)
    reduced = _successive(Y @ Q, P, (0,), False, 1, 0.0, trace)
    emps = []
    for e in reduced:
        u = Q @ e.vectors[0]
        u = spectral.fix_sign(u / np.linalg.norm(u))
        emps.append(Emp((u,), e.scatter))
    return emps


def sort_features_by_scatter(model):
    """Indices of the model's EMPs by descending scatter (stable on ties)."""
    s = np.array([e.scatter for e in model.emps])
    return np.argsort(-s, kind="stable")
