"""Elementary multilinear projections (EMPs) and tensor-to-vector projection."""
import enum
from dataclasses import dataclass, field
from math import prod

import numpy as np

from .errors import ShapeError
from .tensor_core import check_shape, n_mode_product


class Variant(str, enum.Enum):
    """Training variants. The value is the CLI spelling."""

    SO_MPCA_RS = "so-mpca-rs"
    SO_MPCA = "so-mpca"
    FO_MPCA = "fo-mpca"
    PCA = "pca"

    @property
    def label(self):
        return {"so-mpca-rs": "SO-MPCA-RS", "so-mpca": "SO-MPCA",
                "fo-mpca": "FO-MPCA", "pca": "PCA"}[self.value]


@dataclass(frozen=True)
class Emp:
    """One unit vector per mode plus the total scatter it captured on training data."""

    vectors: tuple
    scatter: float = 0.0

    def __post_init__(self):
        vecs = []
        for v in self.vectors:
            v = np.array(v, dtype=np.float64)
            if v.ndim != 1:
                raise ShapeError("EMP vectors must be one-dimensional")
            v.flags.writeable = False
            vecs.append(v)
        object.__setattr__(self, "vectors", tuple(vecs))
        object.__setattr__(self, "scatter", float(self.scatter))

    @property
    def shape(self):
        return tuple(v.shape[0] for v in self.vectors)


@dataclass(frozen=True)
class TvpModel:
    """An ordered set of EMPs with training metadata.

    Attributes:
        shape: shape the EMP vectors act on. For the PCA variant this is the
            flattened sample, ``(prod(sample_shape),)``.
        emps: tuple of `Emp`.
        nu: 0-based constrained mode, ``None`` for PCA.
        variant: `Variant` used for training.
        iterations: number of ALS sweeps K.
        sample_shape: shape of the original samples.
    """

    shape: tuple
    emps: tuple
    nu: int | None
    variant: Variant
    iterations: int
    sample_shape: tuple = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "shape", check_shape(self.shape))
        object.__setattr__(self, "emps", tuple(self.emps))
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.sample_shape is None:
            object.__setattr__(self, "sample_shape", self.shape)
        else:
            object.__setattr__(self, "sample_shape", check_shape(self.sample_shape))
        if prod(self.sample_shape) != prod(self.shape):
            raise ShapeError(f"sample shape {self.sample_shape} incompatible with {self.shape}")
        for e in self.emps:
            if e.shape != self.shape:
                raise ShapeError(f"EMP of shape {e.shape} in a model of shape {self.shape}")

    @property
    def n_features(self):
        return len(self.emps)

    @property
    def scatters(self):
        return np.array([e.scatter for e in self.emps])

    def mode_matrix(self, n):
        """Stack the mode-`n` vectors of all EMPs as rows, shape (P, I_n)."""
        return np.array([e.vectors[n] for e in self.emps]).reshape(len(self.emps), self.shape[n])


def _check_emp(shape, e):
    if e.shape != tuple(shape):
        raise ShapeError(f"EMP vectors of lengths {e.shape} do not match tensor shape {tuple(shape)}")


def emp_project(t, e):
    """Project tensor `t` to a scalar with EMP `e`, applying modes in ascending order."""
    t = np.asarray(t, dtype=np.float64)
    _check_emp(t.shape, e)
    for n, u in enumerate(e.vectors):
        t = n_mode_product(t, u, n)
    return float(t.reshape(-1)[0])


def partial_projection(t, e, n):
    """Project `t` by `e` in every mode except `n`; returns a length-I_n vector."""
    t = np.asarray(t, dtype=np.float64)
    _check_emp(t.shape, e)
    if not 0 <= n < t.ndim:
        raise ShapeError(f"mode {n} out of range for a tensor of order {t.ndim}")
    for j, u in enumerate(e.vectors):
        if j != n:
            t = n_mode_product(t, u, j)
    return t.reshape(-1)


def _sample_view(t, m):
    t = np.asarray(t, dtype=np.float64)
    if t.shape == m.shape:
        return t
    if m.variant is Variant.PCA and t.shape == m.sample_shape:
        return t.reshape(m.shape)
    raise ShapeError(f"tensor of shape {t.shape} does not match model shape {m.sample_shape}")


def tvp_project(t, m):
    """Project one tensor with every EMP of model `m`; returns a length-P vector."""
    t = _sample_view(t, m)
    return np.array([emp_project(t, e) for e in m.emps])


# Batched versions used by the trainer and evaluation. `X` holds M samples
# stacked along a leading axis. Contraction order matches the per-sample
# functions above (ascending modes).

def batch_partial_projections(X, vectors, n):
    """Partial projections of every sample in `X` (shape (M, I_1..I_N)) excluding mode `n`.

    Returns:
        np.ndarray: shape (M, I_n).
    """
    X = np.asarray(X, dtype=np.float64)
    N = X.ndim - 1
    if len(vectors) != N:
        raise ShapeError(f"{len(vectors)} vectors for tensors of order {N}")
    out = X
    axis = 1
    for j in range(N):
        if j == n:
            axis += 1
            continue
        u = vectors[j]
        if out.shape[axis] != u.shape[0]:
            raise ShapeError(f"mode {j}: vector length {u.shape[0]} != dimension {out.shape[axis]}")
        out = np.tensordot(out, u, axes=([axis], [0]))
    return out.reshape(X.shape[0], X.shape[n + 1])


def batch_emp_project(X, vectors):
    """Project every sample in `X` to a scalar; returns shape (M,)."""
    X = np.asarray(X, dtype=np.float64)
    out = X
    for j, u in enumerate(vectors):
        out = np.tensordot(out, u, axes=([1], [0]))
    return out.reshape(X.shape[0])


def batch_tvp_project(X, m):
    """Project a stack of samples with model `m`; returns shape (M, P)."""
    X = np.asarray(X, dtype=np.float64)
    if X.shape[1:] != m.shape:
        if m.variant is Variant.PCA and X.shape[1:] == m.sample_shape:
            X = X.reshape((X.shape[0],) + m.shape)
        else:
            raise ShapeError(f"samples of shape {X.shape[1:]} do not match model shape {m.sample_shape}")
    if not m.emps:
        return np.zeros((X.shape[0], 0))
    return np.stack([batch_emp_project(X, e.vectors) for e in m.emps], axis=1)
