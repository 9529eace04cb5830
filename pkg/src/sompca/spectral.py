"""Scatter matrices, deflation projectors and dominant-eigenvector solves.

The constrained solve maximizes ``u' S u`` over unit vectors orthogonal to a
set of previously accepted vectors. Its stationarity condition is the
non-symmetric eigenproblem ``G S u = lam u`` with ``G = I - sum_q u_q u_q'``.
We solve it through the symmetric matrix ``G S G``: any eigenvector of
``G S G`` with non-zero eigenvalue lies in range(G) and therefore satisfies
``G S u = lam u`` as well.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import FeasibilityError, ShapeError

# Top eigenvalue at or below this fraction of trace(S) counts as zero scatter.
ZERO_SCATTER_RTOL = 1e-12


def scatter_matrix(samples):
    """Total scatter matrix ``sum_m (y_m - mean)(y_m - mean)'`` (no 1/M factor).

    Args:
        samples (array-like): shape (M, d), one sample per row.

    Returns:
        np.ndarray: symmetric (d, d) matrix.
    """
    Y = np.asarray(samples, dtype=np.float64)
    if Y.ndim == 1:
        Y = Y[:, None]
    if Y.ndim != 2:
        raise ShapeError(f"samples must be a 2-D array, got shape {Y.shape}")
    if Y.shape[0] < 1:
        raise ValueError("scatter of an empty sample set is undefined")
    Yc = Y - Y.mean(axis=0)
    S = Yc.T @ Yc
    return 0.5 * (S + S.T)


def scatter_value(samples, direction=None):
    """Total scatter ``sum_m (y_m - mean)^2`` of scalar projections.

    With `direction` given, `samples` are vectors (M, d) projected onto it
    first, so the result equals ``u' scatter_matrix(samples) u``.
    """
    y = np.asarray(samples, dtype=np.float64)
    if direction is not None:
        u = np.asarray(direction, dtype=np.float64)
        if y.ndim != 2 or y.shape[1] != u.shape[0]:
            raise ShapeError(f"samples {y.shape} incompatible with direction {u.shape}")
        y = y @ u
    y = y.reshape(-1)
    if y.size < 1:
        raise ValueError("scatter of an empty sample set is undefined")
    d = y - y.mean()
    return float(d @ d)


@dataclass
class Projector:
    """Orthogonal-complement projector ``I - sum_q u_q u_q'`` kept as its basis.

    The basis is stored as rows of a (k, dim) array and is never expanded to
    a dense dim x dim matrix unless `matrix` is called.
    """

    dim: int
    basis: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.basis is None:
            self.basis = np.zeros((0, self.dim))
        self.basis = np.asarray(self.basis, dtype=np.float64).reshape(-1, self.dim)

    @property
    def rank(self):
        return self.basis.shape[0]

    def add(self, u):
        u = np.asarray(u, dtype=np.float64)
        if u.shape != (self.dim,):
            raise ShapeError(f"basis vector of shape {u.shape} for a projector of dim {self.dim}")
        self.basis = np.vstack([self.basis, u[None, :]])

    def matrix(self):
        return np.eye(self.dim) - self.basis.T @ self.basis


def apply_projector(g, v):
    """Return ``(I - B'B) v`` for the projector basis B; `v` may be (dim,) or (dim, k)."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape[0] != g.dim:
        raise ShapeError(f"vector of length {v.shape[0]} for a projector of dim {g.dim}")
    if g.rank == 0:
        return v.copy()
    return v - g.basis.T @ (g.basis @ v)


def fix_sign(u):
    """Flip `u` so its largest-magnitude entry (lowest index on ties) is positive.

    Magnitudes within a relative 1e-9 of the maximum count as ties, so
    rounding noise in the last bits cannot change the chosen index.
    """
    a = np.abs(u)
    i = int(np.flatnonzero(a >= a.max() * (1.0 - 1e-9))[0])
    return -u if u[i] < 0 else u


def dominant_eigvec(s):
    """Unit eigenvector of the largest eigenvalue of symmetric `s`.

    Returns:
        tuple: (u, lam) with lam >= 0. For a zero (or numerically zero)
        matrix the first canonical basis vector is returned with lam = 0.
    """
    return constrained_dominant_eigvec(s, Projector(np.asarray(s).shape[0]))


def _fallback_direction(g):
    # First canonical vector with a usable component in range(G).
    # One exists: sum_i |G e_i|^2 = trace(G) = dim - rank >= 1.
    for i in range(g.dim):
        e = np.zeros(g.dim)
        e[i] = 1.0
        v = apply_projector(g, e)
        nrm = np.linalg.norm(v)
        if nrm > 1e-6:
            return v / nrm
    raise FeasibilityError("projector has no range")  # unreachable for rank < dim


def constrained_dominant_eigvec(s, g):
    """Maximize ``u' s u`` over unit `u` orthogonal to every basis vector of `g`.

    Args:
        s (np.ndarray): symmetric PSD (d, d) scatter matrix.
        g (Projector): deflation projector of dimension d.

    Returns:
        tuple: (u, lam) where ``G s u = lam u`` and ``lam = u' s u``.
    """
    S = np.asarray(s, dtype=np.float64)
    d = S.shape[0]
    if S.shape != (d, d):
        raise ShapeError(f"scatter matrix must be square, got {S.shape}")
    if g.dim != d:
        raise ShapeError(f"projector of dim {g.dim} for a {d}x{d} scatter matrix")
    if g.rank >= d:
        raise FeasibilityError(
            f"no unit vector is orthogonal to {g.rank} basis vectors in dimension {d}"
        )
    trace = float(np.trace(S))
    if g.rank:
        GS = apply_projector(g, S)
        A = apply_projector(g, GS.T)
        A = 0.5 * (A + A.T)
    else:
        A = S
    w, V = np.linalg.eigh(A)
    top = float(w[-1])
    if trace <= 0.0 or top <= ZERO_SCATTER_RTOL * trace:
        u = _fallback_direction(g)
        return fix_sign(u), 0.0
    # re-project to keep exact orthogonality over many deflation steps
    u = apply_projector(g, V[:, -1])
    u = fix_sign(u / np.linalg.norm(u))
    lam = float(u @ S @ u)
    return u, max(lam, 0.0)
