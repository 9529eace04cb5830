"""Dense tensors and the n-mode (tensor-times-vector) product.

Tensors are plain ``numpy.ndarray`` objects in float64, C (row-major) order.
Modes are 0-based axis indices, as everywhere else in numpy.
"""
import numpy as np

from .errors import ShapeError


def as_tensor(x):
    """Return `x` as a read-only, C-contiguous float64 array of order >= 1.

    Args:
        x (array-like): tensor data.

    Returns:
        np.ndarray: validated tensor. A copy is made only when needed.
    """
    t = np.array(x, dtype=np.float64, order="C", copy=True)
    if t.ndim < 1:
        raise ShapeError("a tensor needs at least one mode, got a scalar")
    if any(d < 1 for d in t.shape):
        raise ShapeError(f"every mode dimension must be >= 1, got shape {t.shape}")
    t.flags.writeable = False
    return t


def check_shape(shape):
    """Validate a tensor shape and return it as a tuple of ints."""
    shape = tuple(int(d) for d in shape)
    if len(shape) < 1:
        raise ShapeError("shape must have at least one mode")
    if any(d < 1 for d in shape):
        raise ShapeError(f"every mode dimension must be >= 1, got {shape}")
    return shape


def n_mode_product(t, u, n):
    """Multiply tensor `t` by vector `u` along mode `n`.

    The contracted mode is kept with size 1, so the result has the shape of
    `t` with ``shape[n]`` replaced by 1 and successive products can be
    chained without reindexing.

    Args:
        t (np.ndarray): tensor of shape (I_1, ..., I_N).
        u (array-like): vector of length I_n.
        n (int): 0-based mode index.

    Returns:
        np.ndarray: tensor of shape (I_1, ..., 1, ..., I_N).
    """
    t = np.asarray(t, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    if not 0 <= n < t.ndim:
        raise ShapeError(f"mode {n} out of range for a tensor of order {t.ndim}")
    if u.ndim != 1 or u.shape[0] != t.shape[n]:
        raise ShapeError(
            f"mode {n}: vector of shape {u.shape} does not match dimension {t.shape[n]}"
        )
    return np.expand_dims(np.tensordot(t, u, axes=([n], [0])), n)
