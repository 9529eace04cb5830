"""Dataset and model files.

Dataset file (little-endian)::

    b"TEN1" | N: u8 | I_1..I_N: u32 | M: u32 | labels: M x i32 (-1 = unlabeled)
    | payload: M * prod(I) x f64, samples consecutive, row-major

Model file: JSON; floats are written with ``repr`` so they round-trip exactly.
"""
import json
import os
import struct
from pathlib import Path

import numpy as np

from .errors import MalformedFileError
from .evaluation import LabeledDataset
from .tvp import Emp, TvpModel, Variant

MAGIC = b"TEN1"
MODEL_FORMAT = "sompca-model"
MODEL_VERSION = 1


def dataset_to_bytes(data):
    X = np.asarray(data.samples, dtype="<f8")
    shape = X.shape[1:]
    if not 1 <= len(shape) <= 255:
        raise ValueError(f"tensor order {len(shape)} not representable")
    head = MAGIC + struct.pack("<B", len(shape)) + struct.pack(f"<{len(shape)}I", *shape)
    head += struct.pack("<I", X.shape[0])
    labels = np.asarray(data.labels, dtype="<i4")
    return head + labels.tobytes() + np.ascontiguousarray(X).tobytes()


def dataset_from_bytes(buf):
    try:
        if buf[:4] != MAGIC:
            raise MalformedFileError("bad magic, expected TEN1")
        (N,) = struct.unpack_from("<B", buf, 4)
        if N < 1:
            raise MalformedFileError("tensor order must be >= 1")
        dims = struct.unpack_from(f"<{N}I", buf, 5)
        (M,) = struct.unpack_from("<I", buf, 5 + 4 * N)
    except struct.error as exc:
        raise MalformedFileError(f"truncated header: {exc}") from None
    if any(d < 1 for d in dims):
        raise MalformedFileError(f"dimensions must be >= 1, got {dims}")
    off = 9 + 4 * N
    size = int(np.prod(dims, dtype=np.int64))
    expected = off + 4 * M + 8 * M * size
    if len(buf) != expected:
        raise MalformedFileError(f"file length {len(buf)} != {expected} implied by header")
    labels = np.frombuffer(buf, dtype="<i4", count=M, offset=off).astype(np.int64)
    X = np.frombuffer(buf, dtype="<f8", count=M * size, offset=off + 4 * M)
    return LabeledDataset(X.astype(np.float64).reshape((M,) + tuple(dims)), labels)


def save_dataset(path, data):
    Path(path).write_bytes(dataset_to_bytes(data))


def load_dataset(path):
    return dataset_from_bytes(Path(path).read_bytes())


def model_to_dict(model):
    return {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "variant": model.variant.value,
        "shape": list(model.shape),
        "sample_shape": list(model.sample_shape),
        # 1-based mode; 0 when no single mode is constrained
        "nu": 0 if model.nu is None else model.nu + 1,
        "iterations": model.iterations,
        "emps": [
            {"scatter": e.scatter, "vectors": [v.tolist() for v in e.vectors]}
            for e in model.emps
        ],
    }


def model_from_dict(d):
    try:
        if d.get("format") != MODEL_FORMAT:
            raise MalformedFileError(f"not a model file (format={d.get('format')!r})")
        if d.get("version") != MODEL_VERSION:
            raise MalformedFileError(f"unsupported model version {d.get('version')!r}")
        emps = [Emp(tuple(np.array(v, dtype=np.float64) for v in e["vectors"]), e["scatter"])
                for e in d["emps"]]
        nu = int(d["nu"])
        return TvpModel(tuple(d["shape"]), emps, None if nu == 0 else nu - 1,
                        Variant(d["variant"]), int(d["iterations"]), tuple(d["sample_shape"]))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, MalformedFileError):
            raise
        raise MalformedFileError(f"invalid model file: {exc}") from None


def model_to_json(model):
    return json.dumps(model_to_dict(model), indent=1) + "\n"


def save_model(path, model):
    Path(path).write_text(model_to_json(model))


def load_model(path):
    try:
        d = json.loads(Path(path).read_text())
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedFileError(f"model file is not JSON: {exc}") from None
    return model_from_dict(d)


def dataset_from_csv_dir(directory):
    """Build a dataset from ``<label>/<name>.csv`` matrices under `directory`.

    Each sub-directory name must be an integer class label; files are read
    in sorted order. Every CSV holds one 2-D sample.
    """
    directory = Path(directory)
    samples, labels = [], []
    for sub in sorted(p for p in directory.iterdir() if p.is_dir()):
        try:
            label = int(sub.name)
        except ValueError:
            raise MalformedFileError(f"class directory {sub.name!r} is not an integer label") from None
        for f in sorted(sub.glob("*.csv")):
            try:
                samples.append(np.loadtxt(f, delimiter=",", ndmin=2))
            except ValueError as exc:
                raise MalformedFileError(f"{f}: {exc}") from None
            labels.append(label)
    if not samples:
        raise MalformedFileError(f"no CSV samples under {os.fspath(directory)}")
    shapes = {s.shape for s in samples}
    if len(shapes) > 1:
        raise MalformedFileError(f"CSV samples have different shapes: {sorted(shapes)}")
    return LabeledDataset(np.stack(samples), np.array(labels))
