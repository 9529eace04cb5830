"""Semi-orthogonal multilinear PCA (SO-MPCA) with relaxed start.

Unsupervised feature extraction from tensors by tensor-to-vector
projection, with the orthogonality constraint imposed in a single mode.
"""
from .errors import FeasibilityError, FeatureBoundError, MalformedFileError, ShapeError
from .evaluation import (
    EvalReport,
    LabeledDataset,
    data_synth,
    nn_classify,
    recognition_rate,
    run_gallery_probe,
    run_split_protocol,
    variance_report,
)
from .spectral import (
    Projector,
    apply_projector,
    constrained_dominant_eigvec,
    dominant_eigvec,
    scatter_matrix,
    scatter_value,
)
from .tensor_core import as_tensor, n_mode_product
from .trainer import (
    TrainConfig,
    TrainTrace,
    max_features,
    select_nu,
    sort_features_by_scatter,
    train,
    uniform_emp,
)
from .tvp import Emp, TvpModel, Variant, emp_project, partial_projection, tvp_project

__version__ = "0.1.0"
