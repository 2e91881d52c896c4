"""Model families: the re-uploading PQC, a dense network and the hybrid regressor."""
from .checkpoint import load_checkpoint, model_arrays, model_from_arrays, save_checkpoint
from .dense import DenseCache, DenseGrads, DenseNet, dense_backward, dense_forward
from .hybrid import HybridModel, hybrid_backward, hybrid_forward, vqc_expect_y, vqc_jacobian
from .pqc import (
    PqcModel,
    pqc_forward,
    pqc_forward_batch,
    pqc_jacobian,
    pqc_predict,
    sign_labels,
)

__all__ = [
    "DenseCache",
    "DenseGrads",
    "DenseNet",
    "HybridModel",
    "PqcModel",
    "dense_backward",
    "dense_forward",
    "hybrid_backward",
    "hybrid_forward",
    "load_checkpoint",
    "model_arrays",
    "model_from_arrays",
    "pqc_forward",
    "pqc_forward_batch",
    "pqc_jacobian",
    "pqc_predict",
    "save_checkpoint",
    "sign_labels",
    "vqc_expect_y",
    "vqc_jacobian",
]
