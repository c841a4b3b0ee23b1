"""Input validation for the array-based estimator API."""
import numpy as np
from sklearn.utils.validation import check_array

from .model import ControllerGains, PlantParams, RenderTarget

PLANT_FEATURES = ("J", "b", "K")
GAIN_FEATURES = ("Pm", "Im", "Pt", "It")
FEATURES = PLANT_FEATURES + GAIN_FEATURES + ("Kd",)


def check_configurations(X, target):
    """Validate a configuration matrix.

    Rows are ``J, b, K, Pm, Im, Pt, It`` plus ``Kd`` for spring targets.
    Each row must satisfy the plant and gain invariants.
    """
    X = check_array(X, dtype=np.float64, ensure_all_finite=True)
    n_expected = len(FEATURES) if target == "spring" else len(FEATURES) - 1
    if X.shape[1] != n_expected:
        raise ValueError(
            f"expected {n_expected} columns {FEATURES[:n_expected]} for target {target!r}, got {X.shape[1]}"
        )
    for i, row in enumerate(X):
        try:
            row_to_config(row, target)
        except ValueError as exc:
            raise ValueError(f"row {i}: {exc}") from None
    return X


def row_to_config(row, target):
    plant = PlantParams(*(float(v) for v in row[:3]))
    gains = ControllerGains(*(float(v) for v in row[3:7]))
    if target == "spring":
        tgt = RenderTarget.spring(float(row[7]))
    elif target == "null":
        tgt = RenderTarget.null()
    else:
        raise ValueError(f"unknown target {target!r}")
    return plant, gains, tgt


def check_target(target):
    if target not in ("null", "spring"):
        raise ValueError(f"target must be 'null' or 'spring', got {target!r}")
