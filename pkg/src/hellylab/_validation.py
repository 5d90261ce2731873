"""Input validation helpers shared by the estimators and the functional API."""

import numbers

import numpy as np

from .exceptions import ValidationError


def check_labels(y, name="labels"):
    """Return ``y`` as a 1-d int8 array, requiring entries in {-1, +1}."""
    arr = np.asarray(y)
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    if arr.size and arr.dtype.kind not in "iub":
        if arr.dtype.kind == "f" and np.all(arr == np.round(arr)):
            arr = arr.astype(np.int64)
        else:
            raise ValidationError(f"{name} must be the integers -1 and 1")
    arr = arr.astype(np.int8, copy=False)
    if arr.size and not np.all((arr == 1) | (arr == -1)):
        raise ValidationError(f"{name} must contain only -1 and 1")
    return arr


def check_point_indices(X, n_points, name="X"):
    """Return domain point indices as a 1-d int64 array.

    Accepts a flat sequence or a single-column 2-d array, which is the form
    scikit-learn pipelines hand to ``fit``.
    """
    arr = np.asarray(X)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be a sequence of domain point indices")
    if arr.size == 0:
        return arr.astype(np.int64)
    if arr.dtype.kind == "f":
        if not np.all(arr == np.round(arr)):
            raise ValidationError(f"{name} must hold integer point indices")
    elif arr.dtype.kind not in "iu":
        raise ValidationError(f"{name} must hold integer point indices")
    arr = arr.astype(np.int64)
    if arr.min() < 0 or arr.max() >= n_points:
        raise ValidationError(
            f"{name} holds point indices outside [0, {n_points})"
        )
    return arr


def check_coordinates(X, name="points"):
    """Return coordinates as a finite 2-d float array."""
    try:
        arr = np.asarray(X, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name} must be a rectangular numeric array") from exc
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise ValidationError(f"{name} must be a 2-d array of coordinates")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} must be finite")
    return arr


def check_int(value, name, minimum=None):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ValidationError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise ValidationError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_probability(value, name, *, open_interval=True):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ValidationError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    ok = 0.0 < value < 1.0 if open_interval else 0.0 <= value <= 1.0
    if not ok:
        raise ValidationError(f"{name} must lie in (0, 1), got {value}")
    return value
