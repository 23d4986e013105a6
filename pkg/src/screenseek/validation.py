"""Input validation helpers shared by the estimators and the service layer."""

from __future__ import annotations

import numpy as np

# Coordinates this close to the unit interval are clamped rather than rejected,
# absorbing float noise from clients.
_EPS = 1e-9


def check_unit_bbox(bbox: object, name: str = "bbox") -> tuple[float, float, float, float]:
    """Validate a normalized (left, top, right, bottom) box with positive area."""
    try:
        left, top, right, bottom = (float(v) for v in bbox)  # type: ignore[misc]
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name}: expected four numbers") from exc
    values = [left, top, right, bottom]
    if not all(np.isfinite(values)):
        raise ValueError(f"{name}: coordinates must be finite")
    if min(values) < -_EPS or max(values) > 1 + _EPS:
        raise ValueError(f"{name}: coordinates must lie in [0, 1]")
    left, top, right, bottom = (min(max(v, 0.0), 1.0) for v in values)
    if left >= right or top >= bottom:
        raise ValueError(f"{name}: box must have positive width and height")
    return (left, top, right, bottom)


def check_unit_points(points: object, name: str = "stroke") -> np.ndarray:
    """Validate a stroke: an (n, 2) float array of unit-square coordinates, n >= 1."""
    try:
        arr = np.asarray(points, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name}: expected an array of (x, y) points") from exc
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 1:
        raise ValueError(f"{name}: expected shape (n, 2) with n >= 1")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name}: coordinates must be finite")
    if arr.min() < -_EPS or arr.max() > 1 + _EPS:
        raise ValueError(f"{name}: coordinates must lie in [0, 1]")
    return np.clip(arr, 0.0, 1.0)


def check_positive(value: float, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name}: expected a positive number")
    return value
