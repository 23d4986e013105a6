"""Stroke resampling and the reference doodle classifier.

Sketches arrive as lists of strokes in unit-square coordinates.  Strokes are
resampled to equally spaced points along their own arc length, with the
point count proportional to the stroke's diameter, so dense and sparse input
devices produce the same geometry.  The classifier is deliberately plain:
fixed-length geometric features and an inverse-distance-weighted k-nearest
vote, trained on labeled doodles.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .storage import load_artifact, save_artifact
from .validation import check_unit_points

_ARTIFACT_KIND = "doodle-recognizer"

# Points per unit of stroke diameter when resampling.
_POINTS_PER_UNIT = 20.0


@dataclass(frozen=True, slots=True)
class Prediction:
    icon_class: str
    confidence: float


def _as_stroke(points: object) -> np.ndarray:
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 1:
        raise ValueError("stroke: expected shape (n, 2) with n >= 1")
    if not np.all(np.isfinite(arr)):
        raise ValueError("stroke: coordinates must be finite")
    return arr


def resample_stroke(points: object) -> np.ndarray:
    """Resample a stroke to points equally spaced along its arc length.

    The output point count is ``max(2, round(20 * d))`` where d is the
    largest pairwise distance between input points.  The first and last
    input points are preserved exactly.  A single-point stroke is returned
    unchanged; a zero-extent stroke collapses to its two endpoints.
    """
    pts = _as_stroke(points)
    if len(pts) == 1:
        return pts.copy()
    diffs = pts[:, None, :] - pts[None, :, :]
    diameter = float(np.sqrt((diffs**2).sum(axis=2)).max())
    if diameter == 0.0:
        return pts[[0, -1]].copy()
    count = max(2, round(_POINTS_PER_UNIT * diameter))

    segments = np.sqrt((np.diff(pts, axis=0) ** 2).sum(axis=1))
    arc = np.concatenate([[0.0], np.cumsum(segments)])
    targets = np.linspace(0.0, arc[-1], count)
    resampled = np.column_stack(
        [np.interp(targets, arc, pts[:, 0]), np.interp(targets, arc, pts[:, 1])]
    )
    resampled[0] = pts[0]
    resampled[-1] = pts[-1]
    return resampled


def normalize_sketch(strokes: list[np.ndarray]) -> list[np.ndarray]:
    """Scale a sketch uniformly into the unit square and center it.

    Aspect ratio is preserved; a degenerate (single-point) sketch moves to
    the center.  Uniform scaling plus centering makes classification
    invariant to where and how large the doodle was drawn.
    """
    if not strokes:
        raise ValueError("sketch must contain at least one stroke")
    arrays = [_as_stroke(s) for s in strokes]
    merged = np.concatenate(arrays)
    mins = merged.min(axis=0)
    spans = merged.max(axis=0) - mins
    extent = float(spans.max())
    if extent == 0.0:
        return [s - mins + 0.5 for s in arrays]
    scale = 1.0 / extent
    offset = (1.0 - spans * scale) / 2.0
    return [(s - mins) * scale + offset for s in arrays]


def _resample_path(pts: np.ndarray, count: int) -> np.ndarray:
    """Equal-arc-length resampling to a fixed point count."""
    if len(pts) == 1:
        return np.tile(pts[0], (count, 1))
    segments = np.sqrt((np.diff(pts, axis=0) ** 2).sum(axis=1))
    arc = np.concatenate([[0.0], np.cumsum(segments)])
    if arc[-1] == 0.0:
        return np.tile(pts[0], (count, 1))
    targets = np.linspace(0.0, arc[-1], count)
    return np.column_stack(
        [np.interp(targets, arc, pts[:, 0]), np.interp(targets, arc, pts[:, 1])]
    )


def _direction_histogram(strokes: list[np.ndarray], bins: int) -> np.ndarray:
    """Length-weighted histogram of segment directions, normalized to sum 1."""
    parts_d = []
    parts_len = []
    for stroke in strokes:
        if len(stroke) < 2:
            continue
        deltas = np.diff(stroke, axis=0)
        lengths = np.sqrt((deltas**2).sum(axis=1))
        keep = lengths > 0
        if keep.any():
            parts_d.append(deltas[keep])
            parts_len.append(lengths[keep])
    if not parts_d:
        return np.zeros(bins)
    deltas = np.concatenate(parts_d)
    lengths = np.concatenate(parts_len)
    angles = np.arctan2(deltas[:, 1], deltas[:, 0])
    indices = np.floor((angles + np.pi) / (2 * np.pi / bins)).astype(int) % bins
    hist = np.bincount(indices, weights=lengths, minlength=bins)
    return hist / hist.sum()


def extract_features(
    strokes: list[np.ndarray],
    n_path_points: int = 32,
    n_direction_bins: int = 8,
    max_stroke_histograms: int = 4,
) -> np.ndarray:
    """Fixed-length feature vector for one sketch.

    Concatenates a normalized, resampled outline path, the stroke count,
    a global direction histogram, and per-stroke direction histograms for
    the first few strokes.
    """
    normalized = normalize_sketch(strokes)
    resampled = [resample_stroke(s) for s in normalized]
    outline = _resample_path(np.concatenate(resampled), n_path_points)

    parts = [outline.ravel(), np.array([float(len(resampled))])]
    parts.append(_direction_histogram(resampled, n_direction_bins))
    for i in range(max_stroke_histograms):
        if i < len(resampled):
            parts.append(_direction_histogram([resampled[i]], n_direction_bins))
        else:
            parts.append(np.zeros(n_direction_bins))
    return np.concatenate(parts)


class DoodleClassifier(BaseEstimator):
    """Inverse-distance-weighted kNN over geometric sketch features.

    Parameters
    ----------
    n_neighbors : int
        Neighbors consulted per prediction.
    n_path_points, n_direction_bins, max_stroke_histograms : int
        Feature layout; must match between training and prediction, which
        the estimator guarantees by storing them.
    """

    def __init__(
        self,
        n_neighbors: int = 3,
        n_path_points: int = 32,
        n_direction_bins: int = 8,
        max_stroke_histograms: int = 4,
    ) -> None:
        self.n_neighbors = n_neighbors
        self.n_path_points = n_path_points
        self.n_direction_bins = n_direction_bins
        self.max_stroke_histograms = max_stroke_histograms

    def _features(self, sketch: list[np.ndarray]) -> np.ndarray:
        return extract_features(
            sketch,
            n_path_points=self.n_path_points,
            n_direction_bins=self.n_direction_bins,
            max_stroke_histograms=self.max_stroke_histograms,
        )

    def fit(self, X: list[list[np.ndarray]], y: list[str]) -> "DoodleClassifier":
        """Memorize feature vectors for labeled sketches."""
        if len(X) != len(y):
            raise ValueError("X and y must have the same length")
        if not X:
            raise ValueError("training set must be non-empty")
        if self.n_neighbors < 1:
            raise ValueError("n_neighbors must be at least 1")
        labels = np.asarray([str(label) for label in y], dtype=object)
        self.features_ = np.stack([self._features(sketch) for sketch in X])
        self.labels_ = labels
        self.classes_ = tuple(sorted(set(labels)))
        return self

    def top_predictions(self, sketch: list[np.ndarray], limit: int = 3) -> list[Prediction]:
        """Most likely classes for one sketch, best first.

        Confidence is each class's share of the inverse-distance vote mass,
        so confidences over the returned classes sum to at most 1.
        """
        check_is_fitted(self, "features_")
        if not sketch:
            raise ValueError("sketch must contain at least one stroke")
        vector = self._features([check_unit_points(s) for s in sketch])
        distances = np.sqrt(((self.features_ - vector) ** 2).sum(axis=1))
        k = min(self.n_neighbors, len(distances))
        order = np.argsort(distances, kind="stable")[:k]
        weights = 1.0 / (distances[order] + 1e-9)
        votes: dict[str, float] = {}
        for index, weight in zip(order, weights):
            label = self.labels_[index]
            votes[label] = votes.get(label, 0.0) + float(weight)
        total = sum(votes.values())
        ranked = sorted(votes.items(), key=lambda kv: (-kv[1], kv[0]))
        return [Prediction(label, vote / total) for label, vote in ranked[:limit]]

    def predict(self, X: list[list[np.ndarray]]) -> np.ndarray:
        check_is_fitted(self, "features_")
        return np.asarray(
            [self.top_predictions(sketch, limit=1)[0].icon_class for sketch in X],
            dtype=object,
        )

    def save(self, path: str | Path) -> None:
        check_is_fitted(self, "features_")
        payload = {
            "params": {
                "n_neighbors": self.n_neighbors,
                "n_path_points": self.n_path_points,
                "n_direction_bins": self.n_direction_bins,
                "max_stroke_histograms": self.max_stroke_histograms,
            },
            "features": self.features_,
            "labels": [str(label) for label in self.labels_],
        }
        save_artifact(path, _ARTIFACT_KIND, payload)

    @classmethod
    def load(cls, path: str | Path) -> "DoodleClassifier":
        payload = load_artifact(path, _ARTIFACT_KIND)
        model = cls(**payload["params"])
        model.features_ = np.asarray(payload["features"], dtype=np.float64)
        model.labels_ = np.asarray(payload["labels"], dtype=object)
        model.classes_ = tuple(sorted(set(model.labels_)))
        return model


def train_reference_classifier(
    labeled_doodles: list[tuple[list[np.ndarray], str]],
    classes: tuple[str, ...] | None = None,
    n_neighbors: int = 3,
) -> DoodleClassifier:
    """Train the reference classifier from (sketch, class) pairs.

    When ``classes`` is given, every listed class must appear in the
    training data; training twice on the same input yields a model whose
    saved form is byte-identical.
    """
    if not labeled_doodles:
        raise ValueError("labeled_doodles must be non-empty")
    X = [sketch for sketch, _ in labeled_doodles]
    y = [label for _, label in labeled_doodles]
    if classes is not None:
        missing = sorted(set(classes) - set(y))
        if missing:
            raise ValueError(f"classes with no training examples: {missing}")
    return DoodleClassifier(n_neighbors=n_neighbors).fit(X, y)
