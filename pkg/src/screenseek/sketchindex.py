"""Tile-grid index of icon instances and doodle-placement scoring.

Screens are divided into 24 tiles.  Every icon-bearing element becomes an
instance record holding per-tile coverage fractions; a sketched placement of
the same class scores against an instance by position overlap plus aspect
agreement on top of a flat presence reward.  Placements and instances pair
up greedily, unmatched placements cost a penalty, and the screen total
clamps at zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cache
from importlib.resources import files
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .corpus import Corpus, Screen, UiElement
from .storage import load_artifact, save_artifact
from .textindex import MatchWeights
from .validation import check_unit_bbox

_ARTIFACT_KIND = "sketch-index"


@dataclass(frozen=True)
class TileGrid:
    """Screen partition into 24 equal tiles, row-major from the top-left."""

    cols: int = 6
    rows: int = 4

    def __post_init__(self) -> None:
        if self.cols <= 0 or self.rows <= 0:
            raise ValueError("grid dimensions must be positive")
        if self.cols * self.rows != 24:
            raise ValueError("the tile grid must contain exactly 24 tiles")

    @property
    def n_tiles(self) -> int:
        return self.cols * self.rows


DEFAULT_GRID = TileGrid()


def tile_coverage(bbox: tuple[float, float, float, float], grid: TileGrid = DEFAULT_GRID) -> np.ndarray:
    """Fraction of each tile covered by a normalized box.

    Returns a vector of ``grid.n_tiles`` values in [0, 1]; entry ``r*cols+c``
    is the covered share of the tile in row r (from the top), column c.
    """
    left, top, right, bottom = check_unit_bbox(bbox)
    cols, rows = grid.cols, grid.rows
    x_edges = np.arange(cols + 1) / cols
    y_edges = np.arange(rows + 1) / rows
    overlap_x = np.clip(np.minimum(right, x_edges[1:]) - np.maximum(left, x_edges[:-1]), 0.0, None)
    overlap_y = np.clip(np.minimum(bottom, y_edges[1:]) - np.maximum(top, y_edges[:-1]), 0.0, None)
    # Dividing by the tile area turns absolute overlap into a covered share.
    return (np.outer(overlap_y, overlap_x) * (cols * rows)).ravel()


def _neighbor_max(grids: np.ndarray) -> np.ndarray:
    """Max over the four edge-adjacent tiles, batched over leading axes."""
    out = np.zeros_like(grids)
    out[..., 1:, :] = grids[..., :-1, :]
    out[..., :-1, :] = np.maximum(out[..., :-1, :], grids[..., 1:, :])
    out[..., :, 1:] = np.maximum(out[..., :, 1:], grids[..., :, :-1])
    out[..., :, :-1] = np.maximum(out[..., :, :-1], grids[..., :, 1:])
    return out


def smooth_coverage(coverage: np.ndarray, grid: TileGrid = DEFAULT_GRID, decay: float = 0.7) -> np.ndarray:
    """Raise each tile to ``decay`` times its best edge-adjacent neighbor.

    Accepts a single coverage vector or a batch of them; tolerates small
    placement offsets when doodles are compared against instances.
    """
    flat = np.asarray(coverage, dtype=np.float64)
    shaped = flat.reshape(*flat.shape[:-1], grid.rows, grid.cols)
    smoothed = np.maximum(shaped, decay * _neighbor_max(shaped))
    return smoothed.reshape(flat.shape)


@dataclass(frozen=True)
class InstanceRecord:
    """One icon occurrence on a screen, position reduced to tile coverage."""

    screen_id: str
    icon_class: str
    bbox: tuple[float, float, float, float]
    coverage: np.ndarray = field(compare=False, repr=False)


@dataclass(frozen=True)
class DoodlePlacement:
    """A confirmed doodle: its class and where it was drawn, normalized."""

    icon_class: str
    bbox: tuple[float, float, float, float]

    def __post_init__(self) -> None:
        if not self.icon_class:
            raise ValueError("placement icon_class must be non-empty")
        object.__setattr__(self, "bbox", check_unit_bbox(self.bbox, "placement bbox"))

    def coverage(self, grid: TileGrid = DEFAULT_GRID) -> np.ndarray:
        return tile_coverage(self.bbox, grid)

    @property
    def aspect(self) -> float:
        left, top, right, bottom = self.bbox
        return (right - left) / (bottom - top)


@dataclass(frozen=True)
class RankingConfig:
    """Knobs of the doodle-placement score and the fused ranking."""

    presence_reward: float = 11.0
    position_weight: float = 1.0
    shape_weight: float = 1.0
    neighbor_decay: float = 0.7
    unmatched_penalty: float = 12.0
    grid: TileGrid = DEFAULT_GRID
    weights: MatchWeights = MatchWeights()

    def __post_init__(self) -> None:
        if self.presence_reward < 0 or self.position_weight < 0 or self.shape_weight < 0:
            raise ValueError("rewards and weights must be non-negative")
        if not 0 < self.neighbor_decay < 1:
            raise ValueError("neighbor_decay must lie strictly between 0 and 1")
        if self.unmatched_penalty <= 0:
            raise ValueError("unmatched_penalty must be positive")


def parse_class_map(raw: str) -> dict[str, str]:
    """Tab-separated ``corpus_label<TAB>doodle_class`` rows."""
    mapping: dict[str, str] = {}
    for n, line in enumerate(raw.splitlines(), start=1):
        line = line.rstrip()
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise ValueError(f"class map line {n}: expected label<TAB>class")
        mapping[parts[0]] = parts[1]
    return mapping


def load_class_map(path: str | Path) -> dict[str, str]:
    return parse_class_map(Path(path).read_text("utf-8"))


@cache
def default_class_map() -> dict[str, str]:
    return parse_class_map(files("screenseek.data").joinpath("class_map.tsv").read_text("utf-8"))


@cache
def default_doodle_classes() -> tuple[str, ...]:
    raw = files("screenseek.data").joinpath("doodle_classes.txt").read_text("utf-8")
    classes = [line.strip() for line in raw.splitlines() if line.strip() and not line.startswith("#")]
    return tuple(classes)


def _greedy_pairs(rows: list[list[float]]) -> tuple[float, int]:
    """Greedy one-to-one matching total over a small score matrix.

    Repeatedly takes the best remaining (placement, instance) pair; ties go
    to the lowest placement index, then the lowest instance index.  Returns
    the matched-score sum and the number of matches.
    """
    n_rows = len(rows)
    n_cols = len(rows[0])
    limit = min(n_rows, n_cols)
    used_rows = [False] * n_rows
    used_cols = [False] * n_cols
    total = 0.0
    for _ in range(limit):
        best = -1.0
        best_r = -1
        best_c = -1
        for r in range(n_rows):
            if used_rows[r]:
                continue
            row = rows[r]
            for c in range(n_cols):
                if not used_cols[c]:
                    value = row[c]
                    if value > best:
                        best = value
                        best_r = r
                        best_c = c
        used_rows[best_r] = True
        used_cols[best_c] = True
        total += best
    return total, limit


class SketchIndexer(BaseEstimator):
    """Per-class tile-coverage index over a screen corpus.

    Parameters
    ----------
    class_map : dict, optional
        Corpus label to doodle class; the element's ``icon_class`` is looked
        up first, then its ``element_class``.  Defaults to the packaged map.
    grid : TileGrid, optional
        Tile layout; defaults to 6 columns by 4 rows.
    """

    def __init__(self, class_map: dict[str, str] | None = None, grid: TileGrid | None = None) -> None:
        self.class_map = class_map
        self.grid = grid

    def fit(self, corpus: Corpus, y: object = None) -> "SketchIndexer":
        class_map = self.class_map if self.class_map is not None else default_class_map()
        grid = self.grid or DEFAULT_GRID
        classes = default_doodle_classes()
        known = set(classes)
        unknown_targets = sorted(set(class_map.values()) - known)
        if unknown_targets:
            raise ValueError(f"class map targets outside the doodle classes: {unknown_targets}")

        instances: dict[str, dict[str, list[InstanceRecord]]] = {c: {} for c in classes}
        skipped = 0
        for screen in corpus.screens:
            for element, label in _labeled_elements(screen, class_map):
                if label is None:
                    skipped += 1
                    continue
                left, top, right, bottom = element.bounds
                bbox = (
                    left / screen.width,
                    top / screen.height,
                    right / screen.width,
                    bottom / screen.height,
                )
                record = InstanceRecord(
                    screen_id=screen.id,
                    icon_class=label,
                    bbox=bbox,
                    coverage=tile_coverage(bbox, grid),
                )
                instances[label].setdefault(screen.id, []).append(record)

        self.grid_ = grid
        self.classes_ = classes
        self.instances_ = instances
        self.skipped_label_count_ = skipped
        self.n_screens_ = len(corpus)
        self._build_arrays()
        return self

    def _build_arrays(self) -> None:
        """Pack per-class instances into contiguous arrays for scoring."""
        self._arrays: dict[str, dict] = {}
        self._smoothed: dict[tuple[str, float], np.ndarray] = {}
        for icon_class, by_screen in self.instances_.items():
            if not by_screen:
                continue
            screen_ids = sorted(by_screen)
            coverages = []
            aspects = []
            starts = [0]
            for screen_id in screen_ids:
                for record in by_screen[screen_id]:
                    coverages.append(record.coverage)
                    left, top, right, bottom = record.bbox
                    aspects.append((right - left) / (bottom - top))
                starts.append(len(coverages))
            self._arrays[icon_class] = {
                "screen_ids": screen_ids,
                "starts": np.array(starts, dtype=np.int64),
                "coverage": np.stack(coverages),
                "aspect": np.array(aspects, dtype=np.float64),
            }

    def _smoothed_coverage(self, icon_class: str, decay: float) -> np.ndarray:
        key = (icon_class, decay)
        cached = self._smoothed.get(key)
        if cached is None:
            cached = smooth_coverage(self._arrays[icon_class]["coverage"], self.grid_, decay)
            self._smoothed[key] = cached
        return cached

    def warm(self, config: "RankingConfig | None" = None) -> None:
        """Precompute smoothed coverage so first queries pay no extra cost."""
        check_is_fitted(self, "instances_")
        decay = (config or RankingConfig()).neighbor_decay
        for icon_class in self._arrays:
            self._smoothed_coverage(icon_class, decay)

    def instances(self, icon_class: str) -> dict[str, list[InstanceRecord]]:
        check_is_fitted(self, "instances_")
        if icon_class not in self.classes_:
            raise ValueError(f"unknown doodle class {icon_class!r}")
        return self.instances_[icon_class]

    def score_class_doodles(
        self,
        icon_class: str,
        placements: list[DoodlePlacement],
        config: RankingConfig | None = None,
    ) -> dict[str, float]:
        """Score every screen holding this class against the placements.

        Screens without any instance of the class are omitted; they would
        score zero.  Screens whose penalties cancel their matches are kept
        with an explicit 0.0.
        """
        check_is_fitted(self, "instances_")
        config = config or RankingConfig()
        if not placements:
            raise ValueError("placements must be non-empty")
        if icon_class not in self.classes_:
            raise ValueError(f"unknown doodle class {icon_class!r}")
        for placement in placements:
            if placement.icon_class != icon_class:
                raise ValueError(
                    f"placement class {placement.icon_class!r} does not match {icon_class!r}"
                )
        arrays = self._arrays.get(icon_class)
        if arrays is None:
            return {}

        grid = self.grid_
        query = np.stack([p.coverage(grid) for p in placements])
        query_sums = query.sum(axis=1)
        query_aspects = np.array([p.aspect for p in placements])

        smoothed = self._smoothed_coverage(icon_class, config.neighbor_decay)
        # position: how much of each placement's footprint the instance covers
        position = (
            np.minimum(query[:, None, :], smoothed[None, :, :]).sum(axis=2)
            / query_sums[:, None]
        )
        aspects = arrays["aspect"]
        shape = np.minimum.outer(query_aspects, aspects) / np.maximum.outer(
            query_aspects, aspects
        )
        pair_scores = (
            config.presence_reward
            + config.position_weight * position
            + config.shape_weight * shape
        )

        starts = arrays["starts"]
        screen_ids = arrays["screen_ids"]
        n_placed = len(placements)
        out: dict[str, float] = {}
        if n_placed == 1:
            # One placement matches its best instance and nothing is unmatched.
            best = np.maximum.reduceat(pair_scores[0], starts[:-1])
            for screen_id, value in zip(screen_ids, best):
                out[screen_id] = max(0.0, float(value))
            return out

        score_rows = pair_scores.tolist()
        penalty = config.unmatched_penalty
        for index, screen_id in enumerate(screen_ids):
            lo = int(starts[index])
            hi = int(starts[index + 1])
            window = [row[lo:hi] for row in score_rows]
            matched_total, n_matched = _greedy_pairs(window)
            raw = matched_total - penalty * (n_placed - n_matched)
            out[screen_id] = max(0.0, raw)
        return out

    def save(self, path: str | Path) -> None:
        check_is_fitted(self, "instances_")
        save_artifact(path, _ARTIFACT_KIND, self._to_payload())

    def _to_payload(self) -> dict:
        rows = []
        for icon_class in self.classes_:
            by_screen = self.instances_[icon_class]
            for screen_id in sorted(by_screen):
                for record in by_screen[screen_id]:
                    rows.append([icon_class, screen_id, list(record.bbox)])
        return {
            "grid": {"cols": self.grid_.cols, "rows": self.grid_.rows},
            "classes": list(self.classes_),
            "instances": rows,
            "skipped": self.skipped_label_count_,
            "n_screens": self.n_screens_,
        }

    @classmethod
    def load(cls, path: str | Path) -> "SketchIndexer":
        return cls._from_payload(load_artifact(path, _ARTIFACT_KIND))

    @classmethod
    def _from_payload(cls, payload: dict) -> "SketchIndexer":
        grid = TileGrid(cols=payload["grid"]["cols"], rows=payload["grid"]["rows"])
        indexer = cls(grid=grid)
        classes = tuple(payload["classes"])
        instances: dict[str, dict[str, list[InstanceRecord]]] = {c: {} for c in classes}
        for icon_class, screen_id, bbox in payload["instances"]:
            bbox = tuple(bbox)
            record = InstanceRecord(
                screen_id=screen_id,
                icon_class=icon_class,
                bbox=bbox,
                coverage=tile_coverage(bbox, grid),
            )
            instances[icon_class].setdefault(screen_id, []).append(record)
        indexer.grid_ = grid
        indexer.classes_ = classes
        indexer.instances_ = instances
        indexer.skipped_label_count_ = payload["skipped"]
        indexer.n_screens_ = payload["n_screens"]
        indexer._build_arrays()
        return indexer


def _labeled_elements(screen: Screen, class_map: dict[str, str]):
    """Yield (element, doodle class or None) for every labeled element.

    None marks an element whose labels exist but map to no doodle class.
    """
    order: list[tuple[UiElement, str | None]] = []

    def walk(element: UiElement) -> None:
        label = None
        if element.icon_class is not None and element.icon_class in class_map:
            label = class_map[element.icon_class]
        elif element.element_class is not None and element.element_class in class_map:
            label = class_map[element.element_class]
        if label is not None:
            order.append((element, label))
        elif element.icon_class is not None or element.element_class is not None:
            order.append((element, None))
        for child in element.children:
            walk(child)

    walk(screen.root)
    return order
