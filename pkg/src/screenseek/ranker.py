"""Fused ranking of doodle placements and positioned text terms.

Each doodle class and each distinct text term forms one query component.
Component scores are normalized by the component's best screen so that no
single component dominates on raw magnitude; a doodle component then counts
once per drawn doodle of that class while a text component counts once.
Components whose best score is zero (or that match nothing) are skipped.
Screens are ordered by the summed contributions, ties broken by ascending
screen id.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .corpus import ALL_QUADRANTS, Corpus, Quadrant
from .sketchindex import DoodlePlacement, RankingConfig, SketchIndexer, TileGrid
from .storage import load_artifact, save_artifact
from .synonyms import SynonymTable
from .textindex import MatchWeights, TextIndexer, TextQuery
from .textpipe import TextPipeline

_ARTIFACT_KIND = "search-index"

DEFAULT_LIMIT = 50

# Canonical prefix per zone set, for labeling explanations.
_ZONE_LABELS: dict[frozenset[Quadrant], str] = {
    frozenset({Quadrant.TOP_LEFT}): "tl",
    frozenset({Quadrant.TOP_RIGHT}): "tr",
    frozenset({Quadrant.BOTTOM_LEFT}): "bl",
    frozenset({Quadrant.BOTTOM_RIGHT}): "br",
    frozenset({Quadrant.TOP_LEFT, Quadrant.TOP_RIGHT}): "t",
    frozenset({Quadrant.BOTTOM_LEFT, Quadrant.BOTTOM_RIGHT}): "b",
    frozenset({Quadrant.TOP_LEFT, Quadrant.BOTTOM_LEFT}): "l",
    frozenset({Quadrant.TOP_RIGHT, Quadrant.BOTTOM_RIGHT}): "r",
}


def describe_text_query(query: TextQuery) -> str:
    """Human-readable form like ``tr:settings``; bare term means whole screen."""
    if query.zones == ALL_QUADRANTS:
        return query.term
    prefix = _ZONE_LABELS.get(query.zones)
    if prefix is None:
        # Unusual zone sets can only come from constructed queries.
        prefix = "+".join(sorted(q.value for q in query.zones)).lower()
    return f"{prefix}:{query.term}"


@dataclass
class Query:
    """A fused search request: doodle placements plus positioned terms."""

    doodles: list[DoodlePlacement] = field(default_factory=list)
    texts: list[TextQuery] = field(default_factory=list)

    def doodles_by_class(self) -> dict[str, list[DoodlePlacement]]:
        groups: dict[str, list[DoodlePlacement]] = {}
        for placement in self.doodles:
            groups.setdefault(placement.icon_class, []).append(placement)
        return groups

    def distinct_texts(self) -> list[TextQuery]:
        seen: set[TextQuery] = set()
        out = []
        for query in self.texts:
            if query not in seen:
                seen.add(query)
                out.append(query)
        return out


@dataclass(frozen=True, slots=True)
class RankedScreen:
    screen_id: str
    score: float
    rank: int


@dataclass
class RankedResult:
    """Ranked screens, best first; rank is 1-based and dense."""

    items: list[RankedScreen]

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    @property
    def pairs(self) -> list[tuple[str, float]]:
        return [(item.screen_id, item.score) for item in self.items]

    def rank_of(self, screen_id: str) -> int | None:
        for item in self.items:
            if item.screen_id == screen_id:
                return item.rank
        return None


@dataclass(frozen=True, slots=True)
class ExplanationPart:
    kind: str  # "doodle" or "text"
    label: str
    contribution: float


@dataclass
class Explanation:
    screen_id: str
    total: float
    parts: list[ExplanationPart]


class ScreenRanker(BaseEstimator):
    """End-to-end search index: text index plus sketch index plus fusion.

    Parameters
    ----------
    config : RankingConfig, optional
        Scoring constants shared by both component indexes.
    pipeline : TextPipeline, optional
        Lexicon bundle for indexing and query parsing.
    synonyms : SynonymTable, optional
        Synonym table for reduced-weight text matches.
    class_map : dict, optional
        Corpus label to doodle class mapping for the sketch index.
    """

    def __init__(
        self,
        config: RankingConfig | None = None,
        pipeline: TextPipeline | None = None,
        synonyms: SynonymTable | None = None,
        class_map: dict[str, str] | None = None,
    ) -> None:
        self.config = config
        self.pipeline = pipeline
        self.synonyms = synonyms
        self.class_map = class_map

    def fit(self, corpus: Corpus, y: object = None) -> "ScreenRanker":
        config = self.config or RankingConfig()
        self.config_ = config
        self.text_index_ = TextIndexer(
            pipeline=self.pipeline, synonyms=self.synonyms, weights=config.weights
        ).fit(corpus)
        self.sketch_index_ = SketchIndexer(class_map=self.class_map, grid=config.grid).fit(
            corpus
        )
        self.screen_ids_ = tuple(corpus.ids)
        self._screen_id_set = set(self.screen_ids_)
        return self

    def warm(self) -> None:
        """Precompute query-time caches; optional, saves first-query latency."""
        check_is_fitted(self, "screen_ids_")
        self.sketch_index_.warm(self.config_)

    def _components(self, query: Query) -> list[tuple[str, str, float, dict[str, float]]]:
        """Component list: (kind, label, multiplier, per-screen scores)."""
        components = []
        groups = query.doodles_by_class()
        for icon_class in sorted(groups):
            placements = groups[icon_class]
            scores = self.sketch_index_.score_class_doodles(
                icon_class, placements, self.config_
            )
            components.append(("doodle", icon_class, float(len(placements)), scores))
        for text_query in query.distinct_texts():
            scores = self.text_index_.score(text_query, self.config_.weights)
            components.append(("text", describe_text_query(text_query), 1.0, scores))
        return components

    def rank(self, query: Query, limit: int = DEFAULT_LIMIT) -> RankedResult:
        """Fuse all query components into one ranked screen list.

        Raises ValueError for an empty query, an unknown doodle class, or a
        non-positive limit.
        """
        check_is_fitted(self, "screen_ids_")
        self._validate(query)
        if limit < 1:
            raise ValueError("limit must be at least 1")

        totals: dict[str, float] = {}
        for _, _, multiplier, scores in self._components(query):
            best = max(scores.values()) if scores else 0.0
            if best <= 0.0:
                continue
            for screen_id, value in scores.items():
                totals[screen_id] = totals.get(screen_id, 0.0) + value / best * multiplier

        ordered = sorted(totals.items(), key=lambda kv: (-kv[1], kv[0]))[:limit]
        return RankedResult(
            items=[
                RankedScreen(screen_id=sid, score=score, rank=position)
                for position, (sid, score) in enumerate(ordered, start=1)
            ]
        )

    def explain(self, query: Query, screen_id: str) -> Explanation:
        """Per-component contributions of one screen's fused score."""
        check_is_fitted(self, "screen_ids_")
        self._validate(query)
        if screen_id not in self._screen_id_set:
            raise ValueError(f"unknown screen id {screen_id!r}")

        parts = []
        total = 0.0
        for kind, label, multiplier, scores in self._components(query):
            best = max(scores.values()) if scores else 0.0
            if best <= 0.0:
                contribution = 0.0
            else:
                contribution = scores.get(screen_id, 0.0) / best * multiplier
            parts.append(ExplanationPart(kind=kind, label=label, contribution=contribution))
            total += contribution
        return Explanation(screen_id=screen_id, total=total, parts=parts)

    def _validate(self, query: Query) -> None:
        if not query.doodles and not query.texts:
            raise ValueError("query must contain at least one doodle or text term")
        supported = set(self.sketch_index_.classes_)
        for placement in query.doodles:
            if placement.icon_class not in supported:
                raise ValueError(
                    f"unknown doodle class {placement.icon_class!r}; "
                    f"supported: {', '.join(sorted(supported))}"
                )

    def save(self, path: str | Path) -> None:
        check_is_fitted(self, "screen_ids_")
        config = self.config_
        payload = {
            "config": {
                "presence_reward": config.presence_reward,
                "position_weight": config.position_weight,
                "shape_weight": config.shape_weight,
                "neighbor_decay": config.neighbor_decay,
                "unmatched_penalty": config.unmatched_penalty,
                "grid": {"cols": config.grid.cols, "rows": config.grid.rows},
                "weights": {
                    "exact": config.weights.exact,
                    "synonym": config.weights.synonym,
                    "max_edit_distance": config.weights.max_edit_distance,
                },
            },
            "screen_ids": list(self.screen_ids_),
            "text_index": self.text_index_._to_payload(),
            "sketch_index": self.sketch_index_._to_payload(),
        }
        save_artifact(path, _ARTIFACT_KIND, payload)

    @classmethod
    def load(cls, path: str | Path) -> "ScreenRanker":
        payload = load_artifact(path, _ARTIFACT_KIND)
        cfg = payload["config"]
        config = RankingConfig(
            presence_reward=cfg["presence_reward"],
            position_weight=cfg["position_weight"],
            shape_weight=cfg["shape_weight"],
            neighbor_decay=cfg["neighbor_decay"],
            unmatched_penalty=cfg["unmatched_penalty"],
            grid=TileGrid(cols=cfg["grid"]["cols"], rows=cfg["grid"]["rows"]),
            weights=MatchWeights(**cfg["weights"]),
        )
        ranker = cls(config=config)
        ranker.config_ = config
        ranker.text_index_ = TextIndexer._from_payload(payload["text_index"])
        ranker.sketch_index_ = SketchIndexer._from_payload(payload["sketch_index"])
        ranker.screen_ids_ = tuple(payload["screen_ids"])
        ranker._screen_id_set = set(ranker.screen_ids_)
        return ranker
