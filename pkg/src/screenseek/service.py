"""Stateless HTTP service exposing doodle recognition and fused search.

Handlers only read the fitted models, so identical requests always produce
identical responses and instances can be replicated freely.  Input problems
surface as 400s with a message; unknown screens as 404s.
"""

from __future__ import annotations

import time
from typing import Any

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .corpus import ContentKind, Corpus
from .ranker import Query, ScreenRanker
from .recognizer import DoodleClassifier
from .sketchindex import DoodlePlacement
from .textindex import parse_query_texts

_MAX_META_ENTRIES = 40


class StrokesBody(BaseModel):
    strokes: list[list[tuple[float, float]]]


class IconBody(BaseModel):
    icon_class: str
    bbox: tuple[float, float, float, float]


class SearchBody(BaseModel):
    icons: list[IconBody] = []
    texts: list[str] = []
    limit: int | None = None


def build_screen_meta(corpus: Corpus) -> dict[str, dict[str, Any]]:
    """Per-screen display metadata: dimensions plus positioned texts/labels."""
    meta: dict[str, dict[str, Any]] = {}
    for screen in corpus.screens:
        texts = []
        icons = []
        for content in corpus.contents[screen.id]:
            left, top, right, bottom = content.bbox
            bbox = [
                left / screen.width,
                top / screen.height,
                right / screen.width,
                bottom / screen.height,
            ]
            if content.kind is ContentKind.SCREEN_TEXT:
                if len(texts) < _MAX_META_ENTRIES:
                    texts.append({"text": content.raw_text, "bbox": bbox})
            elif len(icons) < _MAX_META_ENTRIES:
                icons.append({"label": content.raw_text, "bbox": bbox})
        meta[screen.id] = {
            "id": screen.id,
            "width": screen.width,
            "height": screen.height,
            "texts": texts,
            "icons": icons,
        }
    return meta


def create_app(
    ranker: ScreenRanker,
    classifier: DoodleClassifier,
    corpus: Corpus,
    cors_origins: tuple[str, ...] = ("*",),
    ui_dir: str | None = None,
    default_limit: int = 50,
) -> FastAPI:
    """Wire the fitted models into a FastAPI application."""
    ranker.warm()
    screen_meta = build_screen_meta(corpus)
    app = FastAPI(title="screenseek", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.post("/api/recognize")
    def recognize(body: StrokesBody) -> dict:
        started = time.perf_counter()
        try:
            sketch = [np.asarray(stroke, dtype=np.float64) for stroke in body.strokes]
            predictions = classifier.top_predictions(sketch, limit=3)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return {
            "predictions": [
                {"icon_class": p.icon_class, "confidence": p.confidence} for p in predictions
            ],
            "timing": {"recognize_ms": _ms_since(started)},
        }

    @app.post("/api/search")
    def search(body: SearchBody) -> dict:
        started = time.perf_counter()
        pipeline = ranker.text_index_.pipeline_
        try:
            doodles = [
                DoodlePlacement(icon_class=icon.icon_class, bbox=icon.bbox)
                for icon in body.icons
            ]
            texts = []
            for raw in body.texts:
                texts.extend(parse_query_texts(raw, pipeline))
            query = Query(doodles=doodles, texts=texts)
            limit = default_limit if body.limit is None else body.limit
            parsed = time.perf_counter()
            result = ranker.rank(query, limit=limit)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        finished = time.perf_counter()
        return {
            "results": [
                {"screen_id": item.screen_id, "score": item.score, "rank": item.rank}
                for item in result
            ],
            "count": len(result),
            "limit": limit,
            "timing": {
                "parse_ms": round((parsed - started) * 1000, 3),
                "rank_ms": round((finished - parsed) * 1000, 3),
                "total_ms": round((finished - started) * 1000, 3),
            },
        }

    @app.get("/api/screens/{screen_id}")
    def screen(screen_id: str) -> dict:
        meta = screen_meta.get(screen_id)
        if meta is None:
            raise HTTPException(status_code=404, detail=f"unknown screen id {screen_id!r}")
        return meta

    @app.get("/api/classes")
    def classes() -> dict:
        return {"classes": list(ranker.sketch_index_.classes_)}

    @app.get("/api/health")
    def health() -> dict:
        return {
            "status": "ok",
            "screens": len(screen_meta),
            "classes": len(ranker.sketch_index_.classes_),
        }

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    return app


def _ms_since(started: float) -> float:
    return round((time.perf_counter() - started) * 1000, 3)
