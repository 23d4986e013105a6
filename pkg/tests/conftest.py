"""Shared fixtures: a small hand-built corpus and reusable trained objects."""

from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from screenseek.corpus import Corpus, parse_screen
from screenseek.ranker import ScreenRanker
from screenseek.sketchindex import RankingConfig
from screenseek.synth import generate_screens

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def element(bounds, element_class=None, text=None, icon_class=None, children=()):
    node = {"bounds": list(bounds)}
    if element_class is not None:
        node["element_class"] = element_class
    if text is not None:
        node["text"] = text
    if icon_class is not None:
        node["icon_class"] = icon_class
    if children:
        node["children"] = [dict(c) for c in children]
    return node


def screen_doc(screen_id, root, width=1440, height=2560):
    return {"id": screen_id, "width": width, "height": height, "root": root}


@pytest.fixture(scope="session")
def tiny_corpus() -> Corpus:
    """Six screens with known text/icon layouts for hand-checked scoring.

    Coordinates are in a 1440x2560 frame; quadrant midlines sit at 720/1280.
    """
    docs = [
        # s001: "Settings" title top-left, Menu icon top-left, Star bottom-right.
        screen_doc(
            "s001",
            element(
                (0, 0, 1440, 2560),
                children=[
                    element((40, 40, 600, 160), element_class="Text", text="Settings"),
                    element((40, 200, 184, 344), element_class="Icon", icon_class="menu"),
                    element((1200, 2300, 1344, 2444), element_class="Icon", icon_class="star"),
                ],
            ),
        ),
        # s002: "Options" (synonym fodder) top-left, Menu icon bottom-left.
        screen_doc(
            "s002",
            element(
                (0, 0, 1440, 2560),
                children=[
                    element((40, 40, 600, 160), element_class="Text", text="Options"),
                    element((40, 2300, 184, 2444), element_class="Icon", icon_class="menu"),
                ],
            ),
        ),
        # s003: "Profile editor" spanning top, Search icon top-right.
        screen_doc(
            "s003",
            element(
                (0, 0, 1440, 2560),
                children=[
                    element((40, 40, 1400, 160), element_class="Text", text="Profile editor"),
                    element((1200, 40, 1344, 184), element_class="Icon", icon_class="search"),
                ],
            ),
        ),
        # s004: login form, button label within the bottom half.
        screen_doc(
            "s004",
            element(
                (0, 0, 1440, 2560),
                children=[
                    element((100, 900, 1340, 1100), element_class="Text Field", text="Email address"),
                    element((100, 1500, 1340, 1700), element_class="Text Button", text="Sign in"),
                ],
            ),
        ),
        # s005: two Menu icons (multi-instance case), one top-left, one top-right.
        screen_doc(
            "s005",
            element(
                (0, 0, 1440, 2560),
                children=[
                    element((40, 200, 184, 344), element_class="Icon", icon_class="menu"),
                    element((1256, 200, 1400, 344), element_class="Icon", icon_class="menu"),
                    element((400, 1200, 1040, 1320), element_class="Text", text="Shared albums"),
                ],
            ),
        ),
        # s006: widgets mapped through element classes, no icons.
        screen_doc(
            "s006",
            element(
                (0, 0, 1440, 2560),
                children=[
                    element((100, 600, 244, 744), element_class="Checkbox"),
                    element((100, 900, 740, 1020), element_class="On/Off Switch"),
                    element((100, 1300, 1340, 1380), element_class="Slider"),
                    element((100, 1600, 800, 1720), element_class="Text", text="Notification settings"),
                ],
            ),
        ),
    ]
    return Corpus.from_screens([parse_screen(doc) for doc in docs])


@pytest.fixture(scope="session")
def tiny_ranker(tiny_corpus) -> ScreenRanker:
    ranker = ScreenRanker(RankingConfig())
    ranker.fit(tiny_corpus)
    ranker.warm()
    return ranker


@pytest.fixture(scope="session")
def synth_corpus() -> Corpus:
    """A deterministic 400-screen generated corpus for broader checks."""
    return Corpus.from_screens(generate_screens(400, seed=11))


@pytest.fixture(scope="session")
def synth_ranker(synth_corpus) -> ScreenRanker:
    ranker = ScreenRanker(RankingConfig())
    ranker.fit(synth_corpus)
    ranker.warm()
    return ranker
