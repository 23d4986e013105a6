"""Tile coverage, neighbor smoothing, greedy matching, and doodle scoring."""

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from sklearn.exceptions import NotFittedError

from conftest import element, screen_doc
from oracles import doodle_screen_score, greedy_match, rect_tile_coverage, smooth_tiles
from screenseek.corpus import Corpus, parse_screen
from screenseek.sketchindex import (
    DEFAULT_GRID,
    DoodlePlacement,
    RankingConfig,
    SketchIndexer,
    TileGrid,
    _greedy_pairs,
    default_class_map,
    default_doodle_classes,
    parse_class_map,
    smooth_coverage,
    tile_coverage,
)

COORD = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


@st.composite
def unit_bboxes(draw):
    x1, x2 = sorted((draw(COORD), draw(COORD)))
    y1, y2 = sorted((draw(COORD), draw(COORD)))
    assume(x2 - x1 > 1e-6 and y2 - y1 > 1e-6)
    return (x1, y1, x2, y2)


def test_grid_must_hold_24_tiles():
    assert TileGrid().n_tiles == 24
    assert TileGrid(cols=4, rows=6).n_tiles == 24
    with pytest.raises(ValueError, match="24"):
        TileGrid(cols=5, rows=5)
    with pytest.raises(ValueError, match="positive"):
        TileGrid(cols=0, rows=24)


def test_tile_coverage_full_screen_is_all_ones():
    assert tile_coverage((0.0, 0.0, 1.0, 1.0)) == pytest.approx(np.ones(24))


def test_tile_coverage_single_tile_boxes():
    first = tile_coverage((0.0, 0.0, 1 / 6, 1 / 4))
    expected = np.zeros(24)
    expected[0] = 1.0
    assert first == pytest.approx(expected, abs=1e-12)

    top_right = tile_coverage((5 / 6, 0.0, 1.0, 1 / 4))
    assert float(top_right[5]) == pytest.approx(1.0)
    assert top_right.sum() == pytest.approx(1.0)

    # In a 4x6 layout the top row only has four tiles.
    portrait = tile_coverage((3 / 4, 0.0, 1.0, 1 / 6), TileGrid(cols=4, rows=6))
    assert float(portrait[3]) == pytest.approx(1.0)
    assert portrait.sum() == pytest.approx(1.0)


def test_tile_coverage_half_tile():
    half = tile_coverage((0.0, 0.0, 1 / 12, 1 / 4))
    assert float(half[0]) == pytest.approx(0.5)
    assert half.sum() == pytest.approx(0.5)


@given(unit_bboxes())
def test_tile_coverage_matches_oracle(bbox):
    ours = tile_coverage(bbox)
    theirs = rect_tile_coverage(bbox)
    assert ours == pytest.approx(np.array(theirs), abs=1e-12)
    left, top, right, bottom = bbox
    assert ours.sum() == pytest.approx(24 * (right - left) * (bottom - top))


@given(unit_bboxes())
def test_tile_coverage_matches_oracle_portrait_grid(bbox):
    ours = tile_coverage(bbox, TileGrid(cols=4, rows=6))
    theirs = rect_tile_coverage(bbox, cols=4, rows=6)
    assert ours == pytest.approx(np.array(theirs), abs=1e-12)


def test_tile_coverage_rejects_bad_boxes():
    with pytest.raises(ValueError, match="positive"):
        tile_coverage((0.5, 0.5, 0.5, 0.9))
    with pytest.raises(ValueError, match=r"\[0, 1\]"):
        tile_coverage((0.0, 0.0, 1.5, 1.0))


def test_smooth_coverage_spreads_to_edge_neighbors_only():
    raw = np.zeros(24)
    raw[7] = 1.0  # row 1, col 1 in the 6x4 layout
    smoothed = smooth_coverage(raw)
    expected = np.zeros(24)
    expected[7] = 1.0
    for neighbor in (1, 13, 6, 8):
        expected[neighbor] = 0.7
    assert smoothed == pytest.approx(expected)
    # Diagonal tiles (0, 2, 12, 14) stay at zero.
    assert smoothed[0] == 0.0
    assert smoothed[14] == 0.0


def test_smooth_coverage_corner_has_two_neighbors():
    raw = np.zeros(24)
    raw[0] = 0.8
    smoothed = smooth_coverage(raw, decay=0.5)
    assert float(smoothed[0]) == pytest.approx(0.8)
    assert float(smoothed[1]) == pytest.approx(0.4)
    assert float(smoothed[6]) == pytest.approx(0.4)
    assert smoothed.sum() == pytest.approx(0.8 + 0.4 + 0.4)


@given(st.lists(st.floats(min_value=0, max_value=1), min_size=24, max_size=24))
def test_smooth_coverage_matches_oracle(values):
    ours = smooth_coverage(np.array(values))
    theirs = smooth_tiles(values, cols=6, rows=4, decay=0.7)
    assert ours == pytest.approx(np.array(theirs), abs=1e-12)
    assert np.all(ours >= np.array(values) - 1e-12)


def test_smooth_coverage_batched_matches_per_row():
    rng = np.random.default_rng(5)
    batch = rng.random((7, 24))
    together = smooth_coverage(batch)
    separate = np.stack([smooth_coverage(row) for row in batch])
    assert together == pytest.approx(separate)


@given(
    st.lists(
        st.lists(st.floats(min_value=0, max_value=20), min_size=1, max_size=5),
        min_size=1,
        max_size=5,
    ).filter(lambda rows: len({len(r) for r in rows}) == 1)
)
def test_greedy_pairs_matches_sort_sweep_oracle(rows):
    ours_total, ours_count = _greedy_pairs(rows)
    oracle_total, oracle_count = greedy_match(rows)
    assert ours_count == oracle_count
    assert ours_total == pytest.approx(oracle_total)


def test_greedy_ties_resolve_by_row_then_column():
    # Both implementations must take (0,0) on the tie, leaving 9 for row 1.
    assert _greedy_pairs([[10.0, 10.0], [0.0, 9.0]]) == (19.0, 2)
    assert greedy_match([[10.0, 10.0], [0.0, 9.0]]) == (19.0, 2)
    assert _greedy_pairs([[5.0, 5.0], [5.0, 5.0]]) == (10.0, 2)


def test_placement_validation_and_aspect():
    placement = DoodlePlacement("Menu", (0.25, 0.25, 0.75, 0.5))
    assert placement.aspect == pytest.approx(2.0)
    with pytest.raises(ValueError, match="non-empty"):
        DoodlePlacement("", (0, 0, 1, 1))
    with pytest.raises(ValueError, match="positive"):
        DoodlePlacement("Menu", (0.5, 0.2, 0.5, 0.8))
    # Tiny float noise outside the unit square is clamped, not rejected.
    clamped = DoodlePlacement("Menu", (-1e-12, 0.0, 0.5, 1.0 + 1e-12))
    assert clamped.bbox[0] == 0.0
    assert clamped.bbox[3] == 1.0


def test_ranking_config_validation():
    RankingConfig()
    with pytest.raises(ValueError, match="neighbor_decay"):
        RankingConfig(neighbor_decay=1.0)
    with pytest.raises(ValueError, match="unmatched_penalty"):
        RankingConfig(unmatched_penalty=0.0)
    with pytest.raises(ValueError, match="non-negative"):
        RankingConfig(presence_reward=-1.0)


def test_parse_class_map():
    parsed = parse_class_map("# comment\nmenu\tMenu\ngear\tSetting\n")
    assert parsed == {"menu": "Menu", "gear": "Setting"}
    with pytest.raises(ValueError, match="line 1"):
        parse_class_map("menu only\n")


def test_default_class_map_targets_are_known_classes():
    targets = set(default_class_map().values())
    assert targets <= set(default_doodle_classes())
    assert len(default_doodle_classes()) == 23


def _single_instance_corpus():
    # 1200x800 screen: tiles are 200x200 either way, so boxes align exactly.
    doc = screen_doc(
        "only",
        element(
            (0, 0, 1200, 800),
            children=[element((0, 0, 200, 200), element_class="Icon", icon_class="menu")],
        ),
        width=1200,
        height=800,
    )
    return Corpus.from_screens([parse_screen(doc)])


def test_perfect_placement_scores_thirteen():
    indexer = SketchIndexer().fit(_single_instance_corpus())
    placement = DoodlePlacement("Menu", (0.0, 0.0, 1 / 6, 1 / 4))
    scores = indexer.score_class_doodles("Menu", [placement])
    # presence 11 + position 1 (smoothed >= raw everywhere) + shape 1.
    assert scores == {"only": pytest.approx(13.0)}


def test_adjacent_tile_placement_uses_smoothing():
    indexer = SketchIndexer().fit(_single_instance_corpus())
    placement = DoodlePlacement("Menu", (1 / 6, 0.0, 2 / 6, 1 / 4))
    scores = indexer.score_class_doodles("Menu", [placement])
    # The neighbor tile carries decay * 1.0 of the instance's coverage.
    assert scores == {"only": pytest.approx(11.0 + 0.7 + 1.0)}


def test_far_placement_worse_than_near():
    indexer = SketchIndexer().fit(_single_instance_corpus())
    near = indexer.score_class_doodles(
        "Menu", [DoodlePlacement("Menu", (0.0, 0.0, 1 / 6, 1 / 4))]
    )["only"]
    far = indexer.score_class_doodles(
        "Menu", [DoodlePlacement("Menu", (5 / 6, 3 / 4, 1.0, 1.0))]
    )["only"]
    assert far < near
    assert far == pytest.approx(11.0 + 0.0 + 1.0)


def test_unmatched_placements_cost_penalty_and_clamp():
    indexer = SketchIndexer().fit(_single_instance_corpus())
    box = (0.0, 0.0, 1 / 6, 1 / 4)
    one = DoodlePlacement("Menu", box)
    elsewhere = DoodlePlacement("Menu", (4 / 6, 0.0, 5 / 6, 1 / 4))
    far_corner = DoodlePlacement("Menu", (5 / 6, 3 / 4, 1.0, 1.0))

    two = indexer.score_class_doodles("Menu", [one, elsewhere])
    # Best pair scores 13, the second placement goes unmatched: 13 - 12 = 1.
    assert two == {"only": pytest.approx(1.0)}

    three = indexer.score_class_doodles("Menu", [one, elsewhere, far_corner])
    # 13 - 24 clamps to zero, and the screen stays in the result map.
    assert three == {"only": 0.0}


def test_screens_without_instances_are_omitted():
    indexer = SketchIndexer().fit(_single_instance_corpus())
    assert indexer.score_class_doodles(
        "Star", [DoodlePlacement("Star", (0.4, 0.4, 0.6, 0.6))]
    ) == {}


def test_two_placements_two_instances_both_match():
    doc = screen_doc(
        "pair",
        element(
            (0, 0, 1200, 800),
            children=[
                element((0, 0, 200, 200), element_class="Icon", icon_class="menu"),
                element((1000, 600, 1200, 800), element_class="Icon", icon_class="menu"),
            ],
        ),
        width=1200,
        height=800,
    )
    indexer = SketchIndexer().fit(Corpus.from_screens([parse_screen(doc)]))
    placements = [
        DoodlePlacement("Menu", (0.0, 0.0, 1 / 6, 1 / 4)),
        DoodlePlacement("Menu", (5 / 6, 3 / 4, 1.0, 1.0)),
    ]
    scores = indexer.score_class_doodles("Menu", placements)
    assert scores == {"pair": pytest.approx(26.0)}


def test_scoring_agrees_with_plain_oracle(tiny_corpus):
    indexer = SketchIndexer().fit(tiny_corpus)
    cases = [
        ("Menu", [(0.0, 0.05, 0.15, 0.15)]),
        ("Menu", [(0.0, 0.05, 0.15, 0.15), (0.8, 0.05, 0.95, 0.15)]),
        ("Star", [(0.7, 0.85, 0.95, 0.98)]),
        ("Squiggle", [(0.1, 0.4, 0.7, 0.5)]),
    ]
    for icon_class, boxes in cases:
        placements = [DoodlePlacement(icon_class, b) for b in boxes]
        ours = indexer.score_class_doodles(icon_class, placements)
        for screen_id, value in ours.items():
            instances = [
                r.bbox for r in indexer.instances_[icon_class][screen_id]
            ]
            expected = doodle_screen_score([p.bbox for p in placements], instances)
            assert value == pytest.approx(expected, abs=1e-9), (icon_class, screen_id)


def test_icon_class_beats_element_class_in_mapping():
    doc = screen_doc(
        "s1",
        element(
            (0, 0, 1200, 800),
            children=[element((0, 0, 200, 200), element_class="Checkbox", icon_class="gear")],
        ),
        width=1200,
        height=800,
    )
    indexer = SketchIndexer().fit(Corpus.from_screens([parse_screen(doc)]))
    assert list(indexer.instances_["Setting"]) == ["s1"]
    assert indexer.instances_["Checkbox"] == {}


def test_unmapped_labels_counted(tiny_corpus):
    indexer = SketchIndexer().fit(tiny_corpus)
    # s004 carries "Text Field" and "Text Button", both outside the map;
    # s001/s002/s005 "Icon" wrappers resolve through their icon_class.
    assert indexer.skipped_label_count_ == 2
    menu_screens = sorted(indexer.instances_["Menu"])
    assert menu_screens == ["s001", "s002", "s005"]
    assert len(indexer.instances_["Menu"]["s005"]) == 2


def test_score_validation(tiny_corpus):
    indexer = SketchIndexer().fit(tiny_corpus)
    placement = DoodlePlacement("Menu", (0.1, 0.1, 0.3, 0.3))
    with pytest.raises(ValueError, match="unknown doodle class"):
        indexer.score_class_doodles("Dragon", [placement])
    with pytest.raises(ValueError, match="non-empty"):
        indexer.score_class_doodles("Menu", [])
    with pytest.raises(ValueError, match="does not match"):
        indexer.score_class_doodles("Star", [placement])
    with pytest.raises(NotFittedError):
        SketchIndexer().score_class_doodles("Menu", [placement])


def test_fit_rejects_class_map_with_unknown_targets(tiny_corpus):
    with pytest.raises(ValueError, match="Dragon"):
        SketchIndexer(class_map={"menu": "Dragon"}).fit(tiny_corpus)


def test_warm_precomputes_without_changing_scores(tiny_corpus):
    warmed = SketchIndexer().fit(tiny_corpus)
    warmed.warm()
    cold = SketchIndexer().fit(tiny_corpus)
    placement = DoodlePlacement("Menu", (0.0, 0.05, 0.15, 0.15))
    assert warmed.score_class_doodles("Menu", [placement]) == cold.score_class_doodles(
        "Menu", [placement]
    )


def test_save_load_roundtrip_and_rebuild_bytes(tiny_corpus, tmp_path):
    first = SketchIndexer().fit(tiny_corpus)
    second = SketchIndexer().fit(tiny_corpus)
    path_a = tmp_path / "a.idx"
    path_b = tmp_path / "b.idx"
    first.save(path_a)
    second.save(path_b)
    assert path_a.read_bytes() == path_b.read_bytes()

    loaded = SketchIndexer.load(path_a)
    assert loaded.grid_ == first.grid_
    assert loaded.classes_ == first.classes_
    assert loaded.skipped_label_count_ == first.skipped_label_count_
    placement = DoodlePlacement("Menu", (0.0, 0.05, 0.2, 0.2))
    assert loaded.score_class_doodles("Menu", [placement]) == pytest.approx(
        first.score_class_doodles("Menu", [placement])
    )


def test_grid_propagates_to_coverage(tiny_corpus):
    indexer = SketchIndexer(grid=TileGrid(cols=4, rows=6)).fit(tiny_corpus)
    record = indexer.instances_["Star"]["s001"][0]
    assert record.coverage.shape == (24,)
    assert record.coverage == pytest.approx(
        np.array(rect_tile_coverage(record.bbox, cols=4, rows=6)), abs=1e-12
    )
