"""Synthetic corpus and doodle generators: determinism and validity."""

from __future__ import annotations

import numpy as np
import pytest

from screenseek.corpus import load_corpus
from screenseek.sketchindex import SketchIndexer, default_doodle_classes
from screenseek.synth import (
    doodle_classes,
    generate_doodle,
    generate_doodles,
    generate_screens,
    read_doodles,
    screen_to_doc,
    write_corpus,
    write_doodles,
)


class TestScreens:
    def test_deterministic_by_seed(self):
        a = generate_screens(15, seed=5)
        b = generate_screens(15, seed=5)
        assert [screen_to_doc(s) for s in a] == [screen_to_doc(s) for s in b]

    def test_seeds_differ(self):
        a = generate_screens(15, seed=5)
        b = generate_screens(15, seed=6)
        assert [screen_to_doc(s) for s in a] != [screen_to_doc(s) for s in b]

    def test_ids_are_unique_and_ordered(self):
        screens = generate_screens(12, seed=1)
        assert [s.id for s in screens] == [f"s{i:06d}" for i in range(12)]

    def test_written_corpus_loads_cleanly(self, tmp_path):
        screens = generate_screens(30, seed=2)
        write_corpus(screens, tmp_path)
        assert (tmp_path / "element_classes.txt").exists()
        assert len(list(tmp_path.glob("*.screen.json"))) == 30

        corpus = load_corpus(tmp_path)
        assert list(corpus.ids) == [s.id for s in screens]
        assert all(s.dropped_element_count == 0 for s in corpus.screens)

    def test_written_files_are_deterministic(self, tmp_path):
        for name in ("a", "b"):
            write_corpus(generate_screens(6, seed=3), tmp_path / name)
        for file in (tmp_path / "a").iterdir():
            assert file.read_bytes() == (tmp_path / "b" / file.name).read_bytes()

    def test_screens_carry_mappable_icons(self):
        corpus_screens = generate_screens(40, seed=4)
        from screenseek.corpus import Corpus

        indexer = SketchIndexer().fit(Corpus.from_screens(corpus_screens))
        populated = [c for c, by_screen in indexer.instances_.items() if by_screen]
        assert len(populated) >= 5


class TestDoodles:
    def test_class_list_matches_packaged_vocabulary(self):
        assert doodle_classes() == default_doodle_classes()
        assert len(doodle_classes()) == 23

    def test_unknown_class_rejected(self):
        with pytest.raises(ValueError, match="no doodle shape"):
            generate_doodle("Dragon", np.random.default_rng(0))

    def test_strokes_stay_in_unit_square(self):
        rng = np.random.default_rng(7)
        for icon_class in doodle_classes():
            for _ in range(3):
                sketch = generate_doodle(icon_class, rng)
                assert len(sketch) >= 1
                for stroke in sketch:
                    assert stroke.ndim == 2 and stroke.shape[1] == 2
                    assert stroke.min() >= 0.0 and stroke.max() <= 1.0

    def test_generation_is_deterministic(self):
        a = generate_doodles(("Menu", "Star"), per_class=3, seed=9)
        b = generate_doodles(("Menu", "Star"), per_class=3, seed=9)
        assert [label for _, label in a] == ["Menu"] * 3 + ["Star"] * 3
        for (xa, la), (xb, lb) in zip(a, b):
            assert la == lb
            assert all(np.array_equal(sa, sb) for sa, sb in zip(xa, xb))

    def test_jsonl_roundtrip(self, tmp_path):
        labeled = generate_doodles(("Play", "Search"), per_class=2, seed=11)
        path = tmp_path / "doodles.jsonl"
        write_doodles(labeled, path)
        assert len(path.read_text("utf-8").splitlines()) == 4

        loaded = read_doodles(path)
        assert [label for _, label in loaded] == [label for _, label in labeled]
        for (xa, _), (xb, _) in zip(loaded, labeled):
            for sa, sb in zip(xa, xb):
                np.testing.assert_allclose(sa, sb)

    def test_written_doodles_are_deterministic(self, tmp_path):
        for name in ("a.jsonl", "b.jsonl"):
            write_doodles(generate_doodles(("Menu",), per_class=2, seed=13), tmp_path / name)
        assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()

    def test_read_doodles_reports_bad_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"icon_class":"Menu","strokes":[[[0.1,0.2]]]}\n{broken\n', "utf-8")
        with pytest.raises(ValueError, match="line 2"):
            read_doodles(path)
