"""Fuzzy matching, the deletion index, query parsing, and zoned scoring."""

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from conftest import element, screen_doc
from oracles import levenshtein_distance
from screenseek.corpus import ALL_QUADRANTS, Corpus, Quadrant, parse_screen
from screenseek.synonyms import SynonymTable
from screenseek.textindex import (
    POSITIONAL_PREFIXES,
    DeletionIndex,
    MatchWeights,
    TextIndexer,
    TextQuery,
    fuzzy_match,
    levenshtein_within,
    parse_query_texts,
    parse_text_query,
)

WORDS = st.text(alphabet="abcdef", min_size=0, max_size=8)


@pytest.mark.parametrize(
    ("a", "b", "within_one"),
    [
        ("settiing", "setting", True),   # insertion
        ("seting", "setting", True),     # deletion
        ("setling", "setting", True),    # substitution
        ("setting", "setting", True),
        ("sting", "setting", False),     # distance 2
        ("settiingg", "setting", False),
        ("", "a", True),
        ("", "ab", False),
        ("abc", "cba", False),
    ],
)
def test_fuzzy_match_frozen_cases(a, b, within_one):
    assert fuzzy_match(a, b) is within_one
    assert fuzzy_match(b, a) is within_one


@given(WORDS, WORDS, st.integers(min_value=0, max_value=3))
def test_levenshtein_within_matches_full_dp(a, b, k):
    assert levenshtein_within(a, b, k) == (levenshtein_distance(a, b) <= k)


@given(st.lists(WORDS, unique=True, min_size=0, max_size=30), WORDS)
def test_deletion_index_equals_brute_force(vocab, query):
    index = DeletionIndex(vocab)
    for k in (0, 1, 2):
        expected = sorted(t for t in vocab if levenshtein_distance(query, t) <= k)
        assert index.matches(query, k) == expected


def test_deletion_index_candidates_cover_distance_one():
    index = DeletionIndex(["setting", "sitting", "settings", "tab"])
    candidates = index.candidates("setting")
    assert "setting" in candidates
    assert "sitting" in candidates
    assert "settings" in candidates
    assert "tab" not in candidates


def test_weights_validation():
    MatchWeights()
    with pytest.raises(ValueError, match="exact > synonym"):
        MatchWeights(exact=4.0, synonym=4.0)
    with pytest.raises(ValueError, match="exact > synonym"):
        MatchWeights(exact=10.0, synonym=0.0)
    with pytest.raises(ValueError, match="max_edit_distance"):
        MatchWeights(max_edit_distance=-1)


def test_text_query_validation():
    with pytest.raises(ValueError, match="non-empty"):
        TextQuery(term="")
    with pytest.raises(ValueError, match="zones"):
        TextQuery(term="x", zones=frozenset())


CORNER_CASES = {
    "tl": {Quadrant.TOP_LEFT},
    "lt": {Quadrant.TOP_LEFT},
    "tr": {Quadrant.TOP_RIGHT},
    "rt": {Quadrant.TOP_RIGHT},
    "bl": {Quadrant.BOTTOM_LEFT},
    "lb": {Quadrant.BOTTOM_LEFT},
    "br": {Quadrant.BOTTOM_RIGHT},
    "rb": {Quadrant.BOTTOM_RIGHT},
    "t": {Quadrant.TOP_LEFT, Quadrant.TOP_RIGHT},
    "b": {Quadrant.BOTTOM_LEFT, Quadrant.BOTTOM_RIGHT},
    "l": {Quadrant.TOP_LEFT, Quadrant.BOTTOM_LEFT},
    "r": {Quadrant.TOP_RIGHT, Quadrant.BOTTOM_RIGHT},
}


def test_all_twelve_prefixes():
    assert set(POSITIONAL_PREFIXES) == set(CORNER_CASES)
    for prefix, zones in CORNER_CASES.items():
        parsed = parse_text_query(f"{prefix}:word")
        assert parsed.zones == frozenset(zones), prefix
        assert parsed.term == "word"


def test_parse_text_query_details():
    assert parse_text_query("Settings").zones == ALL_QUADRANTS
    assert parse_text_query("Settings").term == "setting"
    assert parse_text_query("TL:Stories").zones == frozenset({Quadrant.TOP_LEFT})
    assert parse_text_query("TL:Stories").term == "story"
    # Unknown prefixes are part of the term, not a zone restriction.
    assert parse_text_query("xy:word").term == "xy:word"
    assert parse_text_query("xy:word").zones == ALL_QUADRANTS
    with pytest.raises(ValueError, match="empty"):
        parse_text_query("  ")
    with pytest.raises(ValueError, match="whitespace"):
        parse_text_query("two words")
    with pytest.raises(ValueError, match="no term"):
        parse_text_query("tl:")


def test_parse_query_texts_attaches_bare_prefix():
    parsed = parse_query_texts("tl: Editor")
    assert [(q.term, q.zones) for q in parsed] == [
        ("editor", frozenset({Quadrant.TOP_LEFT}))
    ]


def test_parse_query_texts_mixed_terms():
    parsed = parse_query_texts("tr:save done b: photos")
    # "done" lemmatizes to "do"; pipeline runs before zones attach.
    assert [(q.term, q.zones) for q in parsed] == [
        ("save", frozenset({Quadrant.TOP_RIGHT})),
        ("do", ALL_QUADRANTS),
        ("photo", frozenset({Quadrant.BOTTOM_LEFT, Quadrant.BOTTOM_RIGHT})),
    ]


def test_parse_query_texts_separators_split_chunks():
    parsed = parse_query_texts("tl:save,done")
    assert [(q.term, q.zones) for q in parsed] == [
        ("save", frozenset({Quadrant.TOP_LEFT})),
        ("do", ALL_QUADRANTS),
    ]


def test_parse_query_texts_trailing_prefix_rejected():
    with pytest.raises(ValueError, match="no term"):
        parse_query_texts("settings tl:")
    assert parse_query_texts("") == []


@pytest.fixture(scope="module")
def indexed(tiny_corpus):
    table = SynonymTable(entries={"option": ("setting",)})
    return TextIndexer(synonyms=table).fit(tiny_corpus)


def test_score_exact_synonym_and_zones(indexed):
    # "Settings" on s001 (TL) and s006 (BL); "Options" on s002 reachable
    # only through the synonym row option -> setting.
    everywhere = indexed.score(TextQuery("setting"))
    assert everywhere == {"s001": 10.0, "s006": 10.0, "s002": 4.0}

    top_left = indexed.score(TextQuery("setting", frozenset({Quadrant.TOP_LEFT})))
    assert top_left == {"s001": 10.0, "s002": 4.0}

    bottom = indexed.score(
        TextQuery("setting", frozenset({Quadrant.BOTTOM_LEFT, Quadrant.BOTTOM_RIGHT}))
    )
    assert bottom == {"s006": 10.0}


def test_score_fuzzy_counts_as_exact(indexed):
    assert indexed.score(TextQuery("seting")) == {
        "s001": 10.0,
        "s006": 10.0,
        "s002": 4.0,
    }
    # Two corruptions push the term out of reach of "setting"; the synonym
    # row keeps s002 alive because "seing" is not within one of "setting"
    # either, so everything drops out.
    assert indexed.score(TextQuery("seing")) == {}


def test_score_element_descriptions_and_slash_terms(indexed):
    menus = indexed.score(TextQuery("menu"))
    assert menus == {"s001": 10.0, "s002": 10.0, "s005": 10.0}
    assert indexed.score(TextQuery("on/off")) == {"s006": 10.0}


def test_score_weight_override(indexed):
    scores = indexed.score(
        TextQuery("setting"), MatchWeights(exact=2.0, synonym=1.0)
    )
    assert scores == {"s001": 2.0, "s006": 2.0, "s002": 1.0}


def test_exact_beats_synonym_on_same_screen():
    doc = screen_doc(
        "mix",
        element(
            (0, 0, 1000, 1000),
            children=[element((10, 10, 400, 80), text="Settings options", element_class="Text")],
        ),
        width=1000,
        height=1000,
    )
    corpus = Corpus.from_screens([parse_screen(doc)])
    table = SynonymTable(entries={"option": ("setting",)})
    indexer = TextIndexer(synonyms=table).fit(corpus)
    assert indexer.score(TextQuery("setting")) == {"mix": 10.0}


def test_postings_sorted_and_term_frequency():
    doc = screen_doc(
        "s1",
        element(
            (0, 0, 1000, 1000),
            children=[
                element((10, 10, 90, 90), element_class="Icon", icon_class="menu"),
                element((110, 10, 190, 90), element_class="Icon", icon_class="menu"),
                element((600, 600, 690, 690), element_class="Icon", icon_class="menu"),
            ],
        ),
        width=1000,
        height=1000,
    )
    indexer = TextIndexer().fit(Corpus.from_screens([parse_screen(doc)]))
    rows = indexer.postings("menu")
    assert [(p.screen_id, p.quadrant, p.tf) for p in rows] == [
        ("s1", Quadrant.BOTTOM_RIGHT, 1),
        ("s1", Quadrant.TOP_LEFT, 2),
    ]
    assert indexer.postings("absent") == []


def test_vocabulary_is_lemmatized(indexed):
    assert "setting" in indexed.vocabulary_
    assert "settings" not in indexed.vocabulary_
    assert "share" in indexed.vocabulary_  # from "Shared albums"
    assert "menu" in indexed.vocabulary_


def test_unfitted_indexer_refuses_to_score():
    with pytest.raises(NotFittedError):
        TextIndexer().score(TextQuery("x"))


def test_estimator_params_roundtrip():
    weights = MatchWeights(exact=8.0, synonym=2.0)
    indexer = TextIndexer(weights=weights)
    assert indexer.get_params()["weights"] is weights
    cloned = clone(indexer)
    assert cloned.get_params()["weights"] == weights


def test_save_load_roundtrip_and_rebuild_bytes(tiny_corpus, tmp_path):
    table = SynonymTable(entries={"option": ("setting",)})
    first = TextIndexer(synonyms=table).fit(tiny_corpus)
    second = TextIndexer(synonyms=table).fit(tiny_corpus)
    path_a = tmp_path / "a.idx"
    path_b = tmp_path / "b.idx"
    first.save(path_a)
    second.save(path_b)
    assert path_a.read_bytes() == path_b.read_bytes()

    loaded = TextIndexer.load(path_a)
    assert loaded.vocabulary_ == first.vocabulary_
    assert loaded.term_synonyms_ == first.term_synonyms_
    for term in ("setting", "seting", "menu", "on/off"):
        assert loaded.score(TextQuery(term)) == first.score(TextQuery(term))
    # The payload embeds the lexicons, so query-side lemmatization survives.
    assert loaded.pipeline_.stopwords == first.pipeline_.stopwords
