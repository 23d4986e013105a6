"""Quadrant-zoned inverted text index with edit-distance-1 fuzzy matching.

Every indexed screen contributes lemmatized terms tagged with the quadrant of
the originating element and the pipeline kind.  A query term scores a screen
by the best match found in the requested zones: a full weight when the term
is within the edit-distance budget of an indexed term, a reduced weight when
it is within budget of some indexed term's synonym, and zero otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .corpus import ALL_QUADRANTS, ContentKind, Corpus, Quadrant
from .storage import load_artifact, save_artifact
from .synonyms import SynonymTable
from .textpipe import TextPipeline

_ARTIFACT_KIND = "text-index"

# Positional prefixes: corners narrow to one quadrant, edges to two, and an
# unprefixed term searches the whole screen.  Matching is case-insensitive
# and only a prefix at the very start of a chunk counts.
POSITIONAL_PREFIXES: dict[str, frozenset[Quadrant]] = {
    "tl": frozenset({Quadrant.TOP_LEFT}),
    "lt": frozenset({Quadrant.TOP_LEFT}),
    "tr": frozenset({Quadrant.TOP_RIGHT}),
    "rt": frozenset({Quadrant.TOP_RIGHT}),
    "bl": frozenset({Quadrant.BOTTOM_LEFT}),
    "lb": frozenset({Quadrant.BOTTOM_LEFT}),
    "br": frozenset({Quadrant.BOTTOM_RIGHT}),
    "rb": frozenset({Quadrant.BOTTOM_RIGHT}),
    "t": frozenset({Quadrant.TOP_LEFT, Quadrant.TOP_RIGHT}),
    "b": frozenset({Quadrant.BOTTOM_LEFT, Quadrant.BOTTOM_RIGHT}),
    "l": frozenset({Quadrant.TOP_LEFT, Quadrant.BOTTOM_LEFT}),
    "r": frozenset({Quadrant.TOP_RIGHT, Quadrant.BOTTOM_RIGHT}),
}


@dataclass(frozen=True)
class MatchWeights:
    """Scoring weights; an exact-or-fuzzy hit must outweigh a synonym hit."""

    exact: float = 10.0
    synonym: float = 4.0
    max_edit_distance: int = 1

    def __post_init__(self) -> None:
        if not self.exact > self.synonym > 0:
            raise ValueError("weights must satisfy exact > synonym > 0")
        if not isinstance(self.max_edit_distance, int) or self.max_edit_distance < 0:
            raise ValueError("max_edit_distance must be a non-negative integer")


@dataclass(frozen=True)
class TextQuery:
    """One lemmatized query term restricted to a set of screen zones."""

    term: str
    zones: frozenset[Quadrant] = field(default=ALL_QUADRANTS)

    def __post_init__(self) -> None:
        if not self.term:
            raise ValueError("query term must be non-empty")
        if not self.zones or not self.zones <= ALL_QUADRANTS:
            raise ValueError("zones must be a non-empty set of quadrants")


@dataclass(frozen=True, slots=True)
class Posting:
    term: str
    screen_id: str
    quadrant: Quadrant
    kind: ContentKind
    tf: int


def levenshtein_within(a: str, b: str, k: int) -> bool:
    """True when edit distance (insert, delete, substitute) is at most k."""
    if abs(len(a) - len(b)) > k:
        return False
    if a == b:
        return True
    previous = list(range(len(b) + 1))
    for i in range(1, len(a) + 1):
        current = [i] + [0] * len(b)
        row_min = i
        for j in range(1, len(b) + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            current[j] = min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost)
            row_min = min(row_min, current[j])
        if row_min > k:
            return False
        previous = current
    return previous[-1] <= k


def fuzzy_match(a: str, b: str, k: int = 1) -> bool:
    """Edit-distance gate used for query-term matching."""
    return levenshtein_within(a, b, k)


class DeletionIndex:
    """Constant-time candidate lookup for distance-1 matches.

    Keys are each term and every single-character deletion of it; two strings
    within edit distance 1 always share such a key, so candidate sets stay
    tiny and exact verification does the rest.
    """

    __slots__ = ("_terms", "_buckets")

    def __init__(self, terms: list[str] | tuple[str, ...]) -> None:
        self._terms: tuple[str, ...] = tuple(terms)
        buckets: dict[str, list[int]] = {}
        for idx, term in enumerate(self._terms):
            for key in self._variants(term):
                bucket = buckets.setdefault(key, [])
                if not bucket or bucket[-1] != idx:
                    bucket.append(idx)
        self._buckets = buckets

    @staticmethod
    def _variants(term: str):
        yield term
        for i in range(len(term)):
            yield term[:i] + term[i + 1 :]

    def candidates(self, query: str) -> list[str]:
        found: set[int] = set()
        for key in self._variants(query):
            found.update(self._buckets.get(key, ()))
        return sorted(self._terms[i] for i in found)

    def matches(self, query: str, k: int = 1) -> list[str]:
        """Terms within edit distance k of the query, sorted."""
        if k == 0:
            bucket = self._buckets.get(query, ())
            return sorted(self._terms[i] for i in bucket if self._terms[i] == query)
        if k == 1:
            return [t for t in self.candidates(query) if levenshtein_within(query, t, 1)]
        # Larger budgets are rare; fall back to a full scan.
        return [t for t in sorted(set(self._terms)) if levenshtein_within(query, t, k)]


_DEFAULT_PIPELINE: TextPipeline | None = None


def _default_pipeline() -> TextPipeline:
    global _DEFAULT_PIPELINE
    if _DEFAULT_PIPELINE is None:
        _DEFAULT_PIPELINE = TextPipeline()
    return _DEFAULT_PIPELINE


def parse_text_query(chunk: str, pipeline: TextPipeline | None = None) -> TextQuery:
    """Parse one whitespace-free query chunk like ``tr:settings``.

    The term is lowercased and lemmatized so it matches index terms.
    """
    pipeline = pipeline or _default_pipeline()
    chunk = chunk.strip()
    if not chunk:
        raise ValueError("empty query chunk")
    if any(ch.isspace() for ch in chunk):
        raise ValueError(f"query chunk {chunk!r} must not contain whitespace")
    head, sep, tail = chunk.partition(":")
    if sep and head.lower() in POSITIONAL_PREFIXES:
        if not tail:
            raise ValueError(f"positional prefix {head!r} has no term")
        return TextQuery(term=pipeline.lemma(tail), zones=POSITIONAL_PREFIXES[head.lower()])
    return TextQuery(term=pipeline.lemma(chunk), zones=ALL_QUADRANTS)


def parse_query_texts(raw: str, pipeline: TextPipeline | None = None) -> list[TextQuery]:
    """Parse a whole text query string into positioned terms.

    Tokenization matches the indexing side, so ``tl: Editor`` arrives as the
    tokens ``tl:`` and ``Editor``; a bare prefix attaches to the following
    token.
    """
    from .textpipe import tokenize

    pipeline = pipeline or _default_pipeline()
    queries: list[TextQuery] = []
    pending: frozenset[Quadrant] | None = None
    for token in tokenize(raw):
        head, sep, tail = token.partition(":")
        if sep and head.lower() in POSITIONAL_PREFIXES:
            if not tail:
                pending = POSITIONAL_PREFIXES[head.lower()]
                continue
            queries.append(
                TextQuery(term=pipeline.lemma(tail), zones=POSITIONAL_PREFIXES[head.lower()])
            )
            pending = None
            continue
        zones = pending if pending is not None else ALL_QUADRANTS
        queries.append(TextQuery(term=pipeline.lemma(token), zones=zones))
        pending = None
    if pending is not None:
        raise ValueError("positional prefix with no term")
    return queries


class TextIndexer(BaseEstimator):
    """Builds and queries the zoned inverted index for a screen corpus.

    Parameters
    ----------
    pipeline : TextPipeline, optional
        Tokenization and lemmatization configuration; defaults to the
        packaged lexicons.
    synonyms : SynonymTable, optional
        Term synonyms for reduced-weight matching; defaults to none.
    weights : MatchWeights, optional
        Scoring weights; defaults to exact 10, synonym 4, distance 1.
    """

    def __init__(
        self,
        pipeline: TextPipeline | None = None,
        synonyms: SynonymTable | None = None,
        weights: MatchWeights | None = None,
    ) -> None:
        self.pipeline = pipeline
        self.synonyms = synonyms
        self.weights = weights

    def fit(self, corpus: Corpus, y: object = None) -> "TextIndexer":
        """Index every content of every screen in the corpus."""
        pipeline = self.pipeline or _default_pipeline()
        synonyms = self.synonyms or SynonymTable.empty()
        weights = self.weights or MatchWeights()

        # term -> quadrant -> screen_id -> kind -> tf
        postings: dict[str, dict[Quadrant, dict[str, dict[ContentKind, int]]]] = {}
        for screen in corpus.screens:
            for content in corpus.contents[screen.id]:
                for token in pipeline.run(content.raw_text, content.kind):
                    by_zone = postings.setdefault(token.lemma, {})
                    by_screen = by_zone.setdefault(content.quadrant, {})
                    by_kind = by_screen.setdefault(content.screen_id, {})
                    by_kind[content.kind] = by_kind.get(content.kind, 0) + 1

        self.pipeline_ = pipeline
        self.weights_ = weights
        self.postings_ = postings
        self.vocabulary_ = tuple(sorted(postings))
        self.n_screens_ = len(corpus)

        reverse: dict[str, set[str]] = {}
        table: dict[str, tuple[str, ...]] = {}
        for term in self.vocabulary_:
            syns = synonyms.get(term)
            if syns:
                table[term] = syns
                for syn in syns:
                    reverse.setdefault(syn, set()).add(term)
        self.term_synonyms_ = table
        self.reverse_synonyms_ = {s: tuple(sorted(ts)) for s, ts in reverse.items()}

        self._term_lookup = DeletionIndex(self.vocabulary_)
        self._synonym_lookup = DeletionIndex(sorted(self.reverse_synonyms_))
        return self

    def postings(self, term: str) -> list[Posting]:
        """All postings of an exact term, sorted for reproducibility."""
        check_is_fitted(self, "postings_")
        out = [
            Posting(term, screen_id, quadrant, kind, tf)
            for quadrant, by_screen in self.postings_.get(term, {}).items()
            for screen_id, by_kind in by_screen.items()
            for kind, tf in by_kind.items()
        ]
        out.sort(key=lambda p: (p.screen_id, p.quadrant.value, p.kind.value))
        return out

    def score(self, query: TextQuery, weights: MatchWeights | None = None) -> dict[str, float]:
        """Best match weight per screen for one positioned query term.

        A screen scores ``weights.exact`` when the query term is within the
        edit budget of an indexed term occurring in a requested zone,
        ``weights.synonym`` when it only reaches an indexed term through
        that term's synonym list, and is absent otherwise.
        """
        check_is_fitted(self, "postings_")
        w = weights or self.weights_
        k = w.max_edit_distance

        result: dict[str, float] = {}
        for term in self._term_lookup.matches(query.term, k):
            by_zone = self.postings_[term]
            for zone in query.zones:
                for screen_id in by_zone.get(zone, ()):
                    result[screen_id] = w.exact

        hit_terms: set[str] = set()
        for syn in self._synonym_lookup.matches(query.term, k):
            hit_terms.update(self.reverse_synonyms_[syn])
        for term in hit_terms:
            by_zone = self.postings_[term]
            for zone in query.zones:
                for screen_id in by_zone.get(zone, ()):
                    if screen_id not in result:
                        result[screen_id] = w.synonym
        return result

    def save(self, path: str | Path) -> None:
        check_is_fitted(self, "postings_")
        save_artifact(path, _ARTIFACT_KIND, self._to_payload())

    def _to_payload(self) -> dict:
        rows = []
        for term in self.vocabulary_:
            for quadrant in sorted(self.postings_[term], key=lambda q: q.value):
                for screen_id in sorted(self.postings_[term][quadrant]):
                    by_kind = self.postings_[term][quadrant][screen_id]
                    for kind in sorted(by_kind, key=lambda c: c.value):
                        rows.append([term, quadrant.value, screen_id, kind.value, by_kind[kind]])
        return {
            "weights": {
                "exact": self.weights_.exact,
                "synonym": self.weights_.synonym,
                "max_edit_distance": self.weights_.max_edit_distance,
            },
            "postings": rows,
            "synonyms": [[t, list(s)] for t, s in sorted(self.term_synonyms_.items())],
            "n_screens": self.n_screens_,
            "lexicons": {
                "stopwords": sorted(self.pipeline_.stopwords),
                "ne_lexicon": sorted(self.pipeline_.ne_lexicon),
                "exceptions": [[k, v] for k, v in sorted(self.pipeline_.exceptions.items())],
            },
        }

    @classmethod
    def load(cls, path: str | Path) -> "TextIndexer":
        return cls._from_payload(load_artifact(path, _ARTIFACT_KIND))

    @classmethod
    def _from_payload(cls, payload: dict) -> "TextIndexer":
        lex = payload["lexicons"]
        pipeline = TextPipeline(
            stopwords=frozenset(lex["stopwords"]),
            ne_lexicon=frozenset(lex["ne_lexicon"]),
            exceptions=dict(lex["exceptions"]),
        )
        weights = MatchWeights(**payload["weights"])
        synonyms = SynonymTable(entries={t: tuple(s) for t, s in payload["synonyms"]})

        indexer = cls(pipeline=pipeline, synonyms=synonyms, weights=weights)
        postings: dict[str, dict[Quadrant, dict[str, dict[ContentKind, int]]]] = {}
        for term, quadrant, screen_id, kind, tf in payload["postings"]:
            by_zone = postings.setdefault(term, {})
            by_screen = by_zone.setdefault(Quadrant(quadrant), {})
            by_kind = by_screen.setdefault(screen_id, {})
            by_kind[ContentKind(kind)] = tf

        indexer.pipeline_ = pipeline
        indexer.weights_ = weights
        indexer.postings_ = postings
        indexer.vocabulary_ = tuple(sorted(postings))
        indexer.n_screens_ = payload["n_screens"]
        indexer.term_synonyms_ = {t: tuple(s) for t, s in payload["synonyms"]}
        reverse: dict[str, set[str]] = {}
        for term, syns in indexer.term_synonyms_.items():
            for syn in syns:
                reverse.setdefault(syn, set()).add(term)
        indexer.reverse_synonyms_ = {s: tuple(sorted(ts)) for s, ts in reverse.items()}
        indexer._term_lookup = DeletionIndex(indexer.vocabulary_)
        indexer._synonym_lookup = DeletionIndex(sorted(indexer.reverse_synonyms_))
        return indexer
