"""Offline synonym table construction from embedding neighbors and thesauri.

For each vocabulary word the candidates are the ten nearest neighbors by
cosine similarity from every embedding model that knows the word, with
negative similarities clamped to zero.  Candidate scores are summed across
models, ties are broken by thesaurus membership (first thesaurus, then the
second, then lexicographically), and the top three survive.  Words absent
from every model fall back to thesaurus lookups in file order.  Named
entities never get synonyms.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class SynonymError(ValueError):
    """Malformed embedding, thesaurus, or synonym table input."""


@dataclass
class EmbeddingModel:
    """Dense word vectors with a fixed dimensionality."""

    name: str
    dim: int
    words: tuple[str, ...]
    matrix: np.ndarray  # shape (len(words), dim), row order matches words

    def __post_init__(self) -> None:
        self._row = {w: i for i, w in enumerate(self.words)}
        self._norms = np.linalg.norm(self.matrix, axis=1)

    def __contains__(self, word: str) -> bool:
        return word in self._row

    def vector(self, word: str) -> np.ndarray:
        return self.matrix[self._row[word]]

    @classmethod
    def parse(cls, raw: str, name: str = "model") -> "EmbeddingModel":
        """Parse ``word v1 .. vd`` lines, one word per line."""
        vectors: dict[str, np.ndarray] = {}
        dim: int | None = None
        for n, line in enumerate(raw.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) < 2:
                raise SynonymError(f"{name} line {n}: expected word followed by numbers")
            word = parts[0].lower()
            try:
                values = np.array([float(p) for p in parts[1:]], dtype=np.float64)
            except ValueError as exc:
                raise SynonymError(f"{name} line {n}: bad number ({exc})") from exc
            if dim is None:
                dim = len(values)
            elif len(values) != dim:
                raise SynonymError(
                    f"{name} line {n}: dimensionality {len(values)} != {dim}"
                )
            if not np.all(np.isfinite(values)) or not np.any(values):
                raise SynonymError(f"{name} line {n}: vector must be finite and non-zero")
            if word in vectors:
                raise SynonymError(f"{name} line {n}: duplicate word {word!r}")
            vectors[word] = values
        if not vectors:
            raise SynonymError(f"{name}: no vectors")
        words = tuple(sorted(vectors))
        matrix = np.stack([vectors[w] for w in words])
        return cls(name=name, dim=int(dim or 0), words=words, matrix=matrix)

    @classmethod
    def load(cls, path: str | Path, name: str | None = None) -> "EmbeddingModel":
        p = Path(path)
        return cls.parse(p.read_text("utf-8"), name=name or p.stem)


@dataclass
class Thesaurus:
    """Flat synonym lists; membership covers entry words and their synonyms."""

    name: str
    entries: dict[str, tuple[str, ...]]

    def __post_init__(self) -> None:
        members = set(self.entries)
        for syns in self.entries.values():
            members.update(syns)
        self.members = frozenset(members)

    def __contains__(self, word: str) -> bool:
        return word in self.members

    def synonyms(self, word: str) -> tuple[str, ...]:
        return self.entries.get(word, ())

    @classmethod
    def parse(cls, raw: str, name: str = "thesaurus") -> "Thesaurus":
        """Parse ``word: syn1, syn2`` lines."""
        entries: dict[str, tuple[str, ...]] = {}
        for n, line in enumerate(raw.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            head, sep, tail = line.partition(":")
            if not sep or not head.strip():
                raise SynonymError(f"{name} line {n}: expected 'word: syn1, syn2'")
            word = head.strip().lower()
            syns = tuple(s.strip().lower() for s in tail.split(",") if s.strip())
            entries[word] = syns
        return cls(name=name, entries=entries)

    @classmethod
    def load(cls, path: str | Path, name: str | None = None) -> "Thesaurus":
        p = Path(path)
        return cls.parse(p.read_text("utf-8"), name=name or p.stem)


def top_similar(
    model: EmbeddingModel, word: str, k: int = 10
) -> list[tuple[str, float]] | None:
    """Top-k cosine neighbors of ``word`` in one model, or None when absent.

    Negative similarities clamp to zero; ties order lexicographically.
    """
    if word not in model:
        return None
    v = model.vector(word)
    norm_v = float(np.linalg.norm(v))
    sims = (model.matrix @ v) / (model._norms * norm_v)
    np.maximum(sims, 0.0, out=sims)
    scored = [
        (w, float(s)) for w, s in zip(model.words, sims) if w != word
    ]
    scored.sort(key=lambda ws: (-ws[1], ws[0]))
    return scored[:k]


def lexical_tiebreak(
    word: str,
    thesaurus1: Thesaurus | None = None,
    thesaurus2: Thesaurus | None = None,
) -> tuple[bool, bool, str]:
    """Sort key for equal-score candidates: known words first, then a-z."""
    in1 = thesaurus1 is not None and word in thesaurus1
    in2 = thesaurus2 is not None and word in thesaurus2
    return (not in1, not in2, word)


def merge_candidates(
    candidate_sets: list[list[tuple[str, float]]],
    thesaurus1: Thesaurus | None = None,
    thesaurus2: Thesaurus | None = None,
) -> list[tuple[str, float]]:
    """Sum per-model scores, order by score descending with lexical tiebreak."""
    totals: dict[str, float] = defaultdict(float)
    for candidates in candidate_sets:
        for word, score in candidates:
            totals[word] += score
    return sorted(
        totals.items(),
        key=lambda kv: ((-kv[1],) + lexical_tiebreak(kv[0], thesaurus1, thesaurus2)),
    )


def synonyms_for(
    word: str,
    models: list[EmbeddingModel],
    thesauri: tuple[Thesaurus, ...] = (),
    ne_lexicon: frozenset[str] | None = None,
    limit: int = 3,
) -> list[str]:
    """Up to ``limit`` synonyms for one word; empty for named entities."""
    word = word.lower()
    if ne_lexicon and word in ne_lexicon:
        return []
    t1 = thesauri[0] if len(thesauri) > 0 else None
    t2 = thesauri[1] if len(thesauri) > 1 else None
    if any(word in m for m in models):
        sets = [top_similar(m, word) or [] for m in models]
        merged = merge_candidates(sets, t1, t2)
        return [w for w, _ in merged if w != word][:limit]
    # Unknown to every model: thesaurus lookups in file order.
    out: list[str] = []
    for thesaurus in thesauri:
        for candidate in thesaurus.synonyms(word):
            if candidate != word and candidate not in out:
                out.append(candidate)
            if len(out) == limit:
                return out
    return out


@dataclass
class SynonymTable:
    """Word to synonyms mapping; at most three per word, never the word itself."""

    entries: dict[str, tuple[str, ...]]

    def get(self, word: str) -> tuple[str, ...]:
        return self.entries.get(word, ())

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def empty(cls) -> "SynonymTable":
        return cls(entries={})

    def render(self) -> str:
        """Deterministic text form: sorted ``word<TAB>syn1,syn2,syn3`` lines."""
        lines = [f"{w}\t{','.join(self.entries[w])}" for w in sorted(self.entries)]
        return "\n".join(lines) + ("\n" if lines else "")

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.render(), "utf-8")

    @classmethod
    def parse(cls, raw: str) -> "SynonymTable":
        entries: dict[str, tuple[str, ...]] = {}
        for n, line in enumerate(raw.splitlines(), start=1):
            if not line.strip() or line.startswith("#"):
                continue
            word, sep, tail = line.partition("\t")
            if not sep or not word:
                raise SynonymError(f"synonym table line {n}: expected word<TAB>synonyms")
            syns = tuple(s for s in tail.strip().split(",") if s)
            if word in syns:
                raise SynonymError(f"synonym table line {n}: {word!r} lists itself")
            if len(syns) > 3:
                raise SynonymError(f"synonym table line {n}: more than three synonyms")
            entries[word.lower()] = syns
        return cls(entries=entries)

    @classmethod
    def load(cls, path: str | Path) -> "SynonymTable":
        return cls.parse(Path(path).read_text("utf-8"))


def build_synonym_table(
    vocabulary: list[str] | set[str],
    models: list[EmbeddingModel],
    thesauri: tuple[Thesaurus, ...] = (),
    ne_lexicon: frozenset[str] | None = None,
) -> SynonymTable:
    """Synonym rows for every vocabulary word, deterministic across runs."""
    entries = {
        word: tuple(synonyms_for(word, models, thesauri, ne_lexicon))
        for word in sorted(set(w.lower() for w in vocabulary))
    }
    return SynonymTable(entries=entries)
