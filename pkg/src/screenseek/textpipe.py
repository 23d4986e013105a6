"""Tokenization, rule-based lemmatization, and the two preprocessing pipelines.

Screen texts and element descriptions share tokenization and lemmatization but
differ on stop words: screen texts drop them, element descriptions keep every
token so short phrases like "pop up" stay searchable.  Named entities bypass
the lemmatizer entirely; their lemma is the lowercased surface form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cache
from importlib.resources import files
from pathlib import Path

from .corpus import ContentKind

# A token is a maximal run of characters that are not whitespace and not one
# of the four separator marks.
_TOKEN_PATTERN = re.compile(r"[^\s.,!?]+")

PipelineKind = ContentKind


@dataclass(frozen=True, slots=True)
class Token:
    surface: str
    lemma: str
    is_stopword: bool
    is_named_entity: bool


def tokenize(raw: str) -> list[str]:
    """Split on whitespace and the separators ``.`` ``,`` ``!`` ``?``."""
    return _TOKEN_PATTERN.findall(raw)


def _is_vowel(word: str, i: int) -> bool:
    c = word[i]
    if c in "aeiou":
        return True
    # y acts as a vowel after a consonant ("try", "typing").
    if c == "y":
        return i > 0 and not _is_vowel(word, i - 1)
    return False


def _measure(word: str) -> int:
    """Number of vowel-to-consonant transitions, the Porter m value."""
    m = 0
    prev_vowel = False
    for i in range(len(word)):
        vowel = _is_vowel(word, i)
        if prev_vowel and not vowel:
            m += 1
        prev_vowel = vowel
    return m


def _ends_cvc(word: str) -> bool:
    if len(word) < 3:
        return False
    if _is_vowel(word, len(word) - 1) or not _is_vowel(word, len(word) - 2):
        return False
    if _is_vowel(word, len(word) - 3):
        return False
    return word[-1] not in "wxy"


def _strip_plural(word: str) -> str:
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith("ies") and len(word) >= 5:
        return word[:-3] + "y"
    if word.endswith("es") and len(word) >= 4:
        stem = word[:-2]
        if stem.endswith(("x", "ch", "sh", "z", "o", "ss")):
            return stem
    if (
        word.endswith("s")
        and len(word) >= 3
        and not word.endswith(("ss", "us", "is"))
    ):
        return word[:-1]
    return word


def _fix_verb_stem(stem: str) -> str:
    if stem.endswith("i"):
        return stem[:-1] + "y"
    if (
        len(stem) >= 2
        and stem[-1] == stem[-2]
        and not _is_vowel(stem, len(stem) - 1)
        and stem[-2:] not in ("ll", "ss", "zz")
    ):
        return stem[:-1]
    if _measure(stem) == 1 and _ends_cvc(stem):
        return stem + "e"
    return stem


def _strip_verb(word: str) -> str:
    if word.endswith("ing") and len(word) >= 6:
        return _fix_verb_stem(word[:-3])
    if word.endswith("ed") and len(word) >= 5:
        return _fix_verb_stem(word[:-2])
    return word


def lemmatize(surface: str, exceptions: dict[str, str] | None = None) -> str:
    """Reduce a word to its lemma with plural and verb suffix rules.

    The exceptions table wins over the rules; pass None for the packaged
    table, or an empty dict to run rules only.  Output is always lowercase
    and the function is idempotent.
    """
    if exceptions is None:
        exceptions = default_lemma_exceptions()
    word = surface.lower()
    if word in exceptions:
        return exceptions[word]
    singular = _strip_plural(word)
    # A plural of an irregular form ("meetings") lands on its exception row.
    if singular != word and singular in exceptions:
        return exceptions[singular]
    return _strip_verb(singular)


def preprocess(
    tokens: list[str],
    kind: ContentKind,
    *,
    stopwords: frozenset[str] | None = None,
    ne_lexicon: frozenset[str] | None = None,
    exceptions: dict[str, str] | None = None,
) -> list[Token]:
    """Run raw tokens through one of the two pipelines.

    ``SCREEN_TEXT`` removes stop words both before and after lemmatization
    (a lemma can collapse onto a stop word); ``ELEMENT_DESCRIPTION`` keeps
    everything.  Named entities are looked up case-insensitively and kept
    verbatim apart from lowercasing.
    """
    if stopwords is None:
        stopwords = default_stopwords()
    if ne_lexicon is None:
        ne_lexicon = default_ne_lexicon()
    drop_stopwords = kind is ContentKind.SCREEN_TEXT

    out: list[Token] = []
    for surface in tokens:
        lowered = surface.lower()
        if drop_stopwords and lowered in stopwords:
            continue
        if lowered in ne_lexicon:
            lemma = lowered
            named = True
        else:
            lemma = lemmatize(surface, exceptions)
            named = False
        if drop_stopwords and lemma in stopwords:
            continue
        out.append(
            Token(
                surface=surface,
                lemma=lemma,
                is_stopword=lowered in stopwords or lemma in stopwords,
                is_named_entity=named,
            )
        )
    return out


class TextPipeline:
    """Bundles the lexicons so corpus indexing and query parsing agree."""

    def __init__(
        self,
        stopwords: frozenset[str] | None = None,
        ne_lexicon: frozenset[str] | None = None,
        exceptions: dict[str, str] | None = None,
    ) -> None:
        self.stopwords = default_stopwords() if stopwords is None else frozenset(stopwords)
        self.ne_lexicon = default_ne_lexicon() if ne_lexicon is None else frozenset(ne_lexicon)
        self.exceptions = (
            default_lemma_exceptions() if exceptions is None else dict(exceptions)
        )

    def run(self, raw: str, kind: ContentKind) -> list[Token]:
        return preprocess(
            tokenize(raw),
            kind,
            stopwords=self.stopwords,
            ne_lexicon=self.ne_lexicon,
            exceptions=self.exceptions,
        )

    def lemma(self, surface: str) -> str:
        """Lemma of a single word, honoring the named-entity lexicon."""
        lowered = surface.lower()
        if lowered in self.ne_lexicon:
            return lowered
        return lemmatize(surface, self.exceptions)


def parse_wordlist(raw: str) -> frozenset[str]:
    """One lowercase word per line; blank lines and # comments ignored."""
    words = []
    for line in raw.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.append(line.lower())
    return frozenset(words)


def load_wordlist(path: str | Path) -> frozenset[str]:
    return parse_wordlist(Path(path).read_text("utf-8"))


def parse_lemma_exceptions(raw: str) -> dict[str, str]:
    """Tab-separated ``surface<TAB>lemma`` rows, lowercase."""
    table: dict[str, str] = {}
    for n, line in enumerate(raw.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise ValueError(f"lemma exceptions line {n}: expected surface<TAB>lemma")
        table[parts[0].lower()] = parts[1].lower()
    return table


def load_lemma_exceptions(path: str | Path) -> dict[str, str]:
    return parse_lemma_exceptions(Path(path).read_text("utf-8"))


@cache
def default_stopwords() -> frozenset[str]:
    return parse_wordlist(files("screenseek.data").joinpath("stopwords.txt").read_text("utf-8"))


@cache
def default_ne_lexicon() -> frozenset[str]:
    return parse_wordlist(files("screenseek.data").joinpath("ne_lexicon.txt").read_text("utf-8"))


@cache
def default_lemma_exceptions() -> dict[str, str]:
    return parse_lemma_exceptions(
        files("screenseek.data").joinpath("lemma_exceptions.tsv").read_text("utf-8")
    )
