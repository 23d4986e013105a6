"""Search mobile app screens by sketching icons and placing text terms."""

from .corpus import (
    ALL_QUADRANTS,
    ContentKind,
    Corpus,
    CorpusError,
    Quadrant,
    Screen,
    ScreenContent,
    ScreenParseError,
    UiElement,
    extract_contents,
    load_corpus,
    parse_screen,
    quadrant_of,
)
from .ranker import Explanation, Query, RankedResult, RankedScreen, ScreenRanker
from .recognizer import (
    DoodleClassifier,
    Prediction,
    normalize_sketch,
    resample_stroke,
    train_reference_classifier,
)
from .sketchindex import (
    DEFAULT_GRID,
    DoodlePlacement,
    InstanceRecord,
    RankingConfig,
    SketchIndexer,
    TileGrid,
    smooth_coverage,
    tile_coverage,
)
from .synonyms import (
    EmbeddingModel,
    SynonymTable,
    Thesaurus,
    build_synonym_table,
    merge_candidates,
    synonyms_for,
    top_similar,
)
from .textindex import (
    MatchWeights,
    Posting,
    TextIndexer,
    TextQuery,
    fuzzy_match,
    parse_query_texts,
    parse_text_query,
)
from .textpipe import TextPipeline, Token, lemmatize, preprocess, tokenize

__version__ = "0.1.0"

__all__ = [
    "ALL_QUADRANTS",
    "ContentKind",
    "Corpus",
    "CorpusError",
    "DEFAULT_GRID",
    "DoodleClassifier",
    "DoodlePlacement",
    "EmbeddingModel",
    "Explanation",
    "InstanceRecord",
    "MatchWeights",
    "Posting",
    "Prediction",
    "Quadrant",
    "Query",
    "RankedResult",
    "RankedScreen",
    "RankingConfig",
    "Screen",
    "ScreenContent",
    "ScreenParseError",
    "ScreenRanker",
    "SketchIndexer",
    "SynonymTable",
    "TextIndexer",
    "TextPipeline",
    "TextQuery",
    "Thesaurus",
    "TileGrid",
    "Token",
    "UiElement",
    "build_synonym_table",
    "extract_contents",
    "fuzzy_match",
    "lemmatize",
    "load_corpus",
    "merge_candidates",
    "normalize_sketch",
    "parse_query_texts",
    "parse_screen",
    "parse_text_query",
    "preprocess",
    "quadrant_of",
    "resample_stroke",
    "smooth_coverage",
    "synonyms_for",
    "tile_coverage",
    "tokenize",
    "top_similar",
    "train_reference_classifier",
]
