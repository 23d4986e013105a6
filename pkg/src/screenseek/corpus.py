"""Screen corpus model: parse view-hierarchy documents, extract positioned texts.

A screen document is a JSON object with ``id``, ``width``, ``height`` and a
``root`` element tree.  Every element carries absolute pixel ``bounds``
``[left, top, right, bottom]`` plus optional ``text``, ``element_class``,
``icon_class`` and ``children``.  Parsing clamps bounds to the screen and
silently drops elements that end up with no area, counting the drops so
callers can surface a data-quality warning.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from importlib.resources import files
from pathlib import Path

_NUMBER = (int, float)


class CorpusError(ValueError):
    """Unreadable, malformed, or inconsistent corpus input."""


class ScreenParseError(CorpusError):
    """Malformed screen document; the message names the offending path."""


class Quadrant(Enum):
    """One of four equal screen regions used as index zones."""

    TOP_LEFT = "TL"
    TOP_RIGHT = "TR"
    BOTTOM_LEFT = "BL"
    BOTTOM_RIGHT = "BR"


ALL_QUADRANTS = frozenset(Quadrant)


class ContentKind(Enum):
    """Which preprocessing pipeline a piece of screen content goes through."""

    SCREEN_TEXT = "ScreenText"
    ELEMENT_DESCRIPTION = "ElementDescription"


@dataclass(slots=True)
class UiElement:
    """Node of a parsed view hierarchy, bounds already clamped to the screen."""

    bounds: tuple[float, float, float, float]
    text: str | None = None
    element_class: str | None = None
    icon_class: str | None = None
    children: list["UiElement"] = field(default_factory=list)

    @property
    def width(self) -> float:
        return self.bounds[2] - self.bounds[0]

    @property
    def height(self) -> float:
        return self.bounds[3] - self.bounds[1]


@dataclass(slots=True)
class Screen:
    id: str
    width: int
    height: int
    root: UiElement
    dropped_element_count: int = 0


@dataclass(frozen=True, slots=True)
class ScreenContent:
    """A positioned piece of text, ready for indexing."""

    screen_id: str
    raw_text: str
    kind: ContentKind
    bbox: tuple[float, float, float, float]
    quadrant: Quadrant


def _quadrant(x: float, y: float, width: float, height: float) -> Quadrant:
    # Midlines belong to the right/bottom halves.
    left = x < width / 2
    top = y < height / 2
    if top:
        return Quadrant.TOP_LEFT if left else Quadrant.TOP_RIGHT
    return Quadrant.BOTTOM_LEFT if left else Quadrant.BOTTOM_RIGHT


def quadrant_of(x: float, y: float, screen: Screen) -> Quadrant:
    """Map a pixel position to its screen quadrant.

    Raises ValueError for positions outside the screen.
    """
    if not (0 <= x <= screen.width and 0 <= y <= screen.height):
        raise ValueError(
            f"point ({x}, {y}) lies outside screen {screen.id!r} "
            f"({screen.width}x{screen.height})"
        )
    return _quadrant(x, y, screen.width, screen.height)


def _parse_element(
    node: object,
    path: str,
    width: float,
    height: float,
    vocabulary: frozenset[str] | None,
    dropped: list[int],
) -> UiElement | None:
    """Parse one element; returns None when the clamped node has no area."""
    if not isinstance(node, dict):
        raise ScreenParseError(f"{path}: expected an object")

    bounds = node.get("bounds")
    if (
        not isinstance(bounds, (list, tuple))
        or len(bounds) != 4
        or not all(isinstance(v, _NUMBER) and not isinstance(v, bool) for v in bounds)
    ):
        raise ScreenParseError(f"{path}.bounds: expected four numbers")
    left, top, right, bottom = (float(v) for v in bounds)
    left = min(max(left, 0.0), width)
    right = min(max(right, 0.0), width)
    top = min(max(top, 0.0), height)
    bottom = min(max(bottom, 0.0), height)

    text = node.get("text")
    if text is not None and not isinstance(text, str):
        raise ScreenParseError(f"{path}.text: expected a string")
    if text is not None and not text.strip():
        text = None

    element_class = node.get("element_class")
    if element_class is not None:
        if not isinstance(element_class, str):
            raise ScreenParseError(f"{path}.element_class: expected a string")
        element_class = element_class.strip() or None
    if element_class is not None and vocabulary is not None and element_class not in vocabulary:
        raise ScreenParseError(f"{path}.element_class: unknown label {element_class!r}")

    icon_class = node.get("icon_class")
    if icon_class is not None:
        if not isinstance(icon_class, str):
            raise ScreenParseError(f"{path}.icon_class: expected a string")
        icon_class = icon_class.strip() or None

    raw_children = node.get("children", [])
    if not isinstance(raw_children, list):
        raise ScreenParseError(f"{path}.children: expected a list")
    children = []
    for i, child in enumerate(raw_children):
        parsed = _parse_element(child, f"{path}.children[{i}]", width, height, vocabulary, dropped)
        if parsed is not None:
            children.append(parsed)

    # Validate the whole subtree first, then drop degenerate nodes; a dropped
    # node takes its surviving children with it.
    if left >= right or top >= bottom:
        dropped[0] += 1
        return None
    return UiElement(
        bounds=(left, top, right, bottom),
        text=text,
        element_class=element_class,
        icon_class=icon_class,
        children=children,
    )


def parse_screen(doc: object, element_classes: frozenset[str] | None = None) -> Screen:
    """Parse one screen document into a validated :class:`Screen`.

    ``element_classes`` restricts the allowed ``element_class`` labels; pass
    None to accept any label.
    """
    if not isinstance(doc, dict):
        raise ScreenParseError("document: expected an object")
    screen_id = doc.get("id")
    if not isinstance(screen_id, str) or not screen_id:
        raise ScreenParseError("id: missing or empty")
    width = doc.get("width")
    height = doc.get("height")
    for name, value in (("width", width), ("height", height)):
        if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
            raise ScreenParseError(f"{name}: expected a positive integer")
    root_doc = doc.get("root")
    if root_doc is None:
        raise ScreenParseError("root: missing")

    dropped = [0]
    root = _parse_element(root_doc, "root", width, height, element_classes, dropped)
    if root is None:
        # Keep the screen addressable even when its whole tree is degenerate.
        root = UiElement(bounds=(0.0, 0.0, float(width), float(height)))
    return Screen(
        id=screen_id,
        width=width,
        height=height,
        root=root,
        dropped_element_count=dropped[0],
    )


def extract_contents(screen: Screen) -> list[ScreenContent]:
    """Collect the screen's indexable contents in document (pre-order) order.

    Each element contributes its text (when present) and, for labeled
    elements, a description: the icon class when set, otherwise the element
    class.  Positions are the element's top-left corner quadrant.
    """
    out: list[ScreenContent] = []

    def walk(el: UiElement) -> None:
        quad = _quadrant(el.bounds[0], el.bounds[1], screen.width, screen.height)
        if el.text is not None:
            out.append(
                ScreenContent(screen.id, el.text, ContentKind.SCREEN_TEXT, el.bounds, quad)
            )
        if el.element_class is not None:
            description = el.icon_class if el.icon_class is not None else el.element_class
            out.append(
                ScreenContent(
                    screen.id, description, ContentKind.ELEMENT_DESCRIPTION, el.bounds, quad
                )
            )
        for child in el.children:
            walk(child)

    walk(screen.root)
    return out


@dataclass
class Corpus:
    """Screens sorted by id plus their extracted contents."""

    screens: list[Screen]
    contents: dict[str, list[ScreenContent]]

    @classmethod
    def from_screens(cls, screens: list[Screen]) -> "Corpus":
        seen: set[str] = set()
        for screen in screens:
            if screen.id in seen:
                raise CorpusError(f"duplicate screen id {screen.id!r}")
            seen.add(screen.id)
        ordered = sorted(screens, key=lambda s: s.id)
        return cls(
            screens=ordered,
            contents={s.id: extract_contents(s) for s in ordered},
        )

    def __len__(self) -> int:
        return len(self.screens)

    def __iter__(self):
        return iter(self.screens)

    def screen(self, screen_id: str) -> Screen:
        for s in self.screens:
            if s.id == screen_id:
                return s
        raise KeyError(screen_id)

    @property
    def ids(self) -> list[str]:
        return [s.id for s in self.screens]


def default_element_classes() -> frozenset[str]:
    """Element class vocabulary bundled with the package."""
    raw = files("screenseek.data").joinpath("element_classes.txt").read_text("utf-8")
    return parse_element_classes(raw)


def parse_element_classes(raw: str) -> frozenset[str]:
    labels = []
    for line in raw.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            labels.append(line)
    return frozenset(labels)


def load_corpus(path: str | Path, element_classes: frozenset[str] | None = None) -> Corpus:
    """Load every ``*.screen.json`` under ``path`` into a :class:`Corpus`.

    When ``element_classes`` is None, an ``element_classes.txt`` next to the
    screens is used if present, else the packaged default vocabulary.
    """
    directory = Path(path)
    if not directory.is_dir():
        raise CorpusError(f"{directory}: not a directory")
    if element_classes is None:
        vocab_file = directory / "element_classes.txt"
        if vocab_file.exists():
            try:
                element_classes = parse_element_classes(vocab_file.read_text("utf-8"))
            except OSError as exc:
                raise CorpusError(f"{vocab_file.name}: unreadable ({exc})") from exc
        else:
            element_classes = default_element_classes()

    screens = []
    for file in sorted(directory.glob("*.screen.json")):
        try:
            raw = file.read_text("utf-8")
        except OSError as exc:
            raise CorpusError(f"{file.name}: unreadable ({exc})") from exc
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"{file.name}: invalid JSON ({exc})") from exc
        try:
            screens.append(parse_screen(doc, element_classes))
        except ScreenParseError as exc:
            raise ScreenParseError(f"{file.name}: {exc}") from exc
    return Corpus.from_screens(screens)
