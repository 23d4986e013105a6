"""Deterministic synthetic data: screen corpora and labeled doodle sketches.

Everything is driven by a seeded generator, so the same seed always yields
byte-identical corpora and sketches.  Screens follow a plausible mobile
layout (toolbar, content rows, bottom navigation) and reference only labels
the packaged class map understands; doodles are parametric wireframe shapes
with per-instance wobble, rotation, and point noise.
"""

from __future__ import annotations

import json
import math
from importlib.resources import files
from pathlib import Path

import numpy as np

from .corpus import Corpus, Screen, UiElement

_DEVICES = ((1080, 1920), (1440, 2560), (720, 1280))

_WORDS = (
    "account", "alarm", "album", "alert", "article", "artist", "backup", "balance",
    "bank", "battery", "book", "budget", "burger", "calendar", "call", "caloric",
    "camera", "card", "cart", "chart", "chat", "city", "clock", "coffee",
    "comment", "contact", "dark", "date", "deliver", "device", "display", "driver",
    "episode", "event", "expense", "feed", "feedback", "filter", "fitness", "flight",
    "follow", "food", "friend", "gallery", "graph", "group", "guest", "health",
    "heart", "help", "hotel", "invite", "item", "language", "light", "location",
    "login", "map", "meal", "message", "mode", "movie", "music", "network",
    "note", "notification", "order", "password", "payment", "photo", "pizza",
    "playlist", "podcast", "policy", "post", "price", "privacy", "product",
    "profile", "progress", "radio", "recipe", "reminder", "report", "review",
    "ride", "route", "schedule", "screen", "season", "security", "session",
    "share", "shop", "show", "sleep", "song", "sort", "sound", "speaker",
    "stats", "step", "storage", "store", "story", "street", "support", "sync",
    "task", "theme", "ticket", "timer", "track", "transfer", "travel", "trip",
    "update", "upload", "version", "video", "voice", "volume", "wallet", "water",
    "weather", "welcome", "workout",
)

_TITLE_WORDS = (
    "home", "inbox", "library", "explore", "discover", "activity", "overview",
    "dashboard", "browse", "favorites", "history", "trending", "nearby", "search",
    "settings", "profile", "messages", "alerts",
)

_TOOLBAR_ICONS = ("back", "menu", "search", "share", "settings", "cancel")
_NAV_ICONS = ("home", "search", "add", "avatar", "menu", "star", "camera", "play")
_ROW_ICONS = (
    "star", "forward", "dropdown", "avatar", "camera", "cloud", "email", "play",
    "share", "favorite", "grid", "left",
)
_WIDGETS = ("Checkbox", "On/Off Switch", "Slider")


def _words(rng: np.random.Generator, lo: int, hi: int, pool: tuple[str, ...] = _WORDS) -> str:
    count = int(rng.integers(lo, hi + 1))
    picked = [str(pool[int(rng.integers(len(pool)))]) for _ in range(count)]
    if rng.random() < 0.5:
        picked[0] = picked[0].capitalize()
    return " ".join(picked)


def generate_screen(rng: np.random.Generator, index: int) -> Screen:
    """One plausible mobile screen; structure and labels depend only on rng."""
    width, height = _DEVICES[int(rng.integers(len(_DEVICES)))]
    children: list[UiElement] = []

    toolbar_h = round(0.07 * height)
    toolbar_kids: list[UiElement] = [
        UiElement(
            bounds=(round(0.04 * width), round(0.015 * height), round(0.5 * width), round(0.055 * height)),
            text=str(_TITLE_WORDS[int(rng.integers(len(_TITLE_WORDS)))]).capitalize(),
            element_class="Text",
        )
    ]
    n_toolbar_icons = int(rng.integers(1, 3))
    icon_side = round(0.05 * height)
    for i in range(n_toolbar_icons):
        right = round(width * (0.96 - 0.09 * i))
        toolbar_kids.append(
            UiElement(
                bounds=(right - icon_side, round(0.012 * height), right, round(0.012 * height) + icon_side),
                element_class="Icon",
                icon_class=str(_TOOLBAR_ICONS[int(rng.integers(len(_TOOLBAR_ICONS)))]),
            )
        )
    children.append(
        UiElement(bounds=(0, 0, width, toolbar_h), element_class="Toolbar", children=toolbar_kids)
    )

    has_nav = rng.random() < 0.7
    content_bottom = round(0.9 * height) if has_nav else height
    n_rows = int(rng.integers(3, 8))
    row_gap = round(0.012 * height)
    row_h = (content_bottom - toolbar_h - row_gap * (n_rows + 1)) // n_rows
    y = toolbar_h + row_gap
    for _ in range(n_rows):
        row_kids: list[UiElement] = []
        text_right = round(0.65 * width)
        row_kids.append(
            UiElement(
                bounds=(round(0.06 * width), y + round(row_h * 0.2), text_right, y + round(row_h * 0.8)),
                text=_words(rng, 1, 4),
                element_class="Text",
            )
        )
        roll = rng.random()
        accessory_side = min(round(0.08 * width), row_h - 2)
        ax = round(0.88 * width)
        ay = y + (row_h - accessory_side) // 2
        if roll < 0.4:
            row_kids.append(
                UiElement(
                    bounds=(ax, ay, ax + accessory_side, ay + accessory_side),
                    element_class="Icon",
                    icon_class=str(_ROW_ICONS[int(rng.integers(len(_ROW_ICONS)))]),
                )
            )
        elif roll < 0.6:
            widget = str(_WIDGETS[int(rng.integers(len(_WIDGETS)))])
            w_width = accessory_side * (3 if widget == "Slider" else 1)
            row_kids.append(
                UiElement(
                    bounds=(ax - w_width + accessory_side, ay, ax + accessory_side, ay + accessory_side),
                    element_class=widget,
                )
            )
        children.append(
            UiElement(
                bounds=(round(0.03 * width), y, round(0.97 * width), y + row_h),
                element_class="Card" if rng.random() < 0.3 else "List Item",
                children=row_kids,
            )
        )
        y += row_h + row_gap

    if has_nav:
        nav_top = round(0.92 * height)
        n_nav = int(rng.integers(3, 6))
        nav_kids = []
        slot = width / n_nav
        side = round(0.045 * height)
        for i in range(n_nav):
            cx = round(slot * (i + 0.5))
            ny = nav_top + round(0.015 * height)
            nav_kids.append(
                UiElement(
                    bounds=(cx - side // 2, ny, cx + side // 2, ny + side),
                    element_class="Icon",
                    icon_class=str(_NAV_ICONS[i % len(_NAV_ICONS)]),
                )
            )
        children.append(
            UiElement(
                bounds=(0, nav_top, width, height),
                element_class="Bottom Navigation",
                children=nav_kids,
            )
        )

    if rng.random() < 0.2:
        side = round(0.085 * width)
        fx = round(0.86 * width)
        fy = round(0.78 * height)
        children.append(
            UiElement(
                bounds=(fx, fy, fx + side, fy + side),
                element_class="Icon",
                icon_class="add",
            )
        )

    root = UiElement(bounds=(0, 0, width, height), children=children)
    return Screen(id=f"s{index:06d}", width=width, height=height, root=root)


def generate_screens(n_screens: int, seed: int = 0) -> list[Screen]:
    rng = np.random.default_rng(seed)
    return [generate_screen(rng, i) for i in range(n_screens)]


def generate_corpus(n_screens: int, seed: int = 0) -> Corpus:
    return Corpus.from_screens(generate_screens(n_screens, seed))


def screen_to_doc(screen: Screen) -> dict:
    """JSON-serializable document in the on-disk screen format."""

    def element_to_doc(element: UiElement) -> dict:
        doc: dict = {"bounds": [_number(v) for v in element.bounds]}
        if element.text is not None:
            doc["text"] = element.text
        if element.element_class is not None:
            doc["element_class"] = element.element_class
        if element.icon_class is not None:
            doc["icon_class"] = element.icon_class
        if element.children:
            doc["children"] = [element_to_doc(c) for c in element.children]
        return doc

    return {
        "id": screen.id,
        "width": screen.width,
        "height": screen.height,
        "root": element_to_doc(screen.root),
    }


def _number(value: float) -> int | float:
    return int(value) if float(value).is_integer() else float(value)


def write_corpus(screens: list[Screen], out_dir: str | Path) -> None:
    """Write screens as ``<id>.screen.json`` files plus the class vocabulary."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for screen in screens:
        doc = screen_to_doc(screen)
        (out / f"{screen.id}.screen.json").write_text(
            json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n", "utf-8"
        )
    vocabulary = files("screenseek.data").joinpath("element_classes.txt").read_text("utf-8")
    (out / "element_classes.txt").write_text(vocabulary, "utf-8")


# --- doodle shapes ---------------------------------------------------------


def _segment(p0, p1, n: int) -> np.ndarray:
    t = np.linspace(0.0, 1.0, n)[:, None]
    return np.asarray(p0) + t * (np.asarray(p1) - np.asarray(p0))


def _polyline(points, rng: np.random.Generator) -> np.ndarray:
    parts = []
    for a, b in zip(points[:-1], points[1:]):
        n = int(rng.integers(6, 11))
        seg = _segment(a, b, n)
        parts.append(seg if not parts else seg[1:])
    return np.concatenate(parts)


def _arc(cx, cy, r, a0, a1, n: int) -> np.ndarray:
    angles = np.linspace(a0, a1, n)
    return np.column_stack([cx + r * np.cos(angles), cy + r * np.sin(angles)])


def _circle(rng, cx, cy, r, start=-math.pi / 2) -> np.ndarray:
    n = int(rng.integers(22, 34))
    return _arc(cx, cy, r, start, start + 2 * math.pi, n)


def _rect(rng, l, t, r, b) -> np.ndarray:
    return _polyline([(l, t), (r, t), (r, b), (l, b), (l, t)], rng)


def _shape_avatar(rng):
    head = _circle(rng, 0.5, 0.33, 0.17 * rng.uniform(0.9, 1.1))
    shoulders = _arc(0.5, 1.0, 0.42, math.pi * 1.15, math.pi * 1.85, int(rng.integers(14, 22)))
    return [head, shoulders]


def _shape_back(rng):
    inset = rng.uniform(0.0, 0.06)
    return [_polyline([(0.66 + inset, 0.14), (0.3, 0.5), (0.66 + inset, 0.86)], rng)]


def _shape_camera(rng):
    body = _rect(rng, 0.1, 0.32, 0.9, 0.85)
    lens = _circle(rng, 0.5, 0.58, 0.14 * rng.uniform(0.9, 1.1))
    bump = _polyline([(0.36, 0.32), (0.42, 0.17), (0.6, 0.17), (0.66, 0.32)], rng)
    return [body, lens, bump]


def _shape_cancel(rng):
    d = rng.uniform(0.0, 0.05)
    return [
        _polyline([(0.18 + d, 0.18), (0.82, 0.82 - d)], rng),
        _polyline([(0.82 - d, 0.18), (0.18, 0.82 - d)], rng),
    ]


def _shape_checkbox(rng):
    box = _rect(rng, 0.12, 0.12, 0.88, 0.88)
    tick = _polyline([(0.28, 0.52), (0.45, 0.72), (0.78, 0.3)], rng)
    return [box, tick]


def _shape_cloud(rng):
    n = int(rng.integers(10, 15))
    left = _arc(0.3, 0.62, 0.14, math.pi / 2, math.pi * 1.5, n)
    top = _arc(0.47, 0.5, 0.17, math.pi, math.pi * 2, n)
    right = _arc(0.68, 0.6, 0.13, math.pi * 1.2, math.pi * 2.5, n)
    base = _segment((0.8, 0.72), (0.31, 0.76), int(rng.integers(8, 12)))
    return [np.concatenate([left, top[1:], right[1:], base])]


def _shape_dropdown(rng):
    spread = rng.uniform(0.22, 0.28)
    return [_polyline([(0.5 - spread, 0.34), (0.5 + spread, 0.34), (0.5, 0.72), (0.5 - spread, 0.34)], rng)]


def _shape_envelope(rng):
    body = _rect(rng, 0.08, 0.25, 0.92, 0.78)
    flap = _polyline([(0.08, 0.28), (0.5, 0.58), (0.92, 0.28)], rng)
    return [body, flap]


def _shape_forward(rng):
    inset = rng.uniform(0.0, 0.06)
    return [_polyline([(0.34 - inset, 0.14), (0.7, 0.5), (0.34 - inset, 0.86)], rng)]


def _shape_house(rng):
    peak = rng.uniform(0.12, 0.18)
    roof = _polyline([(0.12, 0.48), (0.5, peak), (0.88, 0.48)], rng)
    body = _rect(rng, 0.22, 0.48, 0.78, 0.88)
    return [roof, body]


def _shape_jail_window(rng):
    frame = _rect(rng, 0.12, 0.16, 0.88, 0.84)
    bars = [
        _polyline([(x, 0.16), (x, 0.84)], rng)
        for x in (0.37, 0.63)
    ]
    rail = _polyline([(0.12, 0.5), (0.88, 0.5)], rng)
    return [frame, *bars, rail]


def _shape_left_arrow(rng):
    shaft = _polyline([(0.88, 0.5), (0.16, 0.5)], rng)
    head = _polyline([(0.38, 0.28), (0.14, 0.5), (0.38, 0.72)], rng)
    return [shaft, head]


def _shape_menu(rng):
    ys = (0.26, 0.5, 0.74)
    return [_polyline([(0.14, y), (0.86, y + rng.uniform(-0.02, 0.02))], rng) for y in ys]


def _shape_play(rng):
    return [_polyline([(0.26, 0.14), (0.26, 0.86), (0.82, 0.5), (0.26, 0.14)], rng)]


def _shape_plus(rng):
    return [
        _polyline([(0.5, 0.12), (0.5, 0.88)], rng),
        _polyline([(0.12, 0.5), (0.88, 0.5)], rng),
    ]


def _shape_search(rng):
    r = 0.22 * rng.uniform(0.9, 1.1)
    glass = _circle(rng, 0.42, 0.42, r)
    handle = _polyline([(0.42 + r * 0.72, 0.42 + r * 0.72), (0.88, 0.88)], rng)
    return [glass, handle]


def _shape_setting(rng):
    teeth = 8
    r_in, r_out = 0.24, 0.34
    angles = np.linspace(-math.pi / 2, math.pi * 1.5, teeth * 4 + 1)
    radii = np.where((np.arange(teeth * 4 + 1) // 2) % 2 == 0, r_out, r_in)
    gear = np.column_stack([0.5 + radii * np.cos(angles), 0.5 + radii * np.sin(angles)])
    hub = _circle(rng, 0.5, 0.5, 0.1 * rng.uniform(0.9, 1.1))
    return [gear, hub]


def _shape_share(rng):
    r = 0.09
    a = _circle(rng, 0.22, 0.5, r)
    b = _circle(rng, 0.76, 0.2, r)
    c = _circle(rng, 0.76, 0.8, r)
    link1 = _polyline([(0.3, 0.45), (0.68, 0.24)], rng)
    link2 = _polyline([(0.3, 0.55), (0.68, 0.76)], rng)
    return [a, b, c, link1, link2]


def _shape_slider(rng):
    knob_x = rng.uniform(0.35, 0.7)
    rail = _polyline([(0.08, 0.5), (0.92, 0.5)], rng)
    knob = _circle(rng, knob_x, 0.5, 0.08)
    return [rail, knob]


def _shape_square(rng):
    return [_rect(rng, 0.16, 0.16, 0.84, 0.84)]


def _shape_squiggle(rng):
    n = int(rng.integers(40, 60))
    x = np.linspace(0.08, 0.92, n)
    phase = rng.uniform(0, math.pi)
    y = 0.5 + 0.16 * np.sin(2 * math.pi * rng.uniform(2.0, 2.8) * (x - 0.08) + phase)
    return [np.column_stack([x, y])]


def _shape_star(rng):
    r_out = 0.38
    r_in = 0.15 * rng.uniform(0.9, 1.15)
    pts = []
    for i in range(11):
        angle = -math.pi / 2 + i * math.pi / 5
        r = r_out if i % 2 == 0 else r_in
        pts.append((0.5 + r * math.cos(angle), 0.5 + r * math.sin(angle)))
    return [_polyline(pts, rng)]


def _shape_switch(rng):
    r = 0.16
    n = int(rng.integers(10, 15))
    top = _segment((0.3, 0.5 - r), (0.7, 0.5 - r), n)
    right = _arc(0.7, 0.5, r, -math.pi / 2, math.pi / 2, n)
    bottom = _segment((0.7, 0.5 + r), (0.3, 0.5 + r), n)
    left = _arc(0.3, 0.5, r, math.pi / 2, math.pi * 1.5, n)
    outline = np.concatenate([top, right[1:], bottom[1:], left[1:]])
    knob = _circle(rng, 0.7, 0.5, 0.1)
    return [outline, knob]


_SHAPES = {
    "Avatar": _shape_avatar,
    "Back": _shape_back,
    "Camera": _shape_camera,
    "Cancel": _shape_cancel,
    "Checkbox": _shape_checkbox,
    "Cloud": _shape_cloud,
    "Drop-down": _shape_dropdown,
    "Envelope": _shape_envelope,
    "Forward": _shape_forward,
    "House": _shape_house,
    "Jail-window": _shape_jail_window,
    "Left-arrow": _shape_left_arrow,
    "Menu": _shape_menu,
    "Play": _shape_play,
    "Plus": _shape_plus,
    "Search": _shape_search,
    "Setting": _shape_setting,
    "Share": _shape_share,
    "Slider": _shape_slider,
    "Square": _shape_square,
    "Squiggle": _shape_squiggle,
    "Star": _shape_star,
    "Switch": _shape_switch,
}


def doodle_classes() -> tuple[str, ...]:
    """Classes this generator can draw, alphabetical."""
    return tuple(sorted(_SHAPES))


def generate_doodle(
    icon_class: str, rng: np.random.Generator, jitter: float = 0.012
) -> list[np.ndarray]:
    """One noisy sketch of the class: wobble, rotation, offset, point noise."""
    shape = _SHAPES.get(icon_class)
    if shape is None:
        raise ValueError(f"no doodle shape for class {icon_class!r}")
    strokes = shape(rng)

    angle = rng.uniform(-0.1, 0.1)
    cos_a, sin_a = math.cos(angle), math.sin(angle)
    rotation = np.array([[cos_a, -sin_a], [sin_a, cos_a]])
    scale = rng.uniform(0.78, 0.95)
    shift = rng.uniform(-0.04, 0.04, size=2)

    out = []
    for stroke in strokes:
        pts = (stroke - 0.5) @ rotation.T * scale + 0.5 + shift
        pts = pts + rng.normal(0.0, jitter, size=pts.shape)
        out.append(np.clip(pts, 0.0, 1.0))
    return out


def generate_doodles(
    classes: tuple[str, ...] | None = None,
    per_class: int = 40,
    seed: int = 0,
    jitter: float = 0.012,
) -> list[tuple[list[np.ndarray], str]]:
    """Labeled sketches, ``per_class`` for each class, deterministic by seed."""
    rng = np.random.default_rng(seed)
    picked = doodle_classes() if classes is None else tuple(classes)
    labeled = []
    for icon_class in picked:
        for _ in range(per_class):
            labeled.append((generate_doodle(icon_class, rng, jitter), icon_class))
    return labeled


def write_doodles(labeled: list[tuple[list[np.ndarray], str]], path: str | Path) -> None:
    """One JSON object per line: ``{"icon_class": ..., "strokes": [...]}``."""
    lines = []
    for strokes, icon_class in labeled:
        doc = {
            "icon_class": icon_class,
            "strokes": [[[float(x), float(y)] for x, y in stroke] for stroke in strokes],
        }
        lines.append(json.dumps(doc, sort_keys=True, separators=(",", ":")))
    Path(path).write_text("\n".join(lines) + "\n", "utf-8")


def read_doodles(path: str | Path) -> list[tuple[list[np.ndarray], str]]:
    labeled = []
    for n, line in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
            strokes = [np.asarray(s, dtype=np.float64) for s in doc["strokes"]]
            labeled.append((strokes, str(doc["icon_class"])))
        except (ValueError, KeyError, TypeError) as exc:
            raise ValueError(f"{path} line {n}: bad doodle record ({exc})") from exc
    return labeled
