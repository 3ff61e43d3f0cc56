"""Synthetic screen corpus generation.

Generates deterministic, seeded screen documents for testing and
benchmarks: random portrait layouts over the 24-class search vocabulary
with a configurable per-class frequency profile. Elements are placed in
distinct cells of a placement grid (occasionally spanning several cells),
which biases layouts toward non-overlapping elements like real screens.

A fraction of the supported icon classes is emitted in "disguised" form,
as a mislabeled input/image element whose Android class matches a shipped
fix rule, so an indexing run over generated data also exercises label
repair. The generator returns a ground-truth manifest (mapped class and
normalized bbox per element) for oracle tests.

Every generated screen passes ingestion filtering, so asking for n screens
yields an index of exactly n.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .index import ScreenDoc, ScreenElement, screen_to_obj

SCREEN_W = 1440
SCREEN_H = 2560

# Relative chance of each class appearing on a screen, loosely following
# how common the element types are in real app screens.
DEFAULT_WEIGHTS: dict[str, float] = {
    "text": 10.0, "image": 6.0, "container": 5.0, "default_icon": 4.0,
    "text_button": 3.0, "back": 2.0, "menu": 2.0, "search": 1.5,
    "checkbox": 1.0, "plus": 1.0, "avatar": 1.0, "cancel": 1.0,
    "switch": 0.8, "slider": 0.8, "share": 0.8, "setting": 0.8,
    "home": 0.7, "star": 0.7, "forward": 0.7, "play": 0.6,
    "dropdown": 0.6, "left_arrow": 0.5, "envelope": 0.4, "camera": 0.4,
}

# Mislabeled source forms per repairable class: (label, android_class,
# container_class) triples that a shipped fix rule maps back to the class.
DISGUISED_FORMS: dict[str, list[tuple[str, str, Optional[str]]]] = {
    "checkbox": [("input", "AppCompatCheckBox", None),
                 ("image", "CheckBoxMaterial", None),
                 ("input", "CustomView", "CheckedTextView")],
    "slider": [("input", "TwoThumbSeekBar", None),
               ("image", "CustomView", "SeekBar")],
    "star": [("image", "RatingWidget", None),
             ("image", "RatingView", "RatingBar")],
    "switch": [("input", "LabeledSwitch", None),
               ("image", "CustomView", "SwitchCompat")],
    "search": [("input", "SearchEditText", None),
               ("image", "SearchBoxButton", None)],
}

# Plain source labels whose fixed-table mapping is the class itself, plus
# a generic Android class for flavor.
PLAIN_ANDROID_CLASS: dict[str, str] = {
    "text": "TextView", "image": "ImageView", "container": "LinearLayout",
    "default_icon": "ImageButton", "text_button": "Button",
}

# Classes whose elements tend to be large; they may span several grid cells.
LARGE_CLASSES = frozenset({"image", "container", "text_button", "slider"})
WIDE_CLASSES = frozenset({"text", "search", "dropdown", "switch"})


@dataclass(frozen=True)
class CorpusProfile:
    """Knobs for the generator's class frequencies and layout density."""

    weights: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    min_elements: int = 3
    max_elements: int = 10
    disguise_rate: float = 0.15
    forced_df: dict[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class ManifestElement:
    klass: str
    bbox: tuple[float, float, float, float]  # normalized x, y, w, h


@dataclass(frozen=True)
class ManifestEntry:
    screen_id: str
    elements: tuple[ManifestElement, ...]


GRID_COLS = 4
GRID_ROWS = 8


def _element_for_class(rng: random.Random, klass: str, cell: int,
                       disguise_rate: float) -> tuple[ScreenElement, ManifestElement]:
    row, col = divmod(cell, GRID_COLS)
    cell_w = SCREEN_W / GRID_COLS
    cell_h = SCREEN_H / GRID_ROWS
    span_w = 1
    if klass in LARGE_CLASSES and rng.random() < 0.5:
        span_w = min(2, GRID_COLS - col)
    elif klass in WIDE_CLASSES and rng.random() < 0.6:
        span_w = min(3, GRID_COLS - col)
    max_w = cell_w * span_w
    if klass in LARGE_CLASSES:
        w = rng.uniform(0.5, 0.95) * max_w
        h = rng.uniform(0.4, 0.95) * cell_h
    elif klass in WIDE_CLASSES:
        w = rng.uniform(0.5, 0.9) * max_w
        h = rng.uniform(0.15, 0.4) * cell_h
    else:
        side = rng.uniform(0.15, 0.45) * min(cell_w, cell_h)
        w, h = side, side
    x = col * cell_w + rng.uniform(0.0, max(0.0, max_w - w))
    y = row * cell_h + rng.uniform(0.0, max(0.0, cell_h - h))
    w_px = max(1, round(w))
    h_px = max(1, round(h))
    x_px = max(0, min(round(x), SCREEN_W - w_px))
    y_px = max(0, min(round(y), SCREEN_H - h_px))
    bbox = (x_px, y_px, w_px, h_px)

    forms = DISGUISED_FORMS.get(klass)
    if forms and rng.random() < disguise_rate:
        label, android, container = forms[rng.randrange(len(forms))]
    else:
        label = klass
        android = PLAIN_ANDROID_CLASS.get(klass, "View")
        container = None
    element = ScreenElement(label=label, android_class=android,
                            container_class=container,
                            bbox=tuple(float(v) for v in bbox))
    norm = (bbox[0] / SCREEN_W, bbox[1] / SCREEN_H,
            bbox[2] / SCREEN_W, bbox[3] / SCREEN_H)
    return element, ManifestElement(klass, norm)


def generate_synthetic_corpus(seed: int, n: int,
                              profile: CorpusProfile | None = None,
                              ) -> tuple[list[ScreenDoc], list[ManifestEntry]]:
    """Generate n accepted screens plus their ground-truth manifest."""
    if n < 1:
        raise ValueError(f"need n >= 1 screens, got {n}")
    profile = profile or CorpusProfile()
    rng = random.Random(seed)
    weighted = sorted((k, w) for k, w in profile.weights.items()
                      if w > 0 and k not in profile.forced_df)
    names = [k for k, _ in weighted]
    weights = [w for _, w in weighted]
    if not names:
        raise ValueError("profile has no positive class weights")

    forced_screens: dict[int, list[str]] = {}
    for klass in sorted(profile.forced_df):
        count = profile.forced_df[klass]
        if not 0 <= count <= n:
            raise ValueError(f"forced df {count} for {klass!r} outside 0..{n}")
        for idx in rng.sample(range(n), count):
            forced_screens.setdefault(idx, []).append(klass)

    width = len(str(max(n - 1, 1)))
    docs: list[ScreenDoc] = []
    manifest: list[ManifestEntry] = []
    for i in range(n):
        screen_id = f"screen-{i:0{width}d}"
        k = rng.randint(profile.min_elements, profile.max_elements)
        classes = list(forced_screens.get(i, ()))
        classes += rng.choices(names, weights=weights, k=max(0, k - len(classes)))
        cells = rng.sample(range(GRID_COLS * GRID_ROWS), len(classes))
        elements: list[ScreenElement] = []
        truth: list[ManifestElement] = []
        for klass, cell in zip(classes, cells):
            element, m = _element_for_class(rng, klass, cell,
                                            profile.disguise_rate)
            elements.append(element)
            truth.append(m)
        docs.append(ScreenDoc(screen_id, SCREEN_W, SCREEN_H, tuple(elements)))
        manifest.append(ManifestEntry(screen_id, tuple(truth)))
    return docs, manifest


def write_corpus(docs: list[ScreenDoc], manifest: list[ManifestEntry],
                 out_dir: str | Path, bundle: bool = False) -> None:
    """Write screens (one JSON file each, or one JSONL bundle) + manifest."""
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)
    if bundle:
        with open(root / "corpus.jsonl", "w") as fh:
            for doc in docs:
                fh.write(json.dumps(screen_to_obj(doc), sort_keys=True))
                fh.write("\n")
    else:
        for doc in docs:
            path = root / f"{doc.id}.json"
            path.write_text(json.dumps(screen_to_obj(doc), sort_keys=True))
    with open(root / "manifest.jsonl", "w") as fh:
        for entry in manifest:
            fh.write(json.dumps({
                "screen_id": entry.screen_id,
                "elements": [{"class": e.klass, "bbox": list(e.bbox)}
                             for e in entry.elements],
            }, sort_keys=True))
            fh.write("\n")


def load_manifest(path: str | Path) -> list[ManifestEntry]:
    entries = []
    with open(path) as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            entries.append(ManifestEntry(
                obj["screen_id"],
                tuple(ManifestElement(e["class"], tuple(e["bbox"]))
                      for e in obj["elements"]),
            ))
    return entries
