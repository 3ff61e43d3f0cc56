"""Screen-hierarchy ingestion and the inverted tile index.

A corpus is a set of screen documents, each listing labeled elements with
pixel bounding boxes. Ingestion filters out screens too bare to search for
(single text area, single image, text plus image, single webview, webview
covering most of the screen, or no elements at all), repairs a known family
of mislabeled "input"/"image" elements via ordered fix rules, and decomposes
every screen into per-class coverage over the 6x4 tile grid.

The built index maps element class -> screen -> per-tile (area fraction,
element count), plus an inverse-document-frequency weight per class:
idf(c) = ln(1 + N / df(c)), which keeps ubiquitous classes contributing a
small positive weight instead of zeroing out.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DoodleSearchError
from .tiles import tile_coverage

MAGIC = b"PSDIDX1"
FORMAT_VERSION = 1

# Screens whose only content matches one of these patterns carry too little
# signal to distinguish, and are dropped at ingestion.
REJECT_SINGLE_TEXT = "single_text"
REJECT_SINGLE_IMAGE = "single_image"
REJECT_TEXT_PLUS_IMAGE = "text_plus_image"
REJECT_SINGLE_WEBVIEW = "single_webview"
REJECT_WEBVIEW_MAJORITY = "webview_majority"
REJECT_NO_HIERARCHY = "no_hierarchy"

WEBVIEW_MAJORITY_FRACTION = 0.5

# Source labels that map directly into the 24-class search vocabulary.
# Everything else (e.g. list_item, map_view, input) stays unmapped: it is
# not searchable but still counts toward the bare-screen filters above.
SOURCE_LABEL_MAP = {
    "text": "text",
    "text_button": "text_button",
    "image": "image",
    "container": "container",
    "icon": "default_icon",
    "default_icon": "default_icon",
    "checkbox": "checkbox",
    "slider": "slider",
    "star": "star",
    "switch": "switch",
    "search": "search",
    "back": "back",
    "menu": "menu",
    "cancel": "cancel",
    "plus": "plus",
    "avatar": "avatar",
    "home": "home",
    "share": "share",
    "setting": "setting",
    "forward": "forward",
    "play": "play",
    "camera": "camera",
    "dropdown": "dropdown",
    "envelope": "envelope",
    "left_arrow": "left_arrow",
}

WEBVIEW_LABELS = frozenset({"webview", "web_view"})


class DuplicateId(DoodleSearchError):
    """Two corpus documents share a screen id."""

    code = "duplicate_id"


class EmptyCorpus(DoodleSearchError):
    """No documents to index."""

    code = "empty_corpus"


class VersionMismatch(DoodleSearchError):
    """Index file magic or version not recognized."""

    code = "version_mismatch"


class ChecksumMismatch(DoodleSearchError):
    """Index file payload does not match its checksum."""

    code = "checksum_mismatch"


@dataclass(frozen=True)
class ScreenElement:
    label: str
    android_class: str
    container_class: Optional[str]
    bbox: tuple[float, float, float, float]  # x, y, w, h in pixels


@dataclass(frozen=True)
class ScreenDoc:
    id: str
    width: int
    height: int
    elements: tuple[ScreenElement, ...]


@dataclass(frozen=True)
class LabelFixRule:
    container_classes: frozenset[str]
    element_classes: frozenset[str]
    old_labels: frozenset[str]
    new_label: str


def normalize_label(label: str) -> str:
    return label.strip().lower().replace(" ", "_").replace("-", "_")


def apply_label_fixes(element: ScreenElement,
                      rules: Sequence[LabelFixRule]) -> Optional[str]:
    """Map a source element to its search class; None means unmapped.

    Rules are tried in order, first match wins: a rule applies when the
    element's label is one of the rule's old labels and either its Android
    class is in the rule's element classes or its direct container is in
    the rule's container classes. When no rule fires, the label falls
    through to the fixed source-label table.
    """
    label = normalize_label(element.label)
    for rule in rules:
        if label not in rule.old_labels:
            continue
        if element.android_class in rule.element_classes or (
                element.container_class is not None
                and element.container_class in rule.container_classes):
            return rule.new_label
    return SOURCE_LABEL_MAP.get(label)


def load_fix_rules(path: str | Path) -> list[LabelFixRule]:
    data = json.loads(Path(path).read_text())
    rules = []
    for entry in data:
        rules.append(LabelFixRule(
            container_classes=frozenset(entry["container_classes"]),
            element_classes=frozenset(entry["element_classes"]),
            old_labels=frozenset(normalize_label(l) for l in entry["old_labels"]),
            new_label=entry["new_label"],
        ))
    return rules


def default_fix_rules() -> list[LabelFixRule]:
    """The shipped relabeling patterns for mislabeled input/image elements."""
    return load_fix_rules(Path(__file__).parent / "data" / "label_fix_rules.json")


def _clamped_norm_rect(element: ScreenElement, width: int,
                       height: int) -> Optional[tuple[float, float, float, float]]:
    """Element bbox clamped to the screen and normalized; None if empty."""
    x, y, w, h = element.bbox
    x1 = min(max(x, 0.0), float(width))
    x2 = min(max(x + w, 0.0), float(width))
    y1 = min(max(y, 0.0), float(height))
    y2 = min(max(y + h, 0.0), float(height))
    if x2 - x1 <= 0.0 or y2 - y1 <= 0.0:
        return None
    return (x1 / width, y1 / height, (x2 - x1) / width, (y2 - y1) / height)


def filter_screen(doc: ScreenDoc) -> Optional[str]:
    """Return a rejection reason for unsearchable screens, or None to accept.

    Runs on source labels (before fix rules): the bare-screen patterns are
    about raw screen content, not about the repaired vocabulary.
    """
    if not doc.elements:
        return REJECT_NO_HIERARCHY
    labels = [normalize_label(e.label) for e in doc.elements]
    mapped = [SOURCE_LABEL_MAP.get(l) for l in labels]
    webview = [l in WEBVIEW_LABELS for l in labels]
    if len(doc.elements) == 1:
        if mapped[0] == "text":
            return REJECT_SINGLE_TEXT
        if mapped[0] == "image":
            return REJECT_SINGLE_IMAGE
        if webview[0]:
            return REJECT_SINGLE_WEBVIEW
    if len(doc.elements) == 2 and sorted(filter(None, mapped)) == ["image", "text"]:
        return REJECT_TEXT_PLUS_IMAGE
    for e, is_web in zip(doc.elements, webview):
        if not is_web:
            continue
        rect = _clamped_norm_rect(e, doc.width, doc.height)
        if rect is not None and rect[2] * rect[3] > WEBVIEW_MAJORITY_FRACTION:
            return REJECT_WEBVIEW_MAJORITY
    return None


def tile_decompose(doc: ScreenDoc, rules: Sequence[LabelFixRule] = (),
                   ) -> dict[str, dict[int, tuple[float, int]]]:
    """Per-class, per-tile (area fraction, count) for one screen.

    Unmapped elements and elements with no area left after clamping to the
    screen are skipped.
    """
    rects: dict[str, list[tuple[float, float, float, float]]] = {}
    for element in doc.elements:
        klass = apply_label_fixes(element, rules)
        if klass is None:
            continue
        rect = _clamped_norm_rect(element, doc.width, doc.height)
        if rect is None:
            continue
        rects.setdefault(klass, []).append(rect)
    return {klass: tile_coverage(group) for klass, group in sorted(rects.items())}


def compute_idf(screen_count: int, df: dict[str, int]) -> dict[str, float]:
    """idf(c) = ln(1 + N / df(c)); strictly decreasing in df, always > 0."""
    if screen_count < 1:
        raise EmptyCorpus("cannot compute idf over an empty corpus")
    return {klass: math.log(1.0 + screen_count / count)
            for klass, count in sorted(df.items())}


@dataclass
class ClassPostings:
    """Columnar per-class postings, sorted by (screen ordinal, tile)."""

    screens: np.ndarray       # int64, distinct screen ordinals, ascending
    entry_screen: np.ndarray  # int64, index into `screens` per entry
    entry_tile: np.ndarray    # int64, tile 0..23
    entry_area: np.ndarray    # float64, covered fraction of the tile
    entry_count: np.ndarray   # float64, number of elements in the tile

    @property
    def df(self) -> int:
        return int(len(self.screens))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClassPostings):
            return NotImplemented
        return (np.array_equal(self.screens, other.screens)
                and np.array_equal(self.entry_screen, other.entry_screen)
                and np.array_equal(self.entry_tile, other.entry_tile)
                and np.array_equal(self.entry_area, other.entry_area)
                and np.array_equal(self.entry_count, other.entry_count))


class ScreenIndex:
    """Inverted mapping element class -> screens -> tile coverage, plus idf.

    Immutable once built; safe to share across threads.
    """

    def __init__(self, screen_ids: Sequence[str],
                 postings: dict[str, ClassPostings],
                 idf: dict[str, float]):
        self.screen_ids: tuple[str, ...] = tuple(screen_ids)
        self.postings = postings
        self.idf = idf
        self._id_to_ord = {sid: i for i, sid in enumerate(self.screen_ids)}

    @property
    def screen_count(self) -> int:
        return len(self.screen_ids)

    def classes(self) -> list[str]:
        return sorted(self.postings)

    def df(self, klass: str) -> int:
        return self.postings[klass].df if klass in self.postings else 0

    def has_screen(self, screen_id: str) -> bool:
        return screen_id in self._id_to_ord

    def coverage(self, klass: str) -> dict[str, dict[int, tuple[float, int]]]:
        """Dict view of one class's postings, keyed by screen id."""
        if klass not in self.postings:
            return {}
        post = self.postings[klass]
        out: dict[str, dict[int, tuple[float, int]]] = {}
        for row, tile, area, count in zip(post.entry_screen, post.entry_tile,
                                          post.entry_area, post.entry_count):
            sid = self.screen_ids[post.screens[row]]
            out.setdefault(sid, {})[int(tile)] = (float(area), int(count))
        return out

    def coverage_for_screen(self, screen_id: str) -> dict[str, dict[int, tuple[float, int]]]:
        """Per-class tile coverage of a single screen (for rendering)."""
        ordinal = self._id_to_ord.get(screen_id)
        if ordinal is None:
            raise KeyError(screen_id)
        out: dict[str, dict[int, tuple[float, int]]] = {}
        for klass, post in self.postings.items():
            rows = np.searchsorted(post.screens, ordinal)
            if rows >= len(post.screens) or post.screens[rows] != ordinal:
                continue
            mask = post.entry_screen == rows
            out[klass] = {int(t): (float(a), int(c)) for t, a, c in zip(
                post.entry_tile[mask], post.entry_area[mask], post.entry_count[mask])}
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScreenIndex):
            return NotImplemented
        return (self.screen_ids == other.screen_ids
                and self.postings == other.postings
                and self.idf == other.idf)


def build_index(docs: Iterable[ScreenDoc],
                rules: Sequence[LabelFixRule] = ()) -> ScreenIndex:
    """Filter, fix labels, decompose, and aggregate a corpus into an index.

    Screens are re-ordered by id internally, so the result is independent
    of document order. Screens with no mapped elements after fixing are
    dropped like screens without hierarchy.
    """
    seen: set[str] = set()
    accepted_ids: list[str] = []
    acc: dict[str, tuple[list, list, list, list]] = {}
    total = 0
    for doc in docs:
        total += 1
        if doc.id in seen:
            raise DuplicateId(f"duplicate screen id {doc.id!r}")
        seen.add(doc.id)
        if filter_screen(doc) is not None:
            continue
        coverage = tile_decompose(doc, rules)
        if not coverage:
            continue
        accepted_ids.append(doc.id)
        for klass, tiles_ in coverage.items():
            sids, tile_col, area_col, count_col = acc.setdefault(
                klass, ([], [], [], []))
            for tile, (area, count) in tiles_.items():
                sids.append(doc.id)
                tile_col.append(tile)
                area_col.append(area)
                count_col.append(count)
    if total == 0:
        raise EmptyCorpus("no documents supplied")
    id_to_ord = {sid: i for i, sid in enumerate(sorted(accepted_ids))}
    screen_ids = sorted(accepted_ids)
    postings: dict[str, ClassPostings] = {}
    df: dict[str, int] = {}
    for klass, (sids, tile_col, area_col, count_col) in acc.items():
        ords = np.array([id_to_ord[s] for s in sids], dtype=np.int64)
        tiles_arr = np.array(tile_col, dtype=np.int64)
        order = np.lexsort((tiles_arr, ords))
        ords = ords[order]
        screens = np.unique(ords)
        postings[klass] = ClassPostings(
            screens=screens,
            entry_screen=np.searchsorted(screens, ords),
            entry_tile=tiles_arr[order],
            entry_area=np.array(area_col, dtype=np.float64)[order],
            entry_count=np.array(count_col, dtype=np.float64)[order],
        )
        df[klass] = len(screens)
    idf = compute_idf(len(screen_ids), df) if screen_ids else {}
    return ScreenIndex(screen_ids, postings, idf)


def save_index(index: ScreenIndex, path: str | Path) -> None:
    """Write the index: magic, version byte, JSON payload, sha256 trailer."""
    payload = json.dumps({
        "screen_ids": list(index.screen_ids),
        "idf": index.idf,
        "classes": {
            klass: {
                "screens": post.screens.tolist(),
                "entry_screen": post.entry_screen.tolist(),
                "entry_tile": post.entry_tile.tolist(),
                "entry_area": post.entry_area.tolist(),
                "entry_count": post.entry_count.tolist(),
            }
            for klass, post in sorted(index.postings.items())
        },
    }, separators=(",", ":")).encode("utf-8")
    digest = hashlib.sha256(payload).digest()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(bytes([FORMAT_VERSION]))
        fh.write(payload)
        fh.write(digest)


def load_index(path: str | Path) -> ScreenIndex:
    data = Path(path).read_bytes()
    if not data.startswith(MAGIC):
        raise VersionMismatch("not an index file (bad magic)")
    header = len(MAGIC) + 1
    if len(data) < header + 32:
        raise ChecksumMismatch("index file truncated")
    if data[len(MAGIC)] != FORMAT_VERSION:
        raise VersionMismatch(f"unsupported index version {data[len(MAGIC)]}")
    payload, digest = data[header:-32], data[-32:]
    if hashlib.sha256(payload).digest() != digest:
        raise ChecksumMismatch("index payload does not match checksum")
    obj = json.loads(payload.decode("utf-8"))
    postings = {
        klass: ClassPostings(
            screens=np.array(entry["screens"], dtype=np.int64),
            entry_screen=np.array(entry["entry_screen"], dtype=np.int64),
            entry_tile=np.array(entry["entry_tile"], dtype=np.int64),
            entry_area=np.array(entry["entry_area"], dtype=np.float64),
            entry_count=np.array(entry["entry_count"], dtype=np.float64),
        )
        for klass, entry in obj["classes"].items()
    }
    return ScreenIndex(obj["screen_ids"], postings, obj["idf"])


def parse_screen_obj(data: dict) -> ScreenDoc:
    try:
        elements = tuple(
            ScreenElement(
                label=str(e["label"]),
                android_class=str(e.get("android_class", "")),
                container_class=(None if e.get("container_class") is None
                                 else str(e["container_class"])),
                bbox=tuple(float(v) for v in e["bbox"]),
            )
            for e in data["elements"])
        return ScreenDoc(id=str(data["id"]), width=int(data["width"]),
                         height=int(data["height"]), elements=elements)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed screen document: {exc}") from exc


def screen_to_obj(doc: ScreenDoc) -> dict:
    return {
        "id": doc.id,
        "width": doc.width,
        "height": doc.height,
        "elements": [
            {"label": e.label, "android_class": e.android_class,
             "container_class": e.container_class, "bbox": list(e.bbox)}
            for e in doc.elements
        ],
    }


def load_corpus_dir(path: str | Path) -> list[ScreenDoc]:
    """Read every screen document (*.json) in a corpus directory."""
    root = Path(path)
    docs = []
    for file in sorted(root.glob("*.json")):
        docs.append(parse_screen_obj(json.loads(file.read_text())))
    return docs
