"""The live query: confirmed, positioned, classed sketch elements.

Drawn doodles come from a 23-class vocabulary; the search index speaks a
24-class screen-element vocabulary. Placeholder doodles map onto broader
screen semantics (a squiggle stands for text, a bare square for a
container, and so on) and the one compound case, text inside a box, is
merged into a single ``text_button`` element.

Sketch values are immutable; every edit returns a new Sketch.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .errors import DoodleSearchError
from .strokes import NormBBox

# The 16 single-style icon doodles plus the 7 free-style ones.
STYLIZED_DOODLE_CLASSES = (
    "avatar", "back", "cancel", "checkbox", "dropdown", "forward",
    "left_arrow", "menu", "play", "plus", "search", "setting", "share",
    "slider", "squiggle", "switch",
)
FLEXIBLE_DOODLE_CLASSES = (
    "camera", "cloud", "envelope", "house", "jail_window", "square", "star",
)
DOODLE_CLASSES = frozenset(STYLIZED_DOODLE_CLASSES + FLEXIBLE_DOODLE_CLASSES)

# Doodle vocabulary -> screen-element vocabulary. Placeholders are remapped,
# everything else keeps its name.
DOODLE_TO_ELEMENT = {name: name for name in DOODLE_CLASSES}
DOODLE_TO_ELEMENT.update({
    "squiggle": "text",
    "jail_window": "image",
    "cloud": "default_icon",
    "square": "container",
    "house": "home",
})

COMPOUND_TEXT_BUTTON = "text_button"
ELEMENT_CLASSES = frozenset(DOODLE_TO_ELEMENT.values()) | {COMPOUND_TEXT_BUTTON}

assert len(DOODLE_CLASSES) == 23
assert len(ELEMENT_CLASSES) == 24

# A hand-drawn squiggle may graze or slightly cross the box it sits in, so
# containment is tested with this slack (fraction of canvas) per edge.
CONTAINMENT_TOLERANCE = 0.02


class InvalidBBox(DoodleSearchError):
    """Bounding box extends outside the unit canvas."""

    code = "invalid_bbox"


class UnknownClass(DoodleSearchError):
    """Name is neither an element class nor a doodle class."""

    code = "unknown_class"


@dataclass(frozen=True)
class SketchElement:
    klass: str
    bbox: NormBBox
    source_doodle: Optional[str] = None


@dataclass(frozen=True)
class Sketch:
    elements: tuple[SketchElement, ...] = ()

    def __len__(self) -> int:
        return len(self.elements)


def validate_bbox(bbox: NormBBox) -> NormBBox:
    eps = 1e-9
    if (bbox.w < 0 or bbox.h < 0 or bbox.x < -eps or bbox.y < -eps
            or bbox.x + bbox.w > 1 + eps or bbox.y + bbox.h > 1 + eps):
        raise InvalidBBox(f"bbox {bbox.as_tuple()} outside unit canvas")
    return bbox


def add_element(sketch: Sketch, doodle_class: str, bbox: NormBBox) -> Sketch:
    """Append a confirmed doodle and apply the compound merge."""
    if doodle_class not in DOODLE_CLASSES:
        raise UnknownClass(f"unknown doodle class {doodle_class!r}")
    validate_bbox(bbox)
    element = SketchElement(DOODLE_TO_ELEMENT[doodle_class], bbox, doodle_class)
    return merge_compound_elements(Sketch(sketch.elements + (element,)))


def remove_last_element(sketch: Sketch) -> Sketch:
    """Drop the last element; a merged text button goes as one unit."""
    if not sketch.elements:
        return sketch
    return Sketch(sketch.elements[:-1])


def _contains(outer: NormBBox, inner: NormBBox, tol: float) -> bool:
    return (inner.x >= outer.x - tol
            and inner.y >= outer.y - tol
            and inner.x + inner.w <= outer.x + outer.w + tol
            and inner.y + inner.h <= outer.y + outer.h + tol)


def merge_compound_elements(sketch: Sketch) -> Sketch:
    """Merge each qualifying squiggle-inside-square pair into a text button.

    A square merges only when everything nested in it (with tolerance) is a
    squiggle; it takes the largest-area contained squiggle and the merged
    text button replaces the later of the two constituents, keeping its
    position in the element order. Other contained squiggles stay. The
    merged element carries the square's bbox and no source doodle.
    """
    elements = list(sketch.elements)
    changed = True
    while changed:
        changed = False
        for i, square in enumerate(elements):
            if square.source_doodle != "square":
                continue
            nested = [(j, e) for j, e in enumerate(elements) if j != i
                      and _contains(square.bbox, e.bbox, CONTAINMENT_TOLERANCE)]
            if not nested or any(e.source_doodle != "squiggle" for _, e in nested):
                continue
            j = max(nested, key=lambda je: (je[1].bbox.w * je[1].bbox.h, -je[0]))[0]
            merged = SketchElement(COMPOUND_TEXT_BUTTON, square.bbox, None)
            keep_at = max(i, j)
            elements[keep_at] = merged
            del elements[min(i, j)]
            changed = True
            break
    return Sketch(tuple(elements))


def parse_sketch_obj(data: dict) -> Sketch:
    """Build a Sketch from {"elements": [{"class": ..., "bbox": [x,y,w,h]}]}.

    Accepts both element-class and raw doodle-class names; raw square and
    squiggle entries keep their doodle identity so the compound merge can
    fire after loading.
    """
    try:
        entries = list(data["elements"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed sketch document: {exc}") from exc
    elements = []
    for entry in entries:
        name = entry["class"]
        bbox = validate_bbox(NormBBox(*(float(v) for v in entry["bbox"])))
        if name in DOODLE_CLASSES:
            elements.append(SketchElement(DOODLE_TO_ELEMENT[name], bbox, name))
        elif name in ELEMENT_CLASSES:
            elements.append(SketchElement(name, bbox, None))
        else:
            raise UnknownClass(f"unknown class {name!r} in sketch document")
    return merge_compound_elements(Sketch(tuple(elements)))


def load_sketch(path: str | Path) -> Sketch:
    return parse_sketch_obj(json.loads(Path(path).read_text()))


def dump_sketch(sketch: Sketch, path: str | Path) -> None:
    doc = sketch_to_obj(sketch)
    Path(path).write_text(json.dumps(doc))


def sketch_to_obj(sketch: Sketch) -> dict:
    return {"elements": [{"class": e.klass, "bbox": list(e.bbox.as_tuple())}
                         for e in sketch.elements]}
