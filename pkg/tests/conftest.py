import random

import pytest

from doodlesearch.index import ScreenDoc, ScreenElement
from doodlesearch.query import ELEMENT_CLASSES, Sketch, SketchElement
from doodlesearch.strokes import NormBBox

SEARCHABLE_CLASSES = sorted(ELEMENT_CLASSES)


def make_element(label, bbox, android_class="View", container_class=None):
    return ScreenElement(label=label, android_class=android_class,
                         container_class=container_class,
                         bbox=tuple(float(v) for v in bbox))


def make_screen(sid, elements, width=400, height=600):
    return ScreenDoc(id=sid, width=width, height=height,
                     elements=tuple(elements))


def sketch_of(*items):
    """Build a sketch from (class, (x, y, w, h)) pairs, no merging."""
    return Sketch(tuple(SketchElement(klass, NormBBox(*bbox))
                        for klass, bbox in items))


def random_screen(rng: random.Random, sid: str, width=400, height=600,
                  max_elements=8) -> ScreenDoc:
    """A random screen over the searchable vocabulary; may repeat classes."""
    n = rng.randint(3, max_elements)
    elements = []
    for _ in range(n):
        klass = rng.choice(SEARCHABLE_CLASSES)
        w = rng.randint(10, width // 2)
        h = rng.randint(10, height // 2)
        x = rng.randint(0, width - w)
        y = rng.randint(0, height - h)
        elements.append(make_element(klass, (x, y, w, h)))
    return make_screen(sid, elements, width, height)


def random_sketch(rng: random.Random, max_elements=6) -> Sketch:
    items = []
    for _ in range(rng.randint(1, max_elements)):
        klass = rng.choice(SEARCHABLE_CLASSES)
        w = rng.uniform(0.02, 0.5)
        h = rng.uniform(0.02, 0.4)
        x = rng.uniform(0.0, 1.0 - w)
        y = rng.uniform(0.0, 1.0 - h)
        items.append((klass, (x, y, w, h)))
    return sketch_of(*items)


@pytest.fixture
def rng():
    return random.Random(1234)
