"""Interactive sketch-based search over app screen layouts.

Draw UI elements one at a time; each element is recognized from its stroke
sequence and the screen corpus is re-ranked by a multi-scale tile
similarity score with per-class idf weighting.
"""

from .errors import DoodleSearchError
from .index import ScreenDoc, ScreenElement, ScreenIndex, build_index
from .query import Sketch, SketchElement, add_element
from .recognizer import TemplateSet, classify_partial, default_templates
from .scoring import Hyperparams, ScoredScreen, score_screens
from .strokes import NormBBox, RawStroke, Stroke5Sequence, normalize_strokes

__version__ = "0.1.0"

__all__ = [
    "DoodleSearchError",
    "Hyperparams",
    "NormBBox",
    "RawStroke",
    "ScoredScreen",
    "ScreenDoc",
    "ScreenElement",
    "ScreenIndex",
    "Sketch",
    "SketchElement",
    "Stroke5Sequence",
    "TemplateSet",
    "add_element",
    "build_index",
    "classify_partial",
    "default_templates",
    "normalize_strokes",
    "score_screens",
    "__version__",
]
