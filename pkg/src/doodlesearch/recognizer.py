"""Incremental doodle classification by template matching.

A partial doodle (the strokes drawn so far for one element) is classified
against one or more canonical templates per class. Both the query and each
template stroke-prefix are turned into a fixed-size point cloud: 64 points
distributed over the strokes proportionally to arc length, resampled
uniformly along each stroke, then translated to the centroid and scaled to
unit RMS radius. The class distance is the mean point-to-point distance to
the best-matching template prefix, picking the prefix with as many strokes
as the query has drawn (capped at the template's stroke count; extra query
strokes fold into the full-template comparison).

Confidences are a softmax over standardized negative distances: they sum
to one and any strictly monotone rescaling of the raw distances leaves the
ranking unchanged. The whole pipeline is deterministic and invariant under
uniform scaling and translation of the input points.

The interface deliberately hides the matcher: a learned model can replace
TemplateSet/classify_partial without touching callers.
"""

from __future__ import annotations

import json
import math
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DoodleSearchError
from .query import DOODLE_CLASSES
from .strokes import (EmptyInput, Point, RawStroke, Stroke5Sequence,
                      arc_length, normalize_strokes, resample_stroke)

RESAMPLE_POINTS = 64


class ParseError(DoodleSearchError):
    """Template or dataset file does not parse."""

    code = "parse_error"


class MissingClass(DoodleSearchError):
    """A doodle class has no template in the file."""

    code = "missing_class"

    def __init__(self, klass: str):
        super().__init__(f"no template for class {klass!r}")
        self.klass = klass


class UntrainedClass(DoodleSearchError):
    """TemplateSet lacks templates for some class."""

    code = "untrained_class"


class UnknownLabel(DoodleSearchError):
    """Dataset label outside the doodle vocabulary."""

    code = "unknown_label"


@dataclass(frozen=True)
class Prediction:
    klass: str
    confidence: float


def _allocate(lengths: Sequence[float], n: int) -> list[int]:
    """Split n sample points over strokes proportionally to arc length.

    Cumulative rounding keeps the total exactly n; every stroke gets at
    least one point (stolen from the largest allocation if needed).
    """
    k = len(lengths)
    total = math.fsum(lengths)
    if total <= 0.0:
        counts = [n // k] * k
        for i in range(n - sum(counts)):
            counts[i] += 1
        return counts
    counts = []
    prev = 0
    cum = 0.0
    for length in lengths:
        cum += length
        target = round(n * cum / total)
        counts.append(target - prev)
        prev = target
    for i in range(k):
        while counts[i] < 1:
            j = max(range(k), key=lambda t: counts[t])
            if counts[j] <= 1:
                break
            counts[j] -= 1
            counts[i] += 1
    return counts


def _resample_lax(points: Sequence[Point], n: int) -> list[Point]:
    """Like resample_stroke but tolerates dots and single-sample output."""
    if n == 1:
        if len(points) < 2 or arc_length(points) <= 0.0:
            return [tuple(points[0])]
        mid = resample_stroke(points, 3)
        return [mid[1]]
    if len(points) < 2 or arc_length(points) <= 0.0:
        return [tuple(points[0])] * n
    return resample_stroke(points, n)


def build_cloud(strokes: Sequence[Sequence[Point]],
                n: int = RESAMPLE_POINTS) -> np.ndarray:
    """Fixed-size ordered point cloud over a multi-stroke drawing."""
    strokes = [s for s in strokes if s]
    if not strokes:
        raise EmptyInput("no strokes to build a cloud from")
    if len(strokes) > n:
        strokes = strokes[:n]
    counts = _allocate([arc_length(s) for s in strokes], n)
    pts: list[Point] = []
    for stroke, count in zip(strokes, counts):
        pts.extend(_resample_lax(stroke, count))
    return np.asarray(pts, dtype=np.float64)


def normalize_cloud(cloud: np.ndarray) -> np.ndarray:
    """Translate to the centroid and scale to unit RMS radius."""
    centered = cloud - cloud.mean(axis=0)
    scale = math.sqrt(float((centered ** 2).sum(axis=1).mean()))
    if scale < 1e-12:
        return np.zeros_like(centered)
    return centered / scale


def cloud_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Mean distance between position-aligned points of two clouds."""
    return float(np.sqrt(((a - b) ** 2).sum(axis=1)).mean())


@dataclass(frozen=True)
class Template:
    """One canonical drawing: raw strokes plus per-prefix clouds."""

    strokes: tuple[tuple[Point, ...], ...]
    prefix_clouds: tuple[np.ndarray, ...]  # prefix_clouds[k-1] = strokes[:k]

    @classmethod
    def from_strokes(cls, strokes: Sequence[Sequence[Point]]) -> "Template":
        if not strokes or any(not s for s in strokes):
            raise ParseError("template with empty stroke")
        clouds = tuple(
            normalize_cloud(build_cloud(strokes[:k]))
            for k in range(1, len(strokes) + 1))
        return cls(tuple(tuple(map(tuple, s)) for s in strokes), clouds)

    @property
    def stroke_count(self) -> int:
        return len(self.strokes)


class TemplateSet:
    """Immutable per-class template collection."""

    def __init__(self, classes: dict[str, list[Template]]):
        self.classes = classes

    def validate(self) -> None:
        for klass in sorted(DOODLE_CLASSES):
            if not self.classes.get(klass):
                raise UntrainedClass(f"no templates for class {klass!r}")

    def class_names(self) -> list[str]:
        return sorted(self.classes)

    def template_strokes(self, klass: str, variant: int = 0) -> list[list[Point]]:
        """Raw strokes of one template, for replay in tests and tools."""
        return [list(s) for s in self.classes[klass][variant].strokes]


def load_templates(path: str | Path) -> TemplateSet:
    """Read {"version": 1, "classes": {name: [{"strokes": [...]}, ...]}}."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read template file: {exc}") from exc
    if not isinstance(data, dict) or "classes" not in data:
        raise ParseError("template file lacks a 'classes' object")
    classes: dict[str, list[Template]] = {}
    try:
        for klass, entries in data["classes"].items():
            classes[klass] = [
                Template.from_strokes([[(float(x), float(y)) for x, y in stroke]
                                       for stroke in entry["strokes"]])
                for entry in entries]
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed template entry: {exc}") from exc
    for klass in sorted(DOODLE_CLASSES):
        if not classes.get(klass):
            raise MissingClass(klass)
    return TemplateSet(classes)


def default_templates() -> TemplateSet:
    return load_templates(Path(__file__).parent / "data" / "templates.json")


def classify_partial(strokes: Stroke5Sequence,
                     templates: TemplateSet) -> list[Prediction]:
    """Rank all 23 classes for a partial doodle, best first.

    Callers typically show the top three. Ties in confidence break by
    class name so the ranking is fully deterministic.
    """
    if len(strokes) == 0:
        raise EmptyInput("empty stroke sequence")
    templates.validate()
    stroke_points = strokes.to_strokes()
    query = normalize_cloud(build_cloud(stroke_points))
    drawn = len(stroke_points)
    names = sorted(DOODLE_CLASSES)
    dists = np.empty(len(names))
    for i, name in enumerate(names):
        best = math.inf
        for template in templates.classes[name]:
            prefix = min(drawn, template.stroke_count)
            d = cloud_distance(query, template.prefix_clouds[prefix - 1])
            if d < best:
                best = d
        dists[i] = best
    std = float(dists.std())
    zscores = (dists - dists.mean()) / std if std > 1e-12 else np.zeros_like(dists)
    exp = np.exp(-zscores - (-zscores).max())
    conf = exp / exp.sum()
    order = sorted(range(len(names)), key=lambda i: (-conf[i], names[i]))
    return [Prediction(names[i], float(conf[i])) for i in order]


@dataclass(frozen=True)
class LabeledDoodle:
    label: str
    strokes: tuple[RawStroke, ...]
    canvas: tuple[int, int]


def load_labeled_dataset(path: str | Path) -> list[LabeledDoodle]:
    """Read a JSONL dataset: {"label": ..., "canvas": [w,h], "strokes": [...]}."""
    records = []
    with open(path) as fh:
        for line_no, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                strokes = tuple(
                    RawStroke(tuple((float(x), float(y)) for x, y in pts))
                    for pts in obj["strokes"])
                records.append(LabeledDoodle(
                    label=str(obj["label"]),
                    strokes=strokes,
                    canvas=(int(obj["canvas"][0]), int(obj["canvas"][1]))))
            except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
                raise ParseError(f"bad dataset record on line {line_no}: {exc}")
    return records


@dataclass(frozen=True)
class StatSummary:
    avg: float
    median: float
    min: float
    max: float
    sd: float

    @classmethod
    def of(cls, values: Sequence[float]) -> "StatSummary":
        return cls(avg=statistics.fmean(values),
                   median=float(statistics.median(values)),
                   min=float(min(values)), max=float(max(values)),
                   sd=statistics.pstdev(values))


@dataclass(frozen=True)
class RecognizerClassReport:
    klass: str
    count: int
    strokes: StatSummary
    top1_first: Optional[StatSummary]  # None if no doodle ever hit top-1
    top1_wrong_last_pct: float
    top1_wrong_all_pct: float
    top3_first: Optional[StatSummary]
    top3_wrong_last_pct: float
    top3_wrong_all_pct: float


def eval_recognizer(dataset: Iterable[LabeledDoodle],
                    templates: TemplateSet) -> dict[str, RecognizerClassReport]:
    """Per-class partial-recognition statistics over a labeled dataset.

    For every doodle the classifier runs after each stroke; the report
    gives, per class, stroke-count statistics, the first stroke at which
    the true class ranks top-1 / within the top-3 (over the doodles that
    get there at all), and the fraction still wrong at the last stroke and
    wrong at every stroke.
    """
    per_class: dict[str, list[dict]] = {}
    for doodle in dataset:
        if doodle.label not in DOODLE_CLASSES:
            raise UnknownLabel(f"unknown label {doodle.label!r}")
        ranks = []
        for k in range(1, len(doodle.strokes) + 1):
            seq = normalize_strokes(doodle.strokes[:k], doodle.canvas)
            preds = classify_partial(seq, templates)
            ranks.append(1 + [p.klass for p in preds].index(doodle.label))
        first1 = next((k for k, r in enumerate(ranks, 1) if r == 1), None)
        first3 = next((k for k, r in enumerate(ranks, 1) if r <= 3), None)
        per_class.setdefault(doodle.label, []).append({
            "strokes": len(doodle.strokes),
            "first1": first1, "first3": first3,
            "wrong1_last": ranks[-1] != 1, "wrong3_last": ranks[-1] > 3,
            "wrong1_all": first1 is None, "wrong3_all": first3 is None,
        })
    reports = {}
    for klass, rows in sorted(per_class.items()):
        n = len(rows)
        hit1 = [r["first1"] for r in rows if r["first1"] is not None]
        hit3 = [r["first3"] for r in rows if r["first3"] is not None]
        reports[klass] = RecognizerClassReport(
            klass=klass, count=n,
            strokes=StatSummary.of([r["strokes"] for r in rows]),
            top1_first=StatSummary.of(hit1) if hit1 else None,
            top1_wrong_last_pct=100.0 * sum(r["wrong1_last"] for r in rows) / n,
            top1_wrong_all_pct=100.0 * sum(r["wrong1_all"] for r in rows) / n,
            top3_first=StatSummary.of(hit3) if hit3 else None,
            top3_wrong_last_pct=100.0 * sum(r["wrong3_last"] for r in rows) / n,
            top3_wrong_all_pct=100.0 * sum(r["wrong3_all"] for r in rows) / n,
        )
    return reports
