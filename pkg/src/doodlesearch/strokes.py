"""Raw drawing input and its delta-encoded normalized form.

A drawing arrives as a sequence of strokes, each stroke the points captured
between one touch-down and the matching touch-up. For recognition the
drawing is converted to a flat sequence of 5-tuples
(dx, dy, pen_down, pen_up, done): per-vertex deltas divided by the larger
canvas dimension, plus a one-hot pen state. Exactly one state flag is set
per vertex, ``pen_up`` marks the last vertex of each stroke and ``done``
replaces ``pen_up`` on the final vertex of the drawing.

Deltas are chained across strokes: the first vertex of a stroke is encoded
relative to the previous stroke's last vertex (the very first one relative
to the canvas origin), so integrating the deltas reproduces the absolute
vertex positions and the vertex count is preserved exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import DoodleSearchError

Point = tuple[float, float]

# Coordinates within this many pixels outside the canvas are clamped to the
# edge instead of rejected; pointer events commonly jitter past the border.
EDGE_TOLERANCE_PX = 1.0


class EmptyInput(DoodleSearchError):
    """No strokes, or a stroke without points."""

    code = "empty_input"


class OutOfBounds(DoodleSearchError):
    """Coordinate more than one pixel outside the canvas."""

    code = "out_of_bounds"


class DegenerateStroke(DoodleSearchError):
    """Stroke with zero arc length cannot be resampled."""

    code = "degenerate_stroke"


@dataclass(frozen=True)
class RawStroke:
    """Points drawn between one touch-down and touch-up, in pixels."""

    points: tuple[Point, ...]

    def __post_init__(self):
        if not self.points:
            raise EmptyInput("stroke has no points")


@dataclass(frozen=True)
class Stroke5Point:
    dx: float
    dy: float
    pen_down: int
    pen_up: int
    done: int


@dataclass(frozen=True)
class Stroke5Sequence:
    """Delta-encoded drawing plus the canvas it was drawn on."""

    points: tuple[Stroke5Point, ...]
    canvas: tuple[int, int]

    def __len__(self) -> int:
        return len(self.points)

    def stroke_count(self) -> int:
        return sum(1 for p in self.points if p.pen_up or p.done)

    def to_strokes(self) -> list[list[Point]]:
        """Integrate deltas back into per-stroke vertex lists.

        Positions are in normalized units (multiply by max(canvas) to get
        pixels). The origin is the canvas origin, matching the encoding.
        """
        strokes: list[list[Point]] = []
        current: list[Point] = []
        x = y = 0.0
        for p in self.points:
            x += p.dx
            y += p.dy
            current.append((x, y))
            if p.pen_up or p.done:
                strokes.append(current)
                current = []
        if current:
            strokes.append(current)
        return strokes


@dataclass(frozen=True)
class NormBBox:
    """Axis-aligned box in canvas fractions, each field in [0, 1]."""

    x: float
    y: float
    w: float
    h: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x, self.y, self.w, self.h)


def _clamp_point(x: float, y: float, width: float, height: float) -> Point:
    if (x < -EDGE_TOLERANCE_PX or x > width + EDGE_TOLERANCE_PX
            or y < -EDGE_TOLERANCE_PX or y > height + EDGE_TOLERANCE_PX):
        raise OutOfBounds(f"point ({x}, {y}) outside {width}x{height} canvas")
    return (min(max(x, 0.0), float(width)), min(max(y, 0.0), float(height)))


def _check_strokes(strokes: Sequence[RawStroke]) -> None:
    if not strokes:
        raise EmptyInput("no strokes")
    for s in strokes:
        if not s.points:
            raise EmptyInput("stroke has no points")


def normalize_strokes(strokes: Sequence[RawStroke],
                      canvas: tuple[int, int]) -> Stroke5Sequence:
    """Convert raw strokes to the delta-encoded 5-tuple sequence.

    Deltas are divided by max(canvas width, canvas height) so shapes keep
    their aspect ratio and every |dx|, |dy| is at most 1.
    """
    _check_strokes(strokes)
    width, height = canvas
    if width <= 0 or height <= 0:
        raise ValueError(f"canvas dimensions must be positive, got {canvas}")
    divisor = float(max(width, height))
    out: list[Stroke5Point] = []
    px, py = 0.0, 0.0
    last_stroke = len(strokes) - 1
    for si, stroke in enumerate(strokes):
        last_point = len(stroke.points) - 1
        for pi, (x, y) in enumerate(stroke.points):
            x, y = _clamp_point(x, y, width, height)
            dx = (x - px) / divisor
            dy = (y - py) / divisor
            px, py = x, y
            if si == last_stroke and pi == last_point:
                flags = (0, 0, 1)
            elif pi == last_point:
                flags = (0, 1, 0)
            else:
                flags = (1, 0, 0)
            out.append(Stroke5Point(dx, dy, *flags))
    return Stroke5Sequence(tuple(out), (int(width), int(height)))


def bbox_of(strokes: Sequence[RawStroke], canvas: tuple[int, int]) -> NormBBox:
    """Tightest box over all stroke points, normalized per canvas axis."""
    _check_strokes(strokes)
    width, height = canvas
    xs = [p[0] for s in strokes for p in s.points]
    ys = [p[1] for s in strokes for p in s.points]
    x1 = min(max(min(xs), 0.0), float(width))
    x2 = min(max(max(xs), 0.0), float(width))
    y1 = min(max(min(ys), 0.0), float(height))
    y2 = min(max(max(ys), 0.0), float(height))
    return NormBBox(x1 / width, y1 / height,
                    (x2 - x1) / width, (y2 - y1) / height)


def arc_length(points: Sequence[Point]) -> float:
    return math.fsum(math.dist(points[i - 1], points[i])
                     for i in range(1, len(points)))


def resample_stroke(points: Sequence[Point], n: int) -> list[Point]:
    """Resample a polyline to n points equally spaced along its length.

    The first and last input points are preserved; intermediate output
    points sit on the original polyline at arc-length positions
    i * L / (n - 1).
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    total = arc_length(points)
    if len(points) < 2 or total <= 0.0:
        raise DegenerateStroke("stroke has zero arc length")
    cum = [0.0]
    for i in range(1, len(points)):
        cum.append(cum[-1] + math.dist(points[i - 1], points[i]))
    out: list[Point] = [tuple(points[0])]
    seg = 1
    for i in range(1, n - 1):
        target = total * i / (n - 1)
        while cum[seg] < target:
            seg += 1
        span = cum[seg] - cum[seg - 1]
        t = 0.0 if span == 0.0 else (target - cum[seg - 1]) / span
        ax, ay = points[seg - 1]
        bx, by = points[seg]
        out.append((ax + (bx - ax) * t, ay + (by - ay) * t))
    out.append(tuple(points[-1]))
    return out


def load_stroke_file(path: str | Path) -> tuple[list[RawStroke], tuple[int, int]]:
    """Read a drawing file: {"canvas": [w, h], "strokes": [[[x, y], ...], ...]}."""
    data = json.loads(Path(path).read_text())
    return parse_stroke_obj(data)


def parse_stroke_obj(data: dict) -> tuple[list[RawStroke], tuple[int, int]]:
    try:
        w, h = data["canvas"]
        strokes = [RawStroke(tuple((float(x), float(y)) for x, y in pts))
                   for pts in data["strokes"]]
    except EmptyInput:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed stroke document: {exc}") from exc
    if not strokes:
        raise EmptyInput("no strokes in document")
    return strokes, (int(w), int(h))


def dump_stroke_file(strokes: Sequence[RawStroke], canvas: tuple[int, int],
                     path: str | Path) -> None:
    doc = {"canvas": list(canvas),
           "strokes": [[[x, y] for x, y in s.points] for s in strokes]}
    Path(path).write_text(json.dumps(doc))
