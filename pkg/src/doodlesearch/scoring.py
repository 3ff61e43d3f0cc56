"""Multi-scale tile scoring of indexed screens against a sketch.

Each group of same-class sketch elements is scored against every screen
containing that class. A screen tile holding the class contributes at one
of three scales:

  * scale 1, same tile as the group: weight p1 times the product of the
    per-instance area ratios, plus an area/count agreement bonus
    delta_w * A_d * (1 - |A_d - A_o|) * max(0, 1 - c_w * |C_d - C_o|);
  * scale 2, an 8-adjacent neighbor of the group's tiles: p2 * A_o / C_o;
  * scale 3, anywhere on the screen: the per-screen base z starts at p3,
    so bare presence of the class still counts.

The per-screen total z is weighted by the class's idf and accumulated over
groups. Screens with zero score are omitted; results sort by descending
score, ties by ascending screen id. Group processing is canonicalized by
class name and per-tile sums are exact, so scores do not depend on element
order within the sketch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DoodleSearchError
from .index import ScreenIndex
from .query import Sketch
from .tiles import TILE_COUNT, neighbor_tiles, tile_coverage


class EmptyIndex(DoodleSearchError):
    """Cannot rank against an index with no screens."""

    code = "empty_index"


@dataclass(frozen=True)
class Hyperparams:
    """The five scoring weights; all must be non-negative."""

    p1: float = 39.0
    p2: float = 8.0
    p3: float = 9.0
    delta_w: float = 0.4
    c_w: float = 11.0

    def __post_init__(self):
        for name in ("p1", "p2", "p3", "delta_w", "c_w"):
            value = float(getattr(self, name))
            if value < 0:
                raise ValueError(f"hyperparameter {name} must be >= 0")
            object.__setattr__(self, name, value)

    @classmethod
    def parse(cls, text: str) -> "Hyperparams":
        """Parse the CLI form "p1,p2,p3,delta_w,c_w"."""
        parts = [float(p) for p in text.split(",")]
        if len(parts) != 5:
            raise ValueError(f"expected 5 comma-separated values, got {text!r}")
        return cls(*parts)

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.p1, self.p2, self.p3, self.delta_w, self.c_w)


@dataclass(frozen=True)
class DoodleGroup:
    """All sketch elements of one class, with their tile coverage."""

    klass: str
    tiles: dict[int, tuple[float, int]]


@dataclass(frozen=True)
class ScoredScreen:
    screen_id: str
    score: float


def doodle_tile_coverage(sketch: Sketch) -> list[DoodleGroup]:
    """Group sketch elements by class and compute their tile coverage.

    The sketch canvas is the unit square, so element bboxes are used as-is
    with the same grid geometry as screen decomposition. Groups come back
    sorted by class name.
    """
    rects: dict[str, list[tuple[float, float, float, float]]] = {}
    for element in sketch.elements:
        rects.setdefault(element.klass, []).append(element.bbox.as_tuple())
    return [DoodleGroup(klass, tile_coverage(group))
            for klass, group in sorted(rects.items())]


def score_screens(sketch: Sketch, index: ScreenIndex, hp: Hyperparams,
                  top_n: int) -> list[ScoredScreen]:
    """Rank the index's screens against the sketch; see the module docstring."""
    if index.screen_count == 0:
        raise EmptyIndex("index contains no screens")
    if top_n < 1:
        raise ValueError(f"top_n must be >= 1, got {top_n}")
    groups = doodle_tile_coverage(sketch)
    res = np.zeros(index.screen_count)
    touched = np.zeros(index.screen_count, dtype=bool)
    for group in groups:
        post = index.postings.get(group.klass)
        if post is None or not group.tiles:
            continue
        group_tiles = list(group.tiles)
        neighbors = neighbor_tiles(group_tiles)
        a_d_by_tile = np.zeros(TILE_COUNT)
        c_d_by_tile = np.zeros(TILE_COUNT)
        for tile, (area, count) in group.tiles.items():
            a_d_by_tile[tile] = area
            c_d_by_tile[tile] = count
        is_group_tile = np.zeros(TILE_COUNT, dtype=bool)
        is_group_tile[group_tiles] = True
        is_neighbor = np.zeros(TILE_COUNT, dtype=bool)
        if neighbors:
            is_neighbor[list(neighbors)] = True

        scale1 = is_group_tile[post.entry_tile]
        scale2 = is_neighbor[post.entry_tile]
        contrib = np.zeros(len(post.entry_tile))
        if scale1.any():
            a_o = post.entry_area[scale1]
            c_o = post.entry_count[scale1]
            a_d = a_d_by_tile[post.entry_tile[scale1]]
            c_d = c_d_by_tile[post.entry_tile[scale1]]
            area_match = 1.0 - np.abs(a_d - a_o)
            count_match = np.maximum(0.0, 1.0 - hp.c_w * np.abs(c_d - c_o))
            contrib[scale1] = (hp.p1 * (a_o / c_o) * (a_d / c_d)
                               + hp.delta_w * a_d * area_match * count_match)
        if scale2.any():
            contrib[scale2] = hp.p2 * (post.entry_area[scale2]
                                       / post.entry_count[scale2])
        z = np.full(post.df, hp.p3, dtype=np.float64)
        np.add.at(z, post.entry_screen, contrib)
        res[post.screens] += z * index.idf[group.klass]
        touched[post.screens] = True

    hits = [(index.screen_ids[o], float(res[o]))
            for o in np.nonzero(touched)[0] if res[o] > 0.0]
    hits.sort(key=lambda pair: (-pair[1], pair[0]))
    return [ScoredScreen(sid, score) for sid, score in hits[:top_n]]
