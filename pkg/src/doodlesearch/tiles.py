"""The 6x4 tile grid shared by screen indexing and sketch scoring.

Screens and the drawing canvas are both partitioned into 24 equal tiles,
6 rows of 4 columns. Tile index = row * 4 + col, rows counted top to bottom
and columns left to right. All geometry here works on rectangles expressed
as fractions of the canvas, i.e. (x, y, w, h) with every value in [0, 1].

Both the index builder and the query-side coverage use exactly these
functions, so the two sides of the scorer agree bit for bit.
"""

from __future__ import annotations

import math
from typing import Iterable

from .errors import DoodleSearchError

GRID_ROWS = 6
GRID_COLS = 4
TILE_COUNT = GRID_ROWS * GRID_COLS

TILE_W = 1.0 / GRID_COLS
TILE_H = 1.0 / GRID_ROWS
TILE_AREA = TILE_W * TILE_H

Rect = tuple[float, float, float, float]


class InvalidTile(DoodleSearchError):
    """Tile index outside 0..23."""

    code = "invalid_tile"


def tile_bounds(tile: int) -> Rect:
    """Return (x, y, w, h) of a tile in unit-canvas coordinates."""
    if not 0 <= tile < TILE_COUNT:
        raise InvalidTile(f"tile index {tile} outside 0..{TILE_COUNT - 1}")
    row, col = divmod(tile, GRID_COLS)
    return (col / GRID_COLS, row / GRID_ROWS, TILE_W, TILE_H)


def rect_tile_overlaps(rect: Rect) -> list[tuple[int, float]]:
    """Overlap of one rectangle with every tile it touches.

    Returns (tile, fraction-of-tile-area) pairs, ascending by tile index,
    only for tiles with strictly positive overlap. Zero-area rectangles
    produce no overlaps.
    """
    x, y, w, h = rect
    if w <= 0.0 or h <= 0.0:
        return []
    x2, y2 = x + w, y + h
    col_lo = max(0, min(GRID_COLS - 1, math.floor(x / TILE_W)))
    col_hi = max(0, min(GRID_COLS - 1, math.ceil(x2 / TILE_W) - 1))
    row_lo = max(0, min(GRID_ROWS - 1, math.floor(y / TILE_H)))
    row_hi = max(0, min(GRID_ROWS - 1, math.ceil(y2 / TILE_H) - 1))
    out = []
    for row in range(row_lo, row_hi + 1):
        ty1 = row / GRID_ROWS
        ty2 = (row + 1) / GRID_ROWS
        oh = min(y2, ty2) - max(y, ty1)
        if oh <= 0.0:
            continue
        for col in range(col_lo, col_hi + 1):
            tx1 = col / GRID_COLS
            tx2 = (col + 1) / GRID_COLS
            ow = min(x2, tx2) - max(x, tx1)
            if ow <= 0.0:
                continue
            out.append((row * GRID_COLS + col, (ow * oh) / TILE_AREA))
    return out


def tile_coverage(rects: Iterable[Rect]) -> dict[int, tuple[float, int]]:
    """Per-tile (area fraction, element count) for a group of rectangles.

    Area fractions of overlapping rectangles add up and are clamped at 1;
    the count is the number of rectangles with positive overlap in the
    tile. Per-tile sums use math.fsum, so the result does not depend on
    the order of ``rects``.
    """
    fracs: dict[int, list[float]] = {}
    for rect in rects:
        for tile, frac in rect_tile_overlaps(rect):
            fracs.setdefault(tile, []).append(frac)
    return {
        tile: (min(1.0, math.fsum(parts)), len(parts))
        for tile, parts in sorted(fracs.items())
    }


def neighbor_tiles(tiles: Iterable[int]) -> set[int]:
    """8-adjacent tiles of every input tile, minus the inputs themselves."""
    tiles = set(tiles)
    for tile in tiles:
        if not 0 <= tile < TILE_COUNT:
            raise InvalidTile(f"tile index {tile} outside 0..{TILE_COUNT - 1}")
    out: set[int] = set()
    for tile in tiles:
        row, col = divmod(tile, GRID_COLS)
        for dr in (-1, 0, 1):
            for dc in (-1, 0, 1):
                if dr == 0 and dc == 0:
                    continue
                r, c = row + dr, col + dc
                if 0 <= r < GRID_ROWS and 0 <= c < GRID_COLS:
                    out.add(r * GRID_COLS + c)
    return out - tiles
