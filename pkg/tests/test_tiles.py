import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from doodlesearch.tiles import (TILE_AREA, TILE_COUNT, InvalidTile,
                                neighbor_tiles, rect_tile_overlaps,
                                tile_bounds, tile_coverage)


class TestNeighborTiles:
    def test_top_left_corner(self):
        assert neighbor_tiles({0}) == {1, 4, 5}

    def test_empty(self):
        assert neighbor_tiles(set()) == set()

    def test_interior(self):
        assert neighbor_tiles({9}) == {4, 5, 6, 8, 10, 12, 13, 14}

    def test_bottom_right_corner(self):
        assert neighbor_tiles({23}) == {18, 19, 22}

    def test_inputs_excluded(self):
        got = neighbor_tiles({9, 10})
        assert 9 not in got and 10 not in got
        assert got == {4, 5, 6, 7, 8, 11, 12, 13, 14, 15}

    def test_invalid_tile(self):
        with pytest.raises(InvalidTile):
            neighbor_tiles({24})


class TestRectOverlaps:
    def test_exact_tile(self):
        x, y, w, h = tile_bounds(0)
        got = rect_tile_overlaps((x, y, w, h))
        assert got == [(0, pytest.approx(1.0))]

    def test_zero_area(self):
        assert rect_tile_overlaps((0.5, 0.5, 0.0, 0.1)) == []

    def test_spanning_two_tiles(self):
        # covers half of each tile's width and 80% of the height:
        # 40% of tile 0 and 40% of tile 1
        got = rect_tile_overlaps((0.125, 0.0, 0.25, 0.8 / 6))
        tiles = dict(got)
        assert set(tiles) == {0, 1}
        assert tiles[0] == pytest.approx(0.4)
        assert tiles[1] == pytest.approx(0.4)

    def test_full_canvas_covers_everything(self):
        got = dict(rect_tile_overlaps((0.0, 0.0, 1.0, 1.0)))
        assert set(got) == set(range(TILE_COUNT))
        assert all(f == pytest.approx(1.0) for f in got.values())

    @given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
    @settings(max_examples=200)
    def test_area_conserved(self, x, y, w, h):
        w = min(w, 1.0 - x)
        h = min(h, 1.0 - y)
        got = rect_tile_overlaps((x, y, w, h))
        total = math.fsum(frac * TILE_AREA for _, frac in got)
        assert math.isclose(total, w * h, rel_tol=1e-9, abs_tol=1e-12)


class TestTileCoverage:
    def test_additive_area_and_count(self):
        x, y, w, h = tile_bounds(5)
        r1 = (x, y, w * 0.3, h)  # 30% of tile 5
        r2 = (x + w * 0.5, y, w * 0.3, h)
        got = tile_coverage([r1, r2])
        assert set(got) == {5}
        area, count = got[5]
        assert area == pytest.approx(0.6)
        assert count == 2

    def test_clamped_at_one(self):
        x, y, w, h = tile_bounds(3)
        got = tile_coverage([(x, y, w, h), (x, y, w, h)])
        assert got[3] == (1.0, 2)

    def test_order_independent_exactly(self):
        rects = [(0.01 * i, 0.02 * i, 0.3, 0.2) for i in range(7)]
        a = tile_coverage(rects)
        b = tile_coverage(list(reversed(rects)))
        assert a == b
