"""Exhaustive grid search over the five scoring weights.

The objective is mean reciprocal rank of each pair's target screen over
the full ranking (a target missing from the results scores reciprocal
rank 0). Ties between grid points break by top-10 hit count, then by the
lexicographically smallest (p1, p2, p3, delta_w, c_w) tuple, so the search
is fully deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import DoodleSearchError
from .index import ScreenIndex
from .query import Sketch
from .scoring import Hyperparams, score_screens


class TargetMissing(DoodleSearchError):
    """An evaluation pair's target screen is not in the index."""

    code = "target_missing"

    def __init__(self, target_id: str):
        super().__init__(f"target screen {target_id!r} not in index")
        self.target_id = target_id


class EmptyGrid(DoodleSearchError):
    """A grid axis has no candidate values."""

    code = "empty_grid"


@dataclass(frozen=True)
class EvalPair:
    sketch: Sketch
    target_id: str


@dataclass(frozen=True)
class GridSpec:
    p1: tuple[float, ...]
    p2: tuple[float, ...]
    p3: tuple[float, ...]
    delta_w: tuple[float, ...]
    c_w: tuple[float, ...]

    @classmethod
    def from_obj(cls, data: dict) -> "GridSpec":
        return cls(**{axis: tuple(float(v) for v in data[axis])
                      for axis in ("p1", "p2", "p3", "delta_w", "c_w")})

    def size(self) -> int:
        return (len(self.p1) * len(self.p2) * len(self.p3)
                * len(self.delta_w) * len(self.c_w))

    def points(self) -> list[Hyperparams]:
        for axis in ("p1", "p2", "p3", "delta_w", "c_w"):
            if not getattr(self, axis):
                raise EmptyGrid(f"grid axis {axis} has no values")
        return [Hyperparams(*combo) for combo in itertools.product(
            self.p1, self.p2, self.p3, self.delta_w, self.c_w)]


@dataclass(frozen=True)
class GridPointResult:
    hp: Hyperparams
    mrr: float
    top10_hits: int
    ranks: tuple[Optional[int], ...]  # per pair; None = target unranked


@dataclass(frozen=True)
class GridSearchReport:
    rows: tuple[GridPointResult, ...]
    best: Hyperparams


def target_rank(sketch: Sketch, index: ScreenIndex, hp: Hyperparams,
                target_id: str) -> Optional[int]:
    """1-based rank of the target in the full result list, None if absent."""
    results = score_screens(sketch, index, hp, top_n=max(1, index.screen_count))
    for pos, scored in enumerate(results, 1):
        if scored.screen_id == target_id:
            return pos
    return None


def grid_search(pairs: Sequence[EvalPair], index: ScreenIndex,
                grid: GridSpec) -> tuple[Hyperparams, GridSearchReport]:
    """Evaluate every grid point and return the best one plus a full report."""
    if not pairs:
        raise ValueError("need at least one evaluation pair")
    for pair in pairs:
        if not index.has_screen(pair.target_id):
            raise TargetMissing(pair.target_id)
    rows = []
    for hp in grid.points():
        ranks = tuple(target_rank(p.sketch, index, hp, p.target_id)
                      for p in pairs)
        mrr = sum(0.0 if r is None else 1.0 / r for r in ranks) / len(ranks)
        top10 = sum(1 for r in ranks if r is not None and r <= 10)
        rows.append(GridPointResult(hp, mrr, top10, ranks))
    best = max(rows, key=lambda row: (row.mrr, row.top10_hits,
                                      tuple(-v for v in row.hp.as_tuple())))
    return best.hp, GridSearchReport(tuple(rows), best.hp)


def format_report(report: GridSearchReport) -> str:
    """Tab-separated table: one header line, one row per grid point."""
    lines = ["p1\tp2\tp3\tdelta_w\tc_w\tmrr\ttop10_hits"]
    for row in report.rows:
        p1, p2, p3, dw, cw = row.hp.as_tuple()
        lines.append(f"{p1:g}\t{p2:g}\t{p3:g}\t{dw:g}\t{cw:g}"
                     f"\t{row.mrr:.6f}\t{row.top10_hits}")
    return "\n".join(lines) + "\n"
