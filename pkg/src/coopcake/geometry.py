"""Cuts of the unit interval, their tiles, and Hausdorff-type comparisons."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

TOL = 1e-12


@dataclass(frozen=True)
class Tile:
    left: float
    right: float
    index: int

    def __post_init__(self):
        if self.left > self.right:
            raise ValueError(f"tile with left {self.left} > right {self.right}")

    @property
    def length(self) -> float:
        return self.right - self.left

    @property
    def degenerate(self) -> bool:
        return self.length <= TOL


def _check_endpoints(points: Sequence[float]) -> None:
    if len(points) < 2:
        raise ValueError("a cut needs at least the two endpoints 0 and 1")
    if abs(points[0]) > TOL or abs(points[-1] - 1.0) > TOL:
        raise ValueError(f"cut must start at 0 and end at 1, got {points[0]}..{points[-1]}")


@dataclass(frozen=True)
class ProperCut:
    """Strictly increasing cut points ``0 = x_0 < ... < x_k = 1``.

    ``r`` is optional context; when given, the tile count ``k`` must not exceed it.
    """

    points: tuple[float, ...]
    r: int | None = None

    def __post_init__(self):
        pts = tuple(float(x) for x in self.points)
        object.__setattr__(self, "points", pts)
        _check_endpoints(pts)
        for a, b in zip(pts, pts[1:]):
            if not b - a > TOL:
                raise ValueError(f"proper cut points must be strictly increasing: {pts}")
        if self.r is not None and self.tile_count > self.r:
            raise ValueError(f"{self.tile_count} tiles exceed r={self.r}")

    @property
    def tile_count(self) -> int:
        return len(self.points) - 1

    @property
    def min_tile_length(self) -> float:
        return min(b - a for a, b in zip(self.points, self.points[1:]))


@dataclass(frozen=True)
class ImproperCut:
    """Non-decreasing cut points; tiles may be degenerate.

    With ``r`` given the cut must have exactly ``2r - 1`` tiles.
    """

    points: tuple[float, ...]
    r: int | None = None

    def __post_init__(self):
        pts = tuple(float(x) for x in self.points)
        object.__setattr__(self, "points", pts)
        _check_endpoints(pts)
        for a, b in zip(pts, pts[1:]):
            if b < a - TOL:
                raise ValueError(f"improper cut points must be non-decreasing: {pts}")
        if self.r is not None and self.tile_count != 2 * self.r - 1:
            raise ValueError(
                f"an auxiliary cut for r={self.r} needs {2 * self.r - 1} tiles, got {self.tile_count}"
            )

    @property
    def tile_count(self) -> int:
        return len(self.points) - 1


Cut = Union[ProperCut, ImproperCut]


def tiles(cut: Cut) -> list[Tile]:
    pts = cut.points
    return [Tile(pts[i - 1], pts[i], i) for i in range(1, len(pts))]


def hausdorff_distance(A: Iterable[float], B: Iterable[float]) -> float:
    A = list(A)
    B = list(B)
    if not A or not B:
        raise ValueError("empty set has no Hausdorff distance")
    ab = max(min(abs(a - b) for b in B) for a in A)
    ba = max(min(abs(a - b) for a in A) for b in B)
    return max(ab, ba)


def collapse(cut: ImproperCut) -> ProperCut:
    """Forget degenerate tiles, keeping the distinct cut points."""
    pts = [cut.points[0]]
    for x in cut.points[1:]:
        if x - pts[-1] > TOL:
            pts.append(x)
    # a trailing degenerate tile may leave the last kept point just below 1
    pts[-1] = 1.0
    return ProperCut(tuple(pts))


def match_essential_tiles(approx: Cut, limit: ProperCut, eps: float) -> dict[int, int] | None:
    """Match every tile of ``limit`` to the approx tile whose endpoints are both within ``eps``.

    Returns ``{limit index: approx index}`` or ``None`` when some limit tile has no
    partner or a leftover approx tile is at least ``2 * eps`` long.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if eps >= limit.min_tile_length / 2:
        raise ValueError("eps must be smaller than half the minimal tile length of the limit cut")
    approx_tiles = tiles(approx)
    mapping: dict[int, int] = {}
    for I in tiles(limit):
        hits = [
            J.index
            for J in approx_tiles
            if abs(J.left - I.left) < eps and abs(J.right - I.right) < eps
        ]
        if len(hits) != 1:
            return None
        mapping[I.index] = hits[0]
    used = set(mapping.values())
    if any(J.length >= 2 * eps for J in approx_tiles if J.index not in used):
        return None
    return mapping
