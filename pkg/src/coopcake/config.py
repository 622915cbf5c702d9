"""Natural and auxiliary configurations (a cut plus an allocation of tiles to plates).

Allocations are stored as tuples: ``alloc[i - 1]`` is the plate (1..r) serving tile ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Union

import numpy as np

from .geometry import TOL, ImproperCut, ProperCut, collapse, hausdorff_distance, tiles


def _check_plates(alloc: tuple[int, ...], r: int) -> None:
    for plate in alloc:
        if not 1 <= plate <= r:
            raise ValueError(f"plate {plate} outside 1..{r}")


@dataclass(frozen=True)
class NaturalConfig:
    """A proper cut with an injective allocation of its tiles to ``r`` plates."""

    cut: ProperCut
    alloc: tuple[int, ...]
    r: int

    def __post_init__(self):
        object.__setattr__(self, "alloc", tuple(int(a) for a in self.alloc))
        if self.cut.tile_count > self.r:
            raise ValueError(f"{self.cut.tile_count} tiles exceed r={self.r}")
        if len(self.alloc) != self.cut.tile_count:
            raise ValueError("allocation must cover exactly the tiles of the cut")
        _check_plates(self.alloc, self.r)
        if len(set(self.alloc)) != len(self.alloc):
            raise ValueError(f"allocation {self.alloc} is not injective")

    @classmethod
    def make(cls, points, alloc, r: int) -> "NaturalConfig":
        return cls(ProperCut(tuple(points)), tuple(alloc), r)

    @property
    def points(self) -> tuple[float, ...]:
        return self.cut.points

    def plate_contents(self) -> dict[int, tuple[float, float]]:
        """Segment served on each non-empty plate."""
        return {self.alloc[t.index - 1]: (t.left, t.right) for t in tiles(self.cut)}

    def to_json(self) -> dict[str, Any]:
        return config_to_json(self)


@dataclass(frozen=True)
class AuxConfig:
    """An improper cut into ``2r - 1`` tiles with an essentially injective allocation."""

    cut: ImproperCut
    alloc: tuple[int, ...]
    r: int

    def __post_init__(self):
        object.__setattr__(self, "alloc", tuple(int(a) for a in self.alloc))
        if self.cut.tile_count != 2 * self.r - 1:
            raise ValueError(
                f"auxiliary configurations for r={self.r} need {2 * self.r - 1} tiles, "
                f"got {self.cut.tile_count}"
            )
        if len(self.alloc) != self.cut.tile_count:
            raise ValueError("allocation must cover exactly the tiles of the cut")
        _check_plates(self.alloc, self.r)
        served = [self.alloc[t.index - 1] for t in tiles(self.cut) if not t.degenerate]
        if len(set(served)) != len(served):
            raise ValueError(f"allocation {self.alloc} puts two non-degenerate tiles on one plate")

    @classmethod
    def make(cls, points, alloc, r: int) -> "AuxConfig":
        return cls(ImproperCut(tuple(points)), tuple(alloc), r)

    @property
    def points(self) -> tuple[float, ...]:
        return self.cut.points

    def to_json(self) -> dict[str, Any]:
        return config_to_json(self)


Config = Union[NaturalConfig, AuxConfig]


def matrix_rep(c: AuxConfig) -> np.ndarray:
    """The ``n x r`` tile-length matrix; row = tile, column = plate."""
    M = np.zeros((c.cut.tile_count, c.r))
    for t in tiles(c.cut):
        if not t.degenerate:
            M[t.index - 1, c.alloc[t.index - 1] - 1] = t.length
    return M


def equivalent(a: AuxConfig, b: AuxConfig) -> bool:
    if a.r != b.r:
        raise ValueError(f"cannot compare configurations with r={a.r} and r={b.r}")
    return bool(np.all(np.abs(matrix_rep(a) - matrix_rep(b)) <= TOL))


def project(c: AuxConfig) -> NaturalConfig:
    """Drop degenerate tiles and keep the allocation of the remaining ones."""
    alloc = tuple(c.alloc[t.index - 1] for t in tiles(c.cut) if not t.degenerate)
    return NaturalConfig(collapse(c.cut), alloc, c.r)


def lift(c: NaturalConfig) -> AuxConfig:
    """A preimage under :func:`project`: degenerate tiles padded at the left end.

    The padding tiles go to the unused plates in increasing order (cycling if
    there are more padding tiles than unused plates).
    """
    r = c.r
    pad = 2 * r - 1 - c.cut.tile_count
    unused = [p for p in range(1, r + 1) if p not in c.alloc] or [c.alloc[0]]
    padding = tuple(unused[i % len(unused)] for i in range(pad))
    points = (0.0,) * pad + c.cut.points
    return AuxConfig(ImproperCut(points), padding + c.alloc, r)


def neighborhood_contains(
    center: NaturalConfig,
    probe: NaturalConfig,
    eps: float,
    overlap_delta: float | None = None,
) -> bool:
    """Membership of ``probe`` in the ``eps``-neighborhood of ``center``.

    ``overlap_delta`` quantifies "overlap much bigger than eps"; default ``10 * eps``.
    """
    if overlap_delta is None:
        overlap_delta = 10 * eps
    if eps <= 0 or eps >= center.cut.min_tile_length / 2:
        raise ValueError("eps too large for this cut")
    if overlap_delta <= eps:
        raise ValueError("overlap_delta must exceed eps")
    if center.r != probe.r:
        raise ValueError("configurations have different plate counts")
    if hausdorff_distance(center.points, probe.points) >= eps:
        return False
    center_tiles = tiles(center.cut)
    for J in tiles(probe.cut):
        for I in center_tiles:
            overlap = min(I.right, J.right) - max(I.left, J.left)
            if overlap > overlap_delta and probe.alloc[J.index - 1] != center.alloc[I.index - 1]:
                return False
    return True


def config_to_json(c: Config) -> dict[str, Any]:
    return {
        "r": c.r,
        "cut": list(c.points),
        "alloc": {str(i + 1): plate for i, plate in enumerate(c.alloc)},
    }


def config_from_json(data: dict[str, Any], aux: bool = False) -> Config:
    r = int(data["r"])
    points = tuple(float(x) for x in data["cut"])
    raw = data["alloc"]
    if isinstance(raw, dict):
        alloc = tuple(int(raw[str(i)]) for i in range(1, len(points)))
    else:
        alloc = tuple(int(a) for a in raw)
    if aux:
        return AuxConfig(ImproperCut(points), alloc, r)
    return NaturalConfig(ProperCut(points), alloc, r)


def random_natural_config(rng: np.random.Generator, r: int) -> NaturalConfig:
    k = int(rng.integers(1, r + 1))
    while True:
        inner = np.sort(rng.uniform(0.0, 1.0, size=k - 1))
        points = (0.0, *inner.tolist(), 1.0)
        if all(b - a > 1e-9 for a, b in zip(points, points[1:])):
            break
    alloc = tuple(int(x) + 1 for x in rng.permutation(r)[:k])
    return NaturalConfig(ProperCut(points), alloc, r)


def random_aux_config(rng: np.random.Generator, r: int, degenerate: float = 0.4) -> AuxConfig:
    """Random auxiliary configuration; each tile is degenerate with probability ``degenerate``.

    At most ``r`` tiles stay non-degenerate so an essentially injective allocation exists.
    """
    n = 2 * r - 1
    while True:
        live = rng.uniform(size=n) >= degenerate
        if 1 <= live.sum() <= r:
            break
    lengths = np.where(live, rng.uniform(0.05, 1.0, size=n), 0.0)
    lengths /= lengths.sum()
    points = np.concatenate([[0.0], np.cumsum(lengths)])
    # zero lengths repeat points exactly; snap the final total (and its repeats) to 1
    points[points == points[-1]] = 1.0
    plates = iter(rng.permutation(r) + 1)
    alloc = tuple(int(next(plates)) if live[i] else int(rng.integers(1, r + 1)) for i in range(n))
    return AuxConfig(ImproperCut(tuple(points.tolist())), alloc, r)
