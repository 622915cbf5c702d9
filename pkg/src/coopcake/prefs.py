"""Preference oracles and score-based cooperative models.

A player's score for plate ``i`` is a weighted sum of the values of the segments
lying on the plates ``i + o`` for the offsets ``o`` of a neighbor pattern, with
offsets taken in the plate group. Preferred plates are the ``eps_pref``-argmax.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Protocol

import numpy as np

from .config import AuxConfig, NaturalConfig, project
from .symmetry import Element, PToralGroup, act


class PreferenceOracle(Protocol):
    r: int
    n_players: int

    def prefers(self, c, j: int, i: int) -> bool: ...


@dataclass(frozen=True)
class Density:
    """Piecewise-constant non-negative density on [0, 1).

    ``breaks`` are ``0 = b_0 < ... < b_m = 1`` and ``values[k]`` holds on ``[b_k, b_{k+1})``.
    """

    breaks: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        b = tuple(float(x) for x in self.breaks)
        v = tuple(float(x) for x in self.values)
        object.__setattr__(self, "breaks", b)
        object.__setattr__(self, "values", v)
        if len(b) != len(v) + 1 or not v:
            raise ValueError("need one value per interval")
        if b[0] != 0.0 or b[-1] != 1.0:
            raise ValueError("density intervals must partition [0, 1)")
        if any(y <= x for x, y in zip(b, b[1:])):
            raise ValueError("density intervals must be non-empty and ordered")
        if any(not math.isfinite(x) or x < 0 for x in v):
            raise ValueError("density values must be finite and non-negative")
        cdf = [0.0]
        for k, val in enumerate(v):
            cdf.append(cdf[-1] + val * (b[k + 1] - b[k]))
        object.__setattr__(self, "_cdf", np.array(cdf))
        object.__setattr__(self, "_breaks", np.array(b))

    @classmethod
    def from_pieces(cls, pieces) -> "Density":
        pieces = sorted((float(a), float(b), float(v)) for a, b, v in pieces)
        for (_, b0, _), (a1, _, _) in zip(pieces, pieces[1:]):
            if a1 != b0:
                raise ValueError(f"density pieces leave a gap or overlap at {b0} / {a1}")
        return cls((pieces[0][0],) + tuple(p[1] for p in pieces), tuple(p[2] for p in pieces))

    @classmethod
    def uniform(cls, value: float = 1.0) -> "Density":
        return cls((0.0, 1.0), (value,))

    def pieces(self) -> list[list[float]]:
        return [[a, b, v] for a, b, v in zip(self.breaks, self.breaks[1:], self.values)]

    @property
    def max_value(self) -> float:
        return max(self.values)

    def cdf(self, x):
        """Integral over [0, x]; vectorized."""
        return np.interp(x, self._breaks, self._cdf)

    def integral(self, a: float, b: float) -> float:
        # summed piecewise so dyadic inputs give exact results
        total = 0.0
        for lo, hi, v in zip(self.breaks, self.breaks[1:], self.values):
            left, right = max(a, lo), min(b, hi)
            if right > left:
                total += v * (right - left)
        return total


@dataclass(frozen=True)
class Evaluation:
    density: Density

    def __call__(self, a: float, b: float) -> float:
        return segment_value(self, a, b)


def segment_value(e: Evaluation, a: float, b: float) -> float:
    if a > b:
        raise ValueError(f"segment [{a}, {b}] has a > b")
    if not (0 <= a and b <= 1):
        raise ValueError(f"segment [{a}, {b}] is not inside [0, 1]")
    return e.density.integral(a, b)


@dataclass(frozen=True)
class Player:
    """One player's model: valuation density, neighbor weights and tolerance.

    ``weights`` maps group offsets to weights. ``plate_bonus`` adds a constant to
    the score of fixed plates; it breaks equivariance and exists for negative
    controls. ``empty_value`` is the value of an empty plate's (degenerate) content.
    """

    density: Density
    weights: dict[Element, float]
    eps_pref: float = 0.0
    empty_value: float = 0.0
    plate_bonus: dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if not any(w != 0 for w in self.weights.values()):
            raise ValueError("neighbor weights need at least one non-zero entry")
        if self.eps_pref < 0:
            raise ValueError("eps_pref must be non-negative")

    @property
    def evaluation(self) -> Evaluation:
        return Evaluation(self.density)


def chocolate_weights(group: PToralGroup) -> dict[Element, float]:
    """Own plate plus both seat-neighbors at the same table, all weight 1."""
    return _low_digit_offsets(group, {0: 1.0, 1: 1.0, -1: 1.0})


def weighted_weights(group: PToralGroup) -> dict[Element, float]:
    """``3 f(i) - f(i+1) + f(i-1)``, signs exactly as in the cooperative variant."""
    return _low_digit_offsets(group, {0: 3.0, 1: -1.0, -1: 1.0})


def symmetric_penalty_weights(group: PToralGroup) -> dict[Element, float]:
    """``3 f(i) - f(i+1) - f(i-1)``."""
    return _low_digit_offsets(group, {0: 3.0, 1: -1.0, -1: -1.0})


def own_plate_weights(group: PToralGroup) -> dict[Element, float]:
    return {group.identity: 1.0}


def _low_digit_offsets(group: PToralGroup, shifts: dict[int, float]) -> dict[Element, float]:
    out: dict[Element, float] = {}
    for s, w in shifts.items():
        g = group.identity[:-1] + (s % group.p,)
        out[g] = out.get(g, 0.0) + w
    return out


class ScoreOracle:
    """Score-based cooperative preferences for any number of players on ``group.r`` plates."""

    def __init__(self, group: PToralGroup, players: list[Player]):
        self.group = group
        self.players = list(players)
        self.r = group.r
        self.n_players = len(self.players)
        # per player: (weight, index array) with index[i] = plate receiving offset o from plate i,
        # summed in a fixed offset order so scores permute exactly under the group action
        self.terms = []
        for pl in self.players:
            terms = []
            for o, w in sorted((group.element(o), w) for o, w in pl.weights.items()):
                idx = np.array([act(group, o, i) - 1 for i in range(1, self.r + 1)])
                terms.append((w, idx))
            self.terms.append(terms)
        self.bonus = np.array(
            [[pl.plate_bonus.get(i, 0.0) for i in range(1, self.r + 1)] for pl in self.players]
        )
        self.eps_prefs = np.array([pl.eps_pref for pl in self.players])

    def _player(self, j: int) -> Player:
        if not 1 <= j <= self.n_players:
            raise ValueError(f"player {j} outside 1..{self.n_players}")
        return self.players[j - 1]

    def _natural(self, c) -> NaturalConfig:
        return project(c) if isinstance(c, AuxConfig) else c

    def contents(self, c, j: int) -> np.ndarray:
        """Value (for player j) of each plate's content, empty plates at ``empty_value``."""
        c = self._natural(c)
        pl = self._player(j)
        vals = np.full(self.r, pl.empty_value)
        for (a, b), plate in zip(zip(c.points, c.points[1:]), c.alloc):
            vals[plate - 1] = segment_value(pl.evaluation, a, b)
        return vals

    def _mix(self, j: int, vals: np.ndarray) -> np.ndarray:
        s = np.zeros(vals.shape)
        for w, idx in self.terms[j - 1]:
            s = s + w * vals[..., idx]
        return s + self.bonus[j - 1]

    def plate_scores(self, c, j: int) -> np.ndarray:
        return self._mix(j, self.contents(c, j))

    def margins(self, c, j: int) -> np.ndarray:
        """``s_i - (max s - eps_pref)``; plate i is preferred iff its margin is >= 0."""
        s = self.plate_scores(c, j)
        return s - (s.max() - self._player(j).eps_pref)

    def margin(self, c, j: int, i: int) -> float:
        return float(self.margins(c, j)[i - 1])

    def prefers(self, c, j: int, i: int) -> bool:
        return self.margin(c, j, i) >= 0

    def preferred_mask(self, c, j: int) -> np.ndarray:
        return self.margins(c, j) >= 0

    def preferred_plates(self, c, j: int, slack: float = 0.0) -> list[int]:
        m = self.margins(c, j)
        return [i + 1 for i in np.nonzero(m >= -slack)[0]]

    def gap_matrix(self, c) -> np.ndarray:
        """``max(0, -margin)`` for every (player, plate): how far each plate is from acceptable."""
        return np.array(
            [np.maximum(0.0, -self.margins(c, j)) + 0.0 for j in range(1, self.n_players + 1)]
        )

    def batch_gaps(self, points: np.ndarray, alloc: tuple[int, ...]) -> np.ndarray:
        """Gap matrices for a batch of cuts sharing one allocation.

        ``points`` is ``(B, k + 1)``; returns ``(B, n_players, r)``.
        """
        B = points.shape[0]
        out = np.empty((B, self.n_players, self.r))
        plates = np.asarray(alloc) - 1
        for j, pl in enumerate(self.players):
            cdf = pl.density.cdf(points)
            vals = np.full((B, self.r), pl.empty_value)
            vals[:, plates] = np.diff(cdf, axis=1)
            s = self._mix(j + 1, vals)
            out[:, j, :] = np.maximum(0.0, s.max(axis=1, keepdims=True) - pl.eps_pref - s) + 0.0
        return out

    def relaxed(self, eps: float) -> "ScoreOracle":
        return ScoreOracle(
            self.group, [replace(pl, eps_pref=pl.eps_pref + eps) for pl in self.players]
        )

    def lipschitz_bound(self, j: int) -> float:
        return lipschitz_bound(self, j)

    def with_players(self, players: list[Player]) -> "ScoreOracle":
        return ScoreOracle(self.group, players)


def plate_scores(o: ScoreOracle, c, j: int) -> np.ndarray:
    return o.plate_scores(c, j)


def prefers(o: PreferenceOracle, c, j: int, i: int) -> bool:
    return o.prefers(c, j, i)


def lipschitz_bound(o: ScoreOracle, j: int) -> float:
    """Each score moves by at most ``L * delta`` when one cut point moves by ``delta``."""
    pl = o._player(j)
    return pl.density.max_value * sum(abs(w) for w in pl.weights.values()) * 2


class TableOracle:
    """Fixed acceptance table, the same for every configuration (``table[j-1][i-1]``)."""

    def __init__(self, table):
        self.table = np.asarray(table, dtype=bool)
        self.n_players, self.r = self.table.shape

    def prefers(self, c, j: int, i: int) -> bool:
        return bool(self.table[j - 1, i - 1])


class FunctionOracle:
    def __init__(self, r: int, n_players: int, fn: Callable[[Any, int, int], bool]):
        self.r = r
        self.n_players = n_players
        self.fn = fn

    def prefers(self, c, j: int, i: int) -> bool:
        return bool(self.fn(c, j, i))


class PullbackOracle:
    """Preferences on auxiliary configurations obtained through the projection."""

    def __init__(self, base: PreferenceOracle):
        self.base = base
        self.r = base.r
        self.n_players = base.n_players

    def prefers(self, c: AuxConfig, j: int, i: int) -> bool:
        return self.base.prefers(project(c), j, i)


def pullback(o: PreferenceOracle) -> PullbackOracle:
    return PullbackOracle(o)
