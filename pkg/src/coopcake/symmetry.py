"""The group (Z_p)^nu acting regularly on plates, and equivariance audits."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Iterable, Sequence

from .config import AuxConfig, Config, NaturalConfig

if TYPE_CHECKING:
    from .prefs import PreferenceOracle

Element = tuple[int, ...]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def prime_power(r: int) -> tuple[int, int] | None:
    """``(p, nu)`` with ``r == p**nu`` and p prime, or None."""
    for p in range(2, r + 1):
        if r % p == 0:
            nu, m = 0, r
            while m % p == 0:
                m //= p
                nu += 1
            return (p, nu) if m == 1 else None
    return None


@dataclass(frozen=True)
class PToralGroup:
    """(Z_p)^nu with plates encoded base p, most significant digit first.

    ``p`` need not be prime for the action to be well defined (Z_6 still acts
    regularly on 6 plates); :attr:`is_p_toral` reports whether it is.
    """

    p: int
    nu: int = 1
    elements: tuple[Element, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.p < 1 or self.nu < 1:
            raise ValueError("need p >= 1 and nu >= 1")
        object.__setattr__(
            self, "elements", tuple(itertools.product(range(self.p), repeat=self.nu))
        )

    @property
    def r(self) -> int:
        return self.p**self.nu

    @property
    def order(self) -> int:
        return self.r

    @property
    def is_p_toral(self) -> bool:
        return is_prime(self.p)

    @property
    def identity(self) -> Element:
        return (0,) * self.nu

    def element(self, g) -> Element:
        """Normalize an int (for nu=1) or a tuple to a group element."""
        if isinstance(g, int):
            g = (g,) if self.nu == 1 else self.encode(g % self.r + 1)
        g = tuple(int(x) % self.p for x in g)
        if len(g) != self.nu:
            raise ValueError(f"element {g} has wrong length for nu={self.nu}")
        return g

    def add(self, g, h) -> Element:
        g, h = self.element(g), self.element(h)
        return tuple((a + b) % self.p for a, b in zip(g, h))

    def neg(self, g) -> Element:
        return tuple((-a) % self.p for a in self.element(g))

    def encode(self, plate: int) -> Element:
        if not 1 <= plate <= self.r:
            raise ValueError(f"plate {plate} outside 1..{self.r}")
        m = plate - 1
        digits = []
        for _ in range(self.nu):
            m, d = divmod(m, self.p)
            digits.append(d)
        return tuple(reversed(digits))

    def decode(self, g: Element) -> int:
        m = 0
        for d in g:
            m = m * self.p + d
        return m + 1


def act(group: PToralGroup, g, plate: int) -> int:
    return group.decode(group.add(group.encode(plate), g))


def act_config(group: PToralGroup, g, c: Config) -> Config:
    if c.r != group.r:
        raise ValueError(f"configuration has r={c.r}, group acts on {group.r} plates")
    return replace(c, alloc=tuple(act(group, g, a) for a in c.alloc))


def plate_permutation(group: PToralGroup, g) -> tuple[int, ...]:
    """``perm[i - 1] = act(g, i)``."""
    return tuple(act(group, g, i) for i in range(1, group.r + 1))


@dataclass(frozen=True, order=True)
class Violation:
    sample: int
    player: int
    plate: int
    element: Element
    before: bool
    after: bool


def audit_equivariance(
    oracle: "PreferenceOracle",
    samples: Sequence[NaturalConfig | AuxConfig],
    group: PToralGroup,
) -> list[Violation]:
    """Check ``prefers(c, j, i) == prefers(g.c, j, g.i)`` on every sample, player, plate, g.

    Only as strong as the sample set: an empty result means no violation was seen.
    """
    def row(c, j):
        if hasattr(oracle, "preferred_mask"):
            return list(oracle.preferred_mask(c, j))
        return [oracle.prefers(c, j, i) for i in range(1, group.r + 1)]

    out = []
    for s, c in enumerate(samples):
        base = [row(c, j) for j in range(1, oracle.n_players + 1)]
        for g in group.elements:
            moved = act_config(group, g, c)
            perm = plate_permutation(group, g)
            for j in range(1, oracle.n_players + 1):
                after_row = row(moved, j)
                for i in range(1, group.r + 1):
                    before = bool(base[j - 1][i - 1])
                    after = bool(after_row[perm[i - 1] - 1])
                    if before != after:
                        out.append(Violation(s, j, i, g, before, after))
    return sorted(out)


def orbit(group: PToralGroup, c: Config) -> list[Config]:
    return [act_config(group, g, c) for g in group.elements]


def orbit_representatives(group: PToralGroup, allocs: Iterable[tuple[int, ...]]):
    """Allocations sending tile 1 to plate 1: one per orbit of a regular action."""
    return [a for a in allocs if a and a[0] == 1]
