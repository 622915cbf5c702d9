"""Search for envy-free and dragon tree certificates, and verify them.

The existence results behind these problems are non-constructive, so the search
is a heuristic: exhaustive on a coarse grid, then local grid refinement around
the best candidates. Everything returned is re-checked by :func:`verify_certificate`.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterable, Sequence, Union

import numpy as np

from .config import NaturalConfig, config_from_json, config_to_json
from .geometry import ProperCut
from .prefs import PreferenceOracle, ScoreOracle

log = logging.getLogger(__name__)

ENVYFREE = "envyfree"
DRAGON_PLATES = "dragon-plates"
DRAGON_PLAYERS = "dragon-players"
KINDS = (ENVYFREE, DRAGON_PLATES, DRAGON_PLAYERS)


# --- matching -----------------------------------------------------------------


def perfect_matching(adj: np.ndarray) -> tuple[int, ...] | None:
    """Perfect matching of rows to columns of a square boolean matrix.

    Augmenting paths, rows and columns tried in increasing order. Returns
    ``match[row] = column`` (0-based) or None.
    """
    adj = np.asarray(adj, dtype=bool)
    n_rows, n_cols = adj.shape
    if n_rows != n_cols:
        return None
    owner = [-1] * n_cols
    nbrs = [list(np.nonzero(adj[u])[0]) for u in range(n_rows)]

    def augment(u: int, seen: set[int]) -> bool:
        for v in nbrs[u]:
            if owner[v] == -1:
                owner[v] = u
                return True
        for v in nbrs[u]:
            if v in seen:
                continue
            seen.add(v)
            if owner[v] == -1 or augment(owner[v], seen):
                owner[v] = u
                return True
        return False

    for u in range(n_rows):
        if not augment(u, set()):
            return None
    match = [0] * n_rows
    for v, u in enumerate(owner):
        match[u] = v
    return tuple(match)


def find_matching(c, o: PreferenceOracle) -> tuple[int, ...] | None:
    """A bijection players -> plates (``sigma[j - 1]``) along accepted pairs, if any."""
    if o.n_players != o.r:
        raise ValueError("envy-free matching needs as many players as plates")
    adj = np.array(
        [[o.prefers(c, j, i) for i in range(1, o.r + 1)] for j in range(1, o.n_players + 1)]
    )
    m = perfect_matching(adj)
    return None if m is None else tuple(v + 1 for v in m)


def bottleneck_assignment(gaps: np.ndarray) -> tuple[float, tuple[int, ...]]:
    """Minimize ``max_j gaps[j, sigma(j)]`` over bijections; binary search on thresholds."""
    levels = np.unique(gaps)
    lo, hi = 0, len(levels) - 1
    best = perfect_matching(gaps <= levels[hi])
    while lo < hi:
        mid = (lo + hi) // 2
        m = perfect_matching(gaps <= levels[mid])
        if m is None:
            lo = mid + 1
        else:
            hi, best = mid, m
    if best is None or hi != lo:
        best = perfect_matching(gaps <= levels[lo])
    return float(levels[lo]), tuple(v + 1 for v in best)


def envy_potential(c, o: ScoreOracle) -> float:
    """Smallest extra tolerance under which an envy-free bijection exists at ``c``.

    Zero iff :func:`find_matching` succeeds at the oracle's own tolerance.
    """
    return bottleneck_assignment(o.gap_matrix(c))[0]


# --- proof-style test map -----------------------------------------------------


def test_map(c, o: ScoreOracle, delta: float = 5e-4) -> tuple[np.ndarray, np.ndarray]:
    """Partition of unity over plates for each player, and its average over players.

    ``S[i, j]`` is 1 on preferred plates, decays linearly to 0 at margin ``-delta``,
    and each column is normalized to sum 1. ``F`` is the row mean of ``S``.
    The default ``delta`` is half the default solver tolerance.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    S = np.empty((o.r, o.n_players))
    for j in range(1, o.n_players + 1):
        w = np.clip(1.0 + o.margins(c, j) / delta, 0.0, 1.0)
        S[:, j - 1] = w / w.sum()
    return S.mean(axis=1), S


test_map.__test__ = False  # not a pytest test


def centered(F: np.ndarray) -> np.ndarray:
    """Projection of ``F`` onto the complement of the diagonal."""
    return F - F.mean()


def support_permutation(S: np.ndarray, tol: float = 1e-9) -> tuple[int, ...]:
    """Permutation inside the positive support of a doubly stochastic matrix.

    Returns ``sigma`` (1-based) with ``S[sigma(j) - 1, j - 1] > 0`` for every column j.
    """
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError("matrix must be square")
    if (
        np.any(S < -tol)
        or np.any(np.abs(S.sum(axis=0) - 1) > tol)
        or np.any(np.abs(S.sum(axis=1) - 1) > tol)
    ):
        raise ValueError("matrix is not doubly stochastic within tolerance")
    m = perfect_matching(S.T > 0)
    if m is None:
        raise ValueError("positive support has no perfect matching; tolerance breached")
    return tuple(v + 1 for v in m)


# --- certificates -------------------------------------------------------------


@dataclass(frozen=True)
class EnvyFreeCertificate:
    config: NaturalConfig
    sigma: tuple[int, ...]
    eps: float
    margins: tuple[float, ...]
    potential: float = 0.0
    kind: str = field(default=ENVYFREE, init=False)


@dataclass(frozen=True)
class TreeCertificatePlates:
    """One edge of plates per player; the edges span a tree on all plates."""

    config: NaturalConfig
    edges: tuple[tuple[int, int], ...]
    eps: float
    margins: tuple[tuple[float, float], ...]
    potential: float = 0.0
    kind: str = field(default=DRAGON_PLATES, init=False)


@dataclass(frozen=True)
class TreeCertificatePlayers:
    """One edge of players per plate; the edges span a tree on all players."""

    config: NaturalConfig
    edges: tuple[tuple[int, int], ...]
    eps: float
    margins: tuple[tuple[float, float], ...]
    potential: float = 0.0
    kind: str = field(default=DRAGON_PLAYERS, init=False)


Certificate = Union[EnvyFreeCertificate, TreeCertificatePlates, TreeCertificatePlayers]


def certificate_to_json(cert: Certificate) -> dict[str, Any]:
    out: dict[str, Any] = {"kind": cert.kind, "config": config_to_json(cert.config)}
    if cert.kind == ENVYFREE:
        out["sigma"] = {str(j + 1): p for j, p in enumerate(cert.sigma)}
        out["margins"] = list(cert.margins)
    else:
        out["edges"] = [list(e) for e in cert.edges]
        out["margins"] = [list(m) for m in cert.margins]
    out["eps"] = cert.eps
    out["potential"] = cert.potential
    return out


def certificate_from_json(data: dict[str, Any]) -> Certificate:
    kind = data.get("kind")
    if kind not in KINDS:
        raise ValueError(f"unknown certificate kind {kind!r}")
    config = config_from_json(data["config"])
    eps = float(data["eps"])
    potential = float(data.get("potential", 0.0))
    if kind == ENVYFREE:
        raw = data["sigma"]
        if isinstance(raw, dict):
            sigma = tuple(int(raw[k]) for k in sorted(raw, key=int))
        else:
            sigma = tuple(int(p) for p in raw)
        return EnvyFreeCertificate(
            config, sigma, eps, tuple(float(m) for m in data.get("margins", [])), potential
        )
    edges = tuple(tuple(int(v) for v in e) for e in data["edges"])
    margins = tuple(tuple(float(x) for x in m) for m in data.get("margins", []))
    cls = TreeCertificatePlates if kind == DRAGON_PLATES else TreeCertificatePlayers
    return cls(config, edges, eps, margins, potential)


# --- trees --------------------------------------------------------------------


class UnionFind:
    def __init__(self, items: Iterable[int]):
        self.parent = {x: x for x in items}

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def tree_errors(edges: Sequence[Sequence[int]], vertices: Sequence[int]) -> list[str]:
    """Reasons why ``edges`` is not a spanning tree on ``vertices`` (empty if it is)."""
    errors = []
    vs = set(vertices)
    for e in edges:
        if len(e) != 2 or e[0] == e[1]:
            errors.append(f"edge {list(e)} does not join two distinct vertices")
        elif not set(e) <= vs:
            errors.append(f"edge {list(e)} leaves the vertex set")
    if errors:
        return errors
    uf = UnionFind(vs)
    cycle = any(not uf.union(a, b) for a, b in edges)
    components = len({uf.find(v) for v in vs})
    if cycle or components != 1 or len(edges) != len(vs) - 1:
        errors.append("not a tree")
    return errors


def spanning_trees(vertices: int) -> list[tuple[tuple[int, int], ...]]:
    """Every labeled spanning tree on ``1..vertices`` (Prüfer decoding), edges sorted."""
    if vertices == 1:
        return [()]
    if vertices == 2:
        return [((1, 2),)]
    trees = []
    for seq in itertools.product(range(1, vertices + 1), repeat=vertices - 2):
        degree = [1] * (vertices + 1)
        for v in seq:
            degree[v] += 1
        edges = []
        for v in seq:
            leaf = next(u for u in range(1, vertices + 1) if degree[u] == 1)
            edges.append(tuple(sorted((leaf, v))))
            degree[leaf] -= 1
            degree[v] -= 1
        u, w = [x for x in range(1, vertices + 1) if degree[x] == 1]
        edges.append((u, w))
        trees.append(tuple(sorted(edges)))
    return sorted(trees)


def find_tree_transversal(
    candidates: Sequence[Sequence[tuple[int, int]]], vertices: int
) -> tuple[tuple[int, int], ...] | None:
    """Pick one edge from each candidate list so the picks form a spanning tree.

    Exhaustive backtracking in the given order; a pick closing a cycle is pruned.
    """
    if len(candidates) != vertices - 1:
        return None
    order = sorted(range(len(candidates)), key=lambda k: len(candidates[k]))
    chosen: list[tuple[int, int] | None] = [None] * len(candidates)

    def rec(depth: int, uf_parent: dict[int, int]) -> bool:
        if depth == len(order):
            return True
        k = order[depth]
        for u, v in candidates[k]:
            uf = UnionFind(())
            uf.parent = dict(uf_parent)
            if uf.union(u, v):
                chosen[k] = (u, v)
                if rec(depth + 1, uf.parent):
                    return True
        return False

    if rec(0, {v: v for v in range(1, vertices + 1)}):
        return tuple(chosen)  # type: ignore[arg-type]
    return None


# --- structures: which (player, plate) cells a certificate must accept ---------


@dataclass(frozen=True)
class Structures:
    """All certificate shapes for one problem kind, as index arrays into gap matrices.

    A shape ``s`` is satisfied at tolerance ``t`` when every cell
    ``(players[s, c], plates[s, c])`` has gap ``<= t``.
    """

    kind: str
    players: np.ndarray
    plates: np.ndarray
    shapes: tuple


@lru_cache(maxsize=None)
def structures(kind: str, r: int) -> Structures:
    rows_p, rows_q, shapes = [], [], []
    if kind == ENVYFREE:
        for sigma in itertools.permutations(range(r)):
            rows_p.append(list(range(r)))
            rows_q.append(list(sigma))
            shapes.append(tuple(s + 1 for s in sigma))
    elif kind == DRAGON_PLATES:
        # r - 1 players, each owning an edge of a tree on the r plates
        for tree in spanning_trees(r):
            for owned in itertools.permutations(tree):
                p, q = [], []
                for j, (u, v) in enumerate(owned):
                    p += [j, j]
                    q += [u - 1, v - 1]
                rows_p.append(p)
                rows_q.append(q)
                shapes.append(owned)
    elif kind == DRAGON_PLAYERS:
        # each of the r plates owns an edge of a tree on the r + 1 players
        for tree in spanning_trees(r + 1):
            for owned in itertools.permutations(tree):
                p, q = [], []
                for i, (u, v) in enumerate(owned):
                    p += [u - 1, v - 1]
                    q += [i, i]
                rows_p.append(p)
                rows_q.append(q)
                shapes.append(owned)
    else:
        raise ValueError(f"unknown problem kind {kind!r}")
    width = max((len(p) for p in rows_p), default=0)
    return Structures(
        kind,
        np.array(rows_p, dtype=np.intp).reshape(len(rows_p), width),
        np.array(rows_q, dtype=np.intp).reshape(len(rows_q), width),
        tuple(shapes),
    )


def players_needed(kind: str, r: int) -> int:
    return {ENVYFREE: r, DRAGON_PLATES: r - 1, DRAGON_PLAYERS: r + 1}[kind]


def batch_potential(gaps: np.ndarray, st: Structures, chunk_cells: int = 4_000_000) -> np.ndarray:
    """``min_s max_c gaps[b, cell]`` for each batch element; ``gaps`` is ``(B, players, r)``."""
    B = gaps.shape[0]
    if st.players.shape[1] == 0:
        return np.zeros(B)
    out = np.empty(B)
    step = max(1, chunk_cells // st.players.size)
    for start in range(0, B, step):
        g = gaps[start:start + step]
        out[start:start + step] = g[:, st.players, st.plates].max(axis=2).min(axis=1)
    return out


def structure_potential(gaps: np.ndarray, kind: str) -> tuple[float, Any]:
    """Scalar potential and the first optimal shape, for one gap matrix."""
    st = structures(kind, gaps.shape[1])
    if st.players.shape[1] == 0:
        return 0.0, st.shapes[0]
    vals = gaps[st.players, st.plates].max(axis=1)
    s = int(np.argmin(vals))
    return float(vals[s]), st.shapes[s]


def dragon_potential(c, o: ScoreOracle, kind: str) -> float:
    return structure_potential(o.gap_matrix(c), kind)[0]


# --- grid search --------------------------------------------------------------


class SearchTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Candidate:
    potential: float
    denom: int
    ticks: tuple[int, ...]
    alloc: tuple[int, ...]

    @property
    def points(self) -> tuple[float, ...]:
        return tuple(t / self.denom for t in self.ticks)

    def key(self):
        # ticks compared on a common scale so ties break by cut position, not level
        return (self.potential, len(self.alloc), self.points, self.alloc)

    def config(self, r: int) -> NaturalConfig:
        return NaturalConfig(ProperCut(self.points), self.alloc, r)


@dataclass
class SolveResult:
    certificate: Certificate | None
    incumbent: NaturalConfig
    potential: float
    levels: int
    evaluations: int

    @property
    def found(self) -> bool:
        return self.certificate is not None


def _allocations(r: int, k: int, symmetric: bool) -> list[tuple[int, ...]]:
    allocs = [tuple(a) for a in itertools.permutations(range(1, r + 1), k)]
    if symmetric:
        # the plate action is regular, so each orbit has one member with tile 1 on plate 1
        allocs = [a for a in allocs if a[0] == 1]
    return allocs


def _top(cands: list[Candidate], beam: int) -> list[Candidate]:
    seen = set()
    out = []
    for c in sorted(cands, key=Candidate.key):
        ident = (c.points, c.alloc)
        if ident in seen:
            continue
        seen.add(ident)
        out.append(c)
        if len(out) == beam:
            break
    return out


def _evaluate(o: ScoreOracle, st: Structures, denom: int, ticks: np.ndarray, alloc, beam: int):
    gaps = o.batch_gaps(ticks / denom, alloc)
    pot = batch_potential(gaps, st)
    order = np.argsort(pot, kind="stable")[:beam]
    return [Candidate(float(pot[i]), denom, tuple(int(t) for t in ticks[i]), alloc) for i in order]


def _coarse_ticks(N: int, k: int) -> np.ndarray:
    combos = list(itertools.combinations(range(1, N), k - 1))
    inner = np.array(combos, dtype=np.int64).reshape(len(combos), k - 1)
    B = inner.shape[0]
    return np.hstack([np.zeros((B, 1), np.int64), inner, np.full((B, 1), N, np.int64)])


def _refine_ticks(cand: Candidate, radius: int) -> np.ndarray:
    """Finer-grid cuts with every interior point within ``radius`` fine steps of ``cand``."""
    base = np.array(cand.ticks, dtype=np.int64) * 2
    k = len(base) - 1
    if k == 1:
        return base[None, :]
    offs = np.array(list(itertools.product(range(-radius, radius + 1), repeat=k - 1)))
    ticks = np.repeat(base[None, :], len(offs), axis=0)
    ticks[:, 1:-1] += offs
    ok = np.all(np.diff(ticks, axis=1) > 0, axis=1)
    return ticks[ok]


def search(
    o: ScoreOracle,
    kind: str = ENVYFREE,
    grid: int = 32,
    eps: float = 1e-3,
    budget: int = 40,
    beam: int = 8,
    radius: int = 2,
    symmetric: bool = True,
    threads: int = 1,
    max_cells: float = 2e9,
) -> tuple[Candidate, int, int]:
    """Coarse exhaustive grid then local halving refinement of the ``beam`` best cuts.

    Returns the best candidate, refinement levels used and configurations evaluated.
    """
    if grid < 2:
        raise ValueError("grid must be at least 2")
    if eps <= 0:
        raise ValueError("eps must be positive")
    r = o.r
    if o.n_players != players_needed(kind, r):
        raise ValueError(
            f"{kind} on {r} plates needs {players_needed(kind, r)} players, model has {o.n_players}"
        )
    st = structures(kind, r)
    jobs = []
    for k in range(1, r + 1):
        if k - 1 > grid - 1:
            break
        ticks = _coarse_ticks(grid, k)
        for alloc in _allocations(r, k, symmetric):
            jobs.append((ticks, alloc))
    evaluations = sum(len(t) for t, _ in jobs)
    if evaluations * st.players.size > max_cells:
        raise SearchTooLarge(
            f"coarse grid {grid} for {kind} on r={r} needs about {evaluations * st.players.size:.2g} "
            f"cell evaluations (limit {max_cells:.2g}); lower the grid"
        )

    def run(job):
        ticks, alloc = job
        return _evaluate(o, st, grid, ticks, alloc, beam)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(run, jobs))
    incumbents = _top([c for res in results for c in res], beam)
    level = 0
    while incumbents[0].potential > eps and level < budget:
        level += 1
        pool_cands = []
        for cand in incumbents:
            ticks = _refine_ticks(cand, radius)
            evaluations += len(ticks)
            pool_cands += _evaluate(o, st, cand.denom * 2, ticks, cand.alloc, beam)
        incumbents = _top(pool_cands, beam)
        log.debug("level %d: best potential %.3g", level, incumbents[0].potential)
    return incumbents[0], level, evaluations


def _envyfree_certificate(c: NaturalConfig, o: ScoreOracle, eps: float) -> EnvyFreeCertificate:
    value, sigma = bottleneck_assignment(o.gap_matrix(c))
    margins = tuple(o.margin(c, j, sigma[j - 1]) for j in range(1, o.n_players + 1))
    return EnvyFreeCertificate(c, sigma, eps, margins, value)


def _tree_certificate(c: NaturalConfig, o: ScoreOracle, eps: float, kind: str):
    gaps = o.gap_matrix(c)
    value = structure_potential(gaps, kind)[0]
    ok = gaps <= eps
    if kind == DRAGON_PLATES:
        cands = [
            [(u, v) for u, v in itertools.combinations(range(1, o.r + 1), 2) if ok[j, u - 1] and ok[j, v - 1]]
            for j in range(o.n_players)
        ]
        edges = find_tree_transversal(cands, o.r)
        if edges is None:
            return None
        margins = tuple(
            (o.margin(c, j + 1, u), o.margin(c, j + 1, v)) for j, (u, v) in enumerate(edges)
        )
        return TreeCertificatePlates(c, edges, eps, margins, value)
    cands = [
        [(u, v) for u, v in itertools.combinations(range(1, o.n_players + 1), 2) if ok[u - 1, i] and ok[v - 1, i]]
        for i in range(o.r)
    ]
    edges = find_tree_transversal(cands, o.n_players)
    if edges is None:
        return None
    margins = tuple(
        (o.margin(c, u, i + 1), o.margin(c, v, i + 1)) for i, (u, v) in enumerate(edges)
    )
    return TreeCertificatePlayers(c, edges, eps, margins, value)


def _solve(o: ScoreOracle, kind: str, grid: int, eps: float, budget: int, **kw) -> SolveResult:
    best, levels, evaluations = search(o, kind, grid, eps, budget, **kw)
    config = best.config(o.r)
    cert = None
    if best.potential <= eps:
        if kind == ENVYFREE:
            cert = _envyfree_certificate(config, o, eps)
        else:
            cert = _tree_certificate(config, o, eps, kind)
        if cert is not None and not verify_certificate(cert, o).ok:
            cert = None
    return SolveResult(cert, config, best.potential, levels, evaluations)


def solve(o: ScoreOracle, grid: int = 32, eps: float = 1e-3, budget: int = 40, **kw) -> SolveResult:
    """Search for an ``eps``-envy-free configuration with a player -> plate bijection."""
    return _solve(o, ENVYFREE, grid, eps, budget, **kw)


def solve_dragon_piece(o: ScoreOracle, grid: int = 32, eps: float = 1e-3, budget: int = 40, **kw) -> SolveResult:
    """``r - 1`` players on ``r`` plates: a tree of plate pairs, one pair per player."""
    return _solve(o, DRAGON_PLATES, grid, eps, budget, **kw)


def solve_dragon_player(o: ScoreOracle, grid: int = 32, eps: float = 1e-3, budget: int = 40, **kw) -> SolveResult:
    """``r + 1`` players on ``r`` plates: a tree of player pairs, one pair per plate."""
    return _solve(o, DRAGON_PLAYERS, grid, eps, budget, **kw)


# --- brute force oracle ---------------------------------------------------------


def brute_force_solve(o: ScoreOracle, grid: int) -> EnvyFreeCertificate:
    """Global envy-potential minimizer over every grid configuration and bijection.

    Plain loops over all cuts, all injective allocations and all permutations; no
    symmetry reduction and no vectorization, so it shares nothing with :func:`solve`
    beyond the oracle. The certificate's ``eps`` is the minimum potential found.
    """
    r = o.r
    if r > 3 or grid > 64:
        raise ValueError("brute force is limited to r <= 3 and grid <= 64")
    if o.n_players != r:
        raise ValueError("brute force needs as many players as plates")
    best = None
    for k in range(1, r + 1):
        for inner in itertools.combinations(range(1, grid), k - 1):
            points = (0.0,) + tuple(t / grid for t in inner) + (1.0,)
            for alloc in itertools.permutations(range(1, r + 1), k):
                c = NaturalConfig(ProperCut(points), alloc, r)
                scores = [o.plate_scores(c, j) for j in range(1, r + 1)]
                for sigma in itertools.permutations(range(1, r + 1)):
                    worst = 0.0
                    for j in range(r):
                        s = scores[j]
                        gap = s.max() - o.players[j].eps_pref - s[sigma[j] - 1]
                        worst = max(worst, gap)
                    key = (worst, k, points, alloc, sigma)
                    if best is None or key < best[0]:
                        best = (key, c)
    (worst, _, _, _, sigma), c = best
    margins = tuple(o.margin(c, j, sigma[j - 1]) for j in range(1, r + 1))
    return EnvyFreeCertificate(c, sigma, worst, margins, worst)


# --- verification -------------------------------------------------------------


@dataclass
class VerifyReport:
    ok: bool
    errors: list[str]
    rows: list[dict[str, Any]]

    def to_json(self) -> dict[str, Any]:
        return {"ok": self.ok, "errors": self.errors, "margins": self.rows}


def verify_certificate(cert: Certificate, o: ScoreOracle) -> VerifyReport:
    """Recheck a certificate from scratch against the model.

    Structure (bijection / spanning tree) and every required preference
    membership at tolerance ``cert.eps`` are recomputed; stored margins are ignored.
    """
    errors: list[str] = []
    rows: list[dict[str, Any]] = []
    c = cert.config
    if c.r != o.r:
        return VerifyReport(False, [f"certificate has r={c.r}, model has r={o.r}"], rows)
    need = players_needed(cert.kind, o.r)
    if o.n_players != need:
        return VerifyReport(
            False, [f"{cert.kind} needs {need} players, model has {o.n_players}"], rows
        )
    if not cert.eps >= 0:
        errors.append("eps must be non-negative")
    cells: list[tuple[int, int, str]] = []
    if cert.kind == ENVYFREE:
        sigma = list(cert.sigma)
        if len(sigma) != o.r or sorted(sigma) != list(range(1, o.r + 1)):
            errors.append("not a bijection")
        else:
            cells = [(j, sigma[j - 1], "sigma") for j in range(1, o.r + 1)]
    elif cert.kind == DRAGON_PLATES:
        if len(cert.edges) != o.n_players:
            errors.append(f"expected one edge per player ({o.n_players}), got {len(cert.edges)}")
        tree = tree_errors(cert.edges, range(1, o.r + 1))
        errors += tree
        if not tree and len(cert.edges) == o.n_players:
            for j, (u, v) in enumerate(cert.edges, start=1):
                cells += [(j, u, f"edge {j}"), (j, v, f"edge {j}")]
    else:
        if len(cert.edges) != o.r:
            errors.append(f"expected one edge per plate ({o.r}), got {len(cert.edges)}")
        tree = tree_errors(cert.edges, range(1, o.n_players + 1))
        errors += tree
        if not tree and len(cert.edges) == o.r:
            for i, (u, v) in enumerate(cert.edges, start=1):
                cells += [(u, i, f"edge {i}"), (v, i, f"edge {i}")]
    for j, i, role in cells:
        m = o.margin(c, j, i)
        accepted = m >= -cert.eps
        rows.append({"player": j, "plate": i, "role": role, "margin": m, "accepted": accepted})
        if not accepted:
            errors.append(f"player {j} does not accept plate {i} (margin {m:.3g} < -{cert.eps:g})")
    return VerifyReport(not errors, errors, rows)
