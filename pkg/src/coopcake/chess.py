"""Chessboard complexes: rook placements, boundary maps and reduced homology.

Squares are ``(row, column)`` pairs, 1-based. For the auxiliary configuration
space the board is ``r x (2r - 1)``: rows are plates, columns are tiles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from .config import AuxConfig, matrix_rep
from .geometry import ImproperCut

Square = tuple[int, int]
RookFace = tuple[Square, ...]

MAX_FACES = 10**6


@dataclass(frozen=True)
class ChessComplex:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("board needs at least one row and one column")

    @property
    def dim(self) -> int:
        return min(self.m, self.n) - 1

    def face_count(self, dim: int) -> int:
        k = dim + 1
        return comb(self.m, k) * comb(self.n, k) * factorial(k)


def is_face(c: ChessComplex, squares) -> bool:
    squares = list(squares)
    for row, col in squares:
        if not (1 <= row <= c.m and 1 <= col <= c.n):
            raise ValueError(f"square {(row, col)} is off the {c.m}x{c.n} board")
    rows = [s[0] for s in squares]
    cols = [s[1] for s in squares]
    return len(set(rows)) == len(rows) and len(set(cols)) == len(cols)


def enumerate_faces(c: ChessComplex, dim: int) -> list[RookFace]:
    """All placements of ``dim + 1`` non-attacking rooks, each sorted, list sorted."""
    k = dim + 1
    if k < 1 or k > min(c.m, c.n):
        return []
    faces = []
    for rows in itertools.combinations(range(1, c.m + 1), k):
        for cols in itertools.permutations(range(1, c.n + 1), k):
            faces.append(tuple(zip(rows, cols)))
    faces.sort()
    return faces


def config_to_face(c: AuxConfig) -> tuple[RookFace, dict[Square, float]]:
    """Carrier face of ``c`` in Δ_{r,2r-1} and its barycentric weights.

    The face holds one rook ``(plate, tile)`` per non-degenerate tile, weighted by
    the tile length, so it depends only on the equivalence class of ``c`` and the
    weights are exactly the non-zero entries of :func:`matrix_rep`.
    """
    M = matrix_rep(c)
    weights = {
        (plate + 1, tile + 1): float(M[tile, plate])
        for tile, plate in zip(*np.nonzero(M))
    }
    return tuple(sorted(weights)), weights


def face_to_config(r: int, weights: dict[Square, float]) -> AuxConfig:
    """Inverse of :func:`config_to_face` on positive-weight faces of Δ_{r,2r-1}.

    Columns without a rook become degenerate tiles; they are placed on plate 1,
    any plate giving an equivalent configuration.
    """
    n = 2 * r - 1
    if not is_face(ChessComplex(r, n), weights):
        raise ValueError("weights are not supported on a rook face")
    if any(w <= 0 for w in weights.values()) or abs(sum(weights.values()) - 1) > 1e-9:
        raise ValueError("weights must be positive and sum to 1")
    by_col = {col: (row, w) for (row, col), w in weights.items()}
    points = [0.0]
    alloc = []
    for col in range(1, n + 1):
        row, w = by_col.get(col, (1, 0.0))
        points.append(points[-1] + w)
        alloc.append(row)
    points[-1] = 1.0
    return AuxConfig(ImproperCut(tuple(points)), tuple(alloc), r)


def boundary_matrix(c: ChessComplex, dim: int) -> np.ndarray:
    """Integer boundary map from ``dim``-faces (columns) to ``dim - 1``-faces (rows)."""
    if dim < 1:
        raise ValueError("boundary maps start in dimension 1")
    lower = enumerate_faces(c, dim - 1)
    upper = enumerate_faces(c, dim)
    index = {f: i for i, f in enumerate(lower)}
    D = np.zeros((len(lower), len(upper)), dtype=np.int64)
    for j, face in enumerate(upper):
        for k in range(len(face)):
            D[index[face[:k] + face[k + 1:]], j] = (-1) ** k
    return D


def smith_diagonal(A: np.ndarray) -> list[int]:
    """Non-zero invariant factors of an integer matrix (Smith normal form diagonal)."""
    A = np.array(A, dtype=object if np.abs(A).max(initial=0) > 2**31 else np.int64)
    rows, cols = A.shape
    divisors = []
    t = 0
    while t < min(rows, cols):
        sub = A[t:, t:]
        nz = np.argwhere(sub != 0)
        if len(nz) == 0:
            break
        vals = np.abs(sub[nz[:, 0], nz[:, 1]])
        i, j = nz[int(np.argmin(vals))] + t
        A[[t, i]] = A[[i, t]]
        A[:, [t, j]] = A[:, [j, t]]
        while True:
            p = A[t, t]
            q = A[t + 1:, t] // p
            if np.any(q):
                A[t + 1:, t:] -= np.outer(q, A[t, t:])
            q = A[t, t + 1:] // p
            if np.any(q):
                A[t:, t + 1:] -= np.outer(A[t:, t], q)
            col_rest = np.nonzero(A[t + 1:, t])[0]
            row_rest = np.nonzero(A[t, t + 1:])[0]
            if len(col_rest):
                k = t + 1 + col_rest[np.argmin(np.abs(A[t + 1 + col_rest, t]))]
                A[[t, k]] = A[[k, t]]
                continue
            if len(row_rest):
                k = t + 1 + row_rest[np.argmin(np.abs(A[t, t + 1 + row_rest]))]
                A[:, [t, k]] = A[:, [k, t]]
                continue
            bad = np.argwhere(A[t + 1:, t + 1:] % p != 0)
            if len(bad):
                # pull an entry the pivot does not divide into the pivot row
                A[t] += A[t + 1 + bad[0][0]]
                continue
            break
        divisors.append(abs(int(A[t, t])))
        t += 1
        if A.dtype == np.int64 and np.abs(A[t:, t:]).max(initial=0) > 2**40:
            A = A.astype(object)
    return divisors


def rank_mod2(A: np.ndarray) -> int:
    """Rank over GF(2) by dense elimination."""
    M = (np.asarray(A) % 2).astype(bool)
    rank = 0
    rows, cols = M.shape
    for col in range(cols):
        pivots = np.nonzero(M[rank:, col])[0]
        if len(pivots) == 0:
            continue
        p = rank + pivots[0]
        M[[rank, p]] = M[[p, rank]]
        hits = np.nonzero(M[:, col])[0]
        hits = hits[hits != rank]
        M[hits] ^= M[rank]
        rank += 1
        if rank == rows:
            break
    return rank


@dataclass(frozen=True)
class HomologyRow:
    dim: int
    faces: int
    betti: int
    torsion: tuple[int, ...]


def _guard(c: ChessComplex) -> None:
    total = sum(c.face_count(d) for d in range(c.dim + 1))
    if total > MAX_FACES:
        raise ValueError(
            f"Δ_{{{c.m},{c.n}}} has {total} faces, over the dense-SNF guard of {MAX_FACES}; "
            "use reduced_betti_mod2 (rank over Z/2) instead"
        )


def homology_ranks(c: ChessComplex) -> list[HomologyRow]:
    """Reduced integral homology: Betti number and torsion coefficients per degree."""
    _guard(c)
    top = c.dim
    counts = [len(enumerate_faces(c, d)) for d in range(top + 1)]
    # invariant factors of ∂_d for d = 0..top+1; ∂_0 is the augmentation onto Z
    factors = {0: [1], top + 1: []}
    for d in range(1, top + 1):
        factors[d] = smith_diagonal(boundary_matrix(c, d))
    out = []
    for d in range(top + 1):
        betti = counts[d] - len(factors[d]) - len(factors[d + 1])
        torsion = tuple(x for x in factors[d + 1] if x > 1)
        out.append(HomologyRow(d, counts[d], betti, torsion))
    return out


def reduced_betti_mod2(c: ChessComplex) -> list[int]:
    """Reduced Betti numbers with Z/2 coefficients."""
    top = c.dim
    counts = [c.face_count(d) for d in range(top + 1)]
    ranks = {0: 1, top + 1: 0}
    for d in range(1, top + 1):
        ranks[d] = rank_mod2(boundary_matrix(c, d))
    return [counts[d] - ranks[d] - ranks[d + 1] for d in range(top + 1)]


def connectivity_violations(c: ChessComplex, rows: list[HomologyRow] | None = None) -> list[int]:
    """Degrees ``<= m - 2`` with non-vanishing reduced homology, when ``n >= 2m - 1``."""
    if c.n < 2 * c.m - 1:
        return []
    rows = homology_ranks(c) if rows is None else rows
    return [h.dim for h in rows if h.dim <= c.m - 2 and (h.betti or h.torsion)]
