"""Acceptance criteria, one test each, with a one-line PASS/FAIL report per criterion.

Run alone with ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

import contextlib
import itertools
import sys
import time
from math import comb, factorial

import numpy as np
import pytest

from coopcake.chess import ChessComplex, enumerate_faces, homology_ranks
from coopcake.cli import main
from coopcake.config import (
    AuxConfig,
    NaturalConfig,
    equivalent,
    matrix_rep,
    project,
    random_aux_config,
    random_natural_config,
)
from coopcake.geometry import tiles
from coopcake.models import list_demos, load_demo, random_model
from coopcake.prefs import TableOracle, pullback
from coopcake.solver import (
    brute_force_solve,
    find_matching,
    solve,
    solve_dragon_piece,
    solve_dragon_player,
    verify_certificate,
)
from coopcake.symmetry import audit_equivariance

NEGATIVE_CONTROL = "broken-plate-bonus"


@contextlib.contextmanager
def criterion(request, number: int, title: str, limit: float | None = None):
    """Times the block, enforces the runtime limit and prints one status line."""
    start = time.perf_counter()
    status, detail = "PASS", ""
    try:
        yield
        elapsed = time.perf_counter() - start
        if limit is not None and elapsed >= limit:
            raise AssertionError(f"took {elapsed:.2f} s, limit {limit:g} s")
    except BaseException as exc:
        status, detail = "FAIL", f": {type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"
        raise
    finally:
        elapsed = time.perf_counter() - start
        line = f"[{status}] criterion {number:>2}  {title}  ({elapsed:.2f} s){detail}"
        capman = request.config.pluginmanager.getplugin("capturemanager")
        with capman.global_and_fixture_disabled() if capman else contextlib.nullcontext():
            print("\n" + line, flush=True)


def test_c01_example_scores(request):
    with criterion(request, 1, "seven-plate chocolate score vector and preferences", limit=1.0):
        m = load_demo("example-1-2")
        o, c = m.oracle, m.example_config
        assert [int(x) for x in o.contents(c, 1)] == [100, 0, 100, 1, 1, 0, 1]
        scores = o.plate_scores(c, 1)
        assert all(float(s).is_integer() for s in scores)
        assert [int(s) for s in scores] == [101, 200, 101, 102, 2, 2, 101]
        assert o.preferred_plates(c, 1) == [2] and 2 not in c.alloc
        assert 6 not in c.alloc
        for eps in (0.0, 1.0, 50.0, 97.999):
            assert not o.relaxed(eps).prefers(c, 1, 6)


def test_c02_chess_homology(request):
    with criterion(request, 2, "chessboard reduced homology on Δ_{2,3}, Δ_{3,5}, Δ_{4,7}", limit=60.0):
        assert [h.betti for h in homology_ranks(ChessComplex(2, 3))] == [0, 1]
        assert [h.betti for h in homology_ranks(ChessComplex(3, 5))][:2] == [0, 0]
        rows = homology_ranks(ChessComplex(4, 7))
        assert [(h.betti, h.torsion) for h in rows[:3]] == [(0, ()), (0, ()), (0, ())]


def test_c03_face_counts(request):
    with criterion(request, 3, "rook face counts C(m,k)C(n,k)k! for m <= 4, n <= 7", limit=10.0):
        for m, n in itertools.product(range(1, 5), range(1, 8)):
            board = [(i, j) for i in range(1, m + 1) for j in range(1, n + 1)]
            c = ChessComplex(m, n)
            for k in range(1, m + 1):
                brute = sum(
                    1
                    for s in itertools.combinations(board, k)
                    if len({a for a, _ in s}) == k and len({b for _, b in s}) == k
                )
                expected = comb(m, k) * comb(n, k) * factorial(k)
                assert brute == expected == len(enumerate_faces(c, k - 1)) == c.face_count(k - 1)


def test_c04_matching(request):
    with criterion(request, 4, "find_matching vs exhaustive search, 1000 matrices", limit=10.0):
        rng = np.random.default_rng(20240604)
        placeholder = NaturalConfig.make((0, 1), (1,), 1)
        for trial in range(1000):
            r = int(rng.integers(1, 6))
            table = rng.random((r, r)) < rng.uniform(0.2, 0.8)
            o = TableOracle(table)
            cfg = NaturalConfig(placeholder.cut, placeholder.alloc, r)
            sigma = find_matching(cfg, o)
            exists = any(
                all(table[j, p[j]] for j in range(r)) for p in itertools.permutations(range(r))
            )
            assert (sigma is not None) == exists, trial
            if sigma is not None:
                assert sorted(sigma) == list(range(1, r + 1))
                assert all(table[j, sigma[j] - 1] for j in range(r))


def test_c05_solver_vs_brute_force(request):
    with criterion(request, 5, "solve vs brute force, 20 random r=2 models at N=64", limit=60.0):
        for seed in range(20):
            o = random_model(2, seed, style="chocolate")
            bf = brute_force_solve(o, 64)
            res = solve(o, grid=64, eps=bf.potential + 1e-9)
            assert res.found, seed
            assert res.certificate.potential <= bf.potential + 1e-9, seed
            assert verify_certificate(res.certificate, o).ok


def test_c06_existence(request):
    cases = [(2, {}, "chocolate"), (3, {}, "weighted"), (4, {"p": 2, "nu": 2}, "chocolate")]
    with criterion(request, 6, "verified certificates, r in {2,3,4} x 10 models", limit=300.0):
        for r, group, style in cases:
            for seed in range(10):
                o = random_model(r, seed, style=style, **group)
                res = solve(o)
                assert res.found, (r, seed, res.potential)
                assert res.certificate.potential <= 1e-3
                assert verify_certificate(res.certificate, o).ok


def test_c07_equivariance_audit(request):
    with criterion(request, 7, "equivariance audit of shipped models, 200 samples", limit=30.0):
        for name in list_demos():
            m = load_demo(name)
            rng = np.random.default_rng(7)
            samples = [random_natural_config(rng, m.r) for _ in range(200)]
            violations = audit_equivariance(m.oracle, samples, m.oracle.group)
            if name == NEGATIVE_CONTROL:
                assert len(violations) >= 1
            else:
                assert violations == [], name


def test_c08_dragon_variants(request):
    with criterion(request, 8, "dragon-piece and dragon-player demos, r in {2,3}", limit=120.0):
        for r in (2, 3):
            piece = load_demo(f"dragon-piece-{r}").oracle
            res = solve_dragon_piece(piece)
            assert res.found and verify_certificate(res.certificate, piece).ok
            assert len(res.certificate.edges) == r - 1
            player = load_demo(f"dragon-player-{r}").oracle
            res = solve_dragon_player(player)
            assert res.found and verify_certificate(res.certificate, player).ok
            assert len(res.certificate.edges) == r


def test_c09_equivalence_laws(request):
    with criterion(request, 9, "projection and equivalence laws, 1000 AuxConfigs", limit=10.0):
        rng = np.random.default_rng(99)
        oracles = {r: pullback(random_model(r, r, style="weighted")) for r in range(1, 6)}
        for _ in range(1000):
            r = int(rng.integers(1, 6))
            c = random_aux_config(rng, r)
            alloc = list(c.alloc)
            for t in tiles(c.cut):
                if t.degenerate:
                    alloc[t.index - 1] = int(rng.integers(1, r + 1))
            twin = AuxConfig(c.cut, tuple(alloc), r)
            assert equivalent(c, twin)
            assert np.array_equal(matrix_rep(c), matrix_rep(twin))
            assert project(c) == project(twin)
            o = oracles[r]
            for j in range(1, o.n_players + 1):
                for i in range(1, r + 1):
                    assert o.prefers(c, j, i) == o.prefers(twin, j, i)


def _run_cli(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_c10_determinism(request, capsys, tmp_path):
    with criterion(request, 10, "byte-identical demo outputs across --threads"):
        for name in list_demos():
            runs = []
            for threads in ("1", "4"):
                cert = tmp_path / f"{name}-{threads}.json"
                solved = _run_cli(["solve", name, "--seed", "3", "--threads", threads, "--out", str(cert)], capsys)
                demo = _run_cli(["demo", name, "--threads", threads], capsys)
                runs.append((solved, cert.read_bytes() if cert.exists() else None, demo))
            assert runs[0] == runs[1], name
            assert runs[0][2][0] == 0, name


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
