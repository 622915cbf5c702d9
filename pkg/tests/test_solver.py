import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coopcake.config import NaturalConfig, random_natural_config
from coopcake.geometry import hausdorff_distance
from coopcake.models import random_model
from coopcake.prefs import Density, Player, ScoreOracle, TableOracle, own_plate_weights
from coopcake.solver import (
    DRAGON_PLATES,
    DRAGON_PLAYERS,
    EnvyFreeCertificate,
    TreeCertificatePlates,
    _tree_certificate,
    batch_potential,
    bottleneck_assignment,
    brute_force_solve,
    centered,
    certificate_from_json,
    certificate_to_json,
    envy_potential,
    find_matching,
    find_tree_transversal,
    perfect_matching,
    solve,
    solve_dragon_piece,
    solve_dragon_player,
    spanning_trees,
    structure_potential,
    structures,
    support_permutation,
    test_map,
    tree_errors,
    verify_certificate,
)
from coopcake.symmetry import PToralGroup, act, act_config

seeds = st.integers(0, 2**32 - 1)


def own_model(r, n_players=None, value=1.0):
    G = PToralGroup(r)
    pl = Player(Density.uniform(value), own_plate_weights(G))
    return ScoreOracle(G, [pl] * (n_players or r))


def exhaustive_matching(adj):
    n = len(adj)
    return any(all(adj[j][s[j]] for j in range(n)) for s in itertools.permutations(range(n)))


def exhaustive_bottleneck(gaps):
    n = len(gaps)
    return min(max(gaps[j][s[j]] for j in range(n)) for s in itertools.permutations(range(n)))


# --- matching -----------------------------------------------------------------


def test_matching_examples():
    c = NaturalConfig.make((0, 1), (1,), 3)
    assert find_matching(c, TableOracle(np.ones((3, 3), bool))) == (1, 2, 3)
    assert find_matching(c, TableOracle([[True, False], [True, False]])) is None
    rows = [[True, True, False], [False, True, True], [True, False, True]]
    sigma = find_matching(c, TableOracle(rows))
    assert sigma is not None and all(rows[j][sigma[j] - 1] for j in range(3))
    assert exhaustive_matching(rows)


@settings(max_examples=300)
@given(seeds, st.integers(1, 5))
def test_matching_agrees_with_exhaustive(seed, r):
    adj = np.random.default_rng(seed).random((r, r)) < 0.4
    m = perfect_matching(adj)
    assert (m is not None) == exhaustive_matching(adj)
    if m is not None:
        assert sorted(m) == list(range(r)) and all(adj[j, m[j]] for j in range(r))


@settings(max_examples=200)
@given(seeds, st.integers(1, 5))
def test_bottleneck_agrees_with_exhaustive(seed, r):
    gaps = np.round(np.random.default_rng(seed).random((r, r)) * 4) / 4
    value, sigma = bottleneck_assignment(gaps)
    assert value == exhaustive_bottleneck(gaps)
    assert max(gaps[j, sigma[j] - 1] for j in range(r)) == value


def test_envy_potential_examples():
    o = own_model(2, value=10.0)
    c = NaturalConfig.make((0, 1), (1,), 2)
    assert [list(o.plate_scores(c, j)) for j in (1, 2)] == [[10, 0], [10, 0]]
    assert envy_potential(c, o) == 10
    half = NaturalConfig.make((0, 0.5, 1), (1, 2), 2)
    assert find_matching(half, o) is not None and envy_potential(half, o) == 0


@settings(max_examples=100)
@given(seeds, st.sampled_from([2, 3, 4, 5]))
def test_envy_potential_group_invariant(seed, r):
    o = random_model(r, seed, style="weighted")
    c = random_natural_config(np.random.default_rng(seed), r)
    v = envy_potential(c, o)
    for g in o.group.elements:
        assert envy_potential(act_config(o.group, g, c), o) == v


# --- test map -------------------------------------------------------------------


def test_map_examples():
    o = own_model(3, value=0.0)
    c = NaturalConfig.make((0, 0.4, 1), (1, 2), 3)
    F, S = test_map(c, o, 0.1)
    np.testing.assert_allclose(S, np.full((3, 3), 1 / 3))
    np.testing.assert_allclose(F, [1 / 3] * 3)
    np.testing.assert_allclose(centered(F), 0, atol=1e-15)
    o = own_model(3)
    F, S = test_map(c, o, 0.1)
    np.testing.assert_array_equal(S[:, 0], [0, 1, 0])


@settings(max_examples=150)
@given(seeds, st.sampled_from([2, 3, 4, 5]), st.floats(1e-4, 1.0))
def test_map_properties(seed, r, delta):
    o = random_model(r, seed, style="weighted")
    rng = np.random.default_rng(seed)
    c = random_natural_config(rng, r)
    F, S = test_map(c, o, delta)
    assert np.all(np.abs(S.sum(axis=0) - 1) <= 1e-12)
    np.testing.assert_allclose(F, S.mean(axis=1), atol=1e-15)
    assert abs(centered(F).sum()) <= 1e-12
    g = o.group.elements[int(rng.integers(o.group.order))]
    F2, S2 = test_map(act_config(o.group, g, c), o, delta)
    perm = [act(o.group, g, i) - 1 for i in range(1, r + 1)]
    np.testing.assert_allclose(S2[perm], S, atol=1e-12)
    assert abs(np.linalg.norm(centered(F2)) - np.linalg.norm(centered(F))) <= 1e-12


def test_map_rejects_bad_delta():
    with pytest.raises(ValueError):
        test_map(NaturalConfig.make((0, 1), (1,), 2), own_model(2), 0)


def test_support_permutation_examples():
    assert support_permutation(np.eye(3)) == (1, 2, 3)
    assert support_permutation(np.full((4, 4), 0.25)) == (1, 2, 3, 4)
    S = np.array([[0.5, 0.5, 0], [0.5, 0, 0.5], [0, 0.5, 0.5]])
    sigma = support_permutation(S)
    assert all(S[sigma[j] - 1, j] > 0 for j in range(3))
    supported = [
        s for s in itertools.permutations((1, 2, 3)) if all(S[s[j] - 1, j] > 0 for j in range(3))
    ]
    assert sigma in supported and len(supported) == 2
    with pytest.raises(ValueError, match="not doubly stochastic"):
        support_permutation(np.array([[1.0, 0.5], [0, 0.5]]))


@settings(max_examples=100)
@given(seeds, st.integers(1, 6))
def test_support_permutation_on_birkhoff_mixtures(seed, r):
    rng = np.random.default_rng(seed)
    S = np.zeros((r, r))
    for w in rng.dirichlet(np.ones(3)):
        S[np.arange(r), rng.permutation(r)] += w
    sigma = support_permutation(S)
    assert all(S[sigma[j] - 1, j] > 0 for j in range(r))


# --- trees ------------------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_spanning_tree_count(n):
    trees = spanning_trees(n)
    assert len(trees) == max(1, n ** (n - 2)) and len(set(trees)) == len(trees)
    assert all(tree_errors(t, range(1, n + 1)) == [] for t in trees)


def test_tree_errors_both_ways():
    V = range(1, 5)
    assert tree_errors([(1, 2), (2, 3), (3, 4)], V) == []
    assert any("not a tree" in e for e in tree_errors([(1, 2), (2, 3), (3, 1)], V))
    assert any("not a tree" in e for e in tree_errors([(1, 2), (3, 4)], V))
    assert tree_errors([(1, 2), (1, 2), (3, 4)], V)


def test_transversal_prefers_star():
    cands = [list(itertools.combinations(range(1, 5), 2))] * 3
    assert find_tree_transversal(cands, 4) == ((1, 2), (1, 3), (1, 4))
    assert find_tree_transversal([[(1, 2)], [(1, 2)]], 3) is None


def test_dragon_all_accepting_gives_star():
    c = NaturalConfig.make((0, 1), (1,), 4)
    cert = _tree_certificate(c, own_model(4, 3, value=0.0), 0.0, DRAGON_PLATES)
    assert cert.edges == ((1, 2), (1, 3), (1, 4))
    cert = _tree_certificate(c, own_model(4, 5, value=0.0), 0.0, DRAGON_PLAYERS)
    assert cert.edges == ((1, 2), (1, 3), (1, 4), (1, 5))


def test_dragon_rejecting_player_blocks_every_tree():
    gaps = np.array([[0.0, 0.0], [0.0, 0.0], [5.0, 5.0]])
    assert structure_potential(gaps, DRAGON_PLAYERS)[0] == 5.0
    gaps = np.array([[0.0, 3.0]])  # the only player accepts one plate
    assert structure_potential(gaps, DRAGON_PLATES)[0] == 3.0


@settings(max_examples=60)
@given(seeds, st.sampled_from([DRAGON_PLATES, DRAGON_PLAYERS]), st.integers(2, 4))
def test_structure_potential_matches_tree_enumeration(seed, kind, r):
    n = r - 1 if kind == DRAGON_PLATES else r + 1
    gaps = np.round(np.random.default_rng(seed).random((n, r)) * 4) / 4
    best = np.inf
    if kind == DRAGON_PLATES:
        for tree in spanning_trees(r):
            for owners in itertools.permutations(range(n)):
                best = min(best, max(max(gaps[j, u - 1], gaps[j, v - 1]) for j, (u, v) in zip(owners, tree)))
    else:
        for tree in spanning_trees(n):
            for plates in itertools.permutations(range(r)):
                best = min(best, max(max(gaps[u - 1, i], gaps[v - 1, i]) for i, (u, v) in zip(plates, tree)))
    assert structure_potential(gaps, kind)[0] == best
    assert batch_potential(gaps[None], structures(kind, r))[0] == best


# --- search ---------------------------------------------------------------------------


def test_solve_r1():
    res = solve(own_model(1))
    assert res.found and res.certificate.config.points == (0.0, 1.0)
    res = solve_dragon_player(own_model(1, 2))
    assert res.found and res.certificate.edges == ((1, 2),)


def test_solve_uniform_halving():
    res = solve(own_model(2), grid=64)
    assert res.found and res.certificate.config.points == (0.0, 0.5, 1.0)
    assert res.certificate.sigma == (1, 2)
    bf = brute_force_solve(own_model(2), 64)
    assert abs(bf.config.points[1] - 0.5) <= 1 / 64 and bf.potential == 0


def test_brute_force_r1():
    bf = brute_force_solve(own_model(1), 8)
    assert bf.config.points == (0.0, 1.0) and bf.potential == 0


def test_dragon_piece_r2():
    res = solve_dragon_piece(own_model(2, 1), grid=64)
    assert res.found and res.certificate.edges == ((1, 2),)
    assert abs(res.certificate.config.points[1] - 0.5) <= 1e-3


def test_solve_example_style_r3():
    G = PToralGroup(3)
    d = Density.from_pieces([(0, 0.5, 400.0), (0.5, 0.75, 8.0), (0.75, 1, 4.0)])
    # chocolate weights on Z_3 touch every plate, so use the weighted pattern
    from coopcake.prefs import weighted_weights

    o = ScoreOracle(G, [Player(d, weighted_weights(G))] * 3)
    res = solve(o)
    assert res.found and res.certificate.potential <= 1e-3
    assert verify_certificate(res.certificate, o).ok


@settings(max_examples=20, deadline=None)
@given(seeds, st.sampled_from([2, 3]))
def test_solve_certificates_verify(seed, r):
    o = random_model(r, seed, style="weighted")
    res = solve(o)
    assert res.found
    assert verify_certificate(res.certificate, o).ok
    assert min(res.certificate.margins) >= -res.certificate.eps


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from([2, 3, 4]))
def test_grid_resolution_soundness(seed, r):
    o = random_model(r, seed, style="weighted")
    rng = np.random.default_rng(seed)
    N = 32
    k = int(rng.integers(2, r + 1))
    inner = np.sort(rng.choice(np.arange(1, N), k - 1, replace=False))
    alloc = tuple(int(x) for x in rng.permutation(np.arange(1, r + 1))[:k])
    c = NaturalConfig.make((0, *(inner / N), 1), alloc, r)
    v = envy_potential(c, o)
    L = max(o.lipschitz_bound(j) for j in range(1, o.n_players + 1))
    h = 0.5 / N
    # one cut point moved: scores move by at most L*h/2 each
    pts = list(c.points)
    i = int(rng.integers(1, k))
    pts[i] += float(rng.uniform(-h, h))
    one = NaturalConfig.make(pts, alloc, r)
    d = hausdorff_distance(one.points, c.points)
    assert abs(envy_potential(one, o) - v) <= L * d + 1e-9
    # every cut point moved: tiles change at both ends
    pts = [0.0, *(inner / N + rng.uniform(-h, h, k - 1)), 1.0]
    many = NaturalConfig.make(pts, alloc, r)
    d = hausdorff_distance(many.points, c.points)
    assert abs(envy_potential(many, o) - v) <= 2 * L * d + 1e-9


# --- certificates ------------------------------------------------------------------------


def test_verify_failures():
    o = own_model(2)
    c = NaturalConfig.make((0, 0.5, 1), (1, 2), 2)
    bad = EnvyFreeCertificate(c, (1, 1), 0.0, (0.0, 0.0))
    report = verify_certificate(bad, o)
    assert not report.ok and "not a bijection" in report.errors
    o3 = own_model(4, 3, value=0.0)
    cyc = TreeCertificatePlates(NaturalConfig.make((0, 1), (1,), 4), ((1, 2), (2, 3), (1, 3)), 0.0, ())
    assert any("not a tree" in e for e in verify_certificate(cyc, o3).errors)
    far = NaturalConfig.make((0, 0.9, 1), (1, 2), 2)
    report = verify_certificate(EnvyFreeCertificate(far, (1, 2), 1e-3, ()), o)
    assert not report.ok and "does not accept plate 2" in report.errors[0]


def test_verify_ignores_stored_margins():
    o = own_model(2)
    c = NaturalConfig.make((0, 0.5, 1), (1, 2), 2)
    cert = EnvyFreeCertificate(c, (1, 2), 0.0, (-99.0, -99.0))
    assert verify_certificate(cert, o).ok


def test_certificate_json_round_trip():
    for res, o in [
        (solve(own_model(2)), own_model(2)),
        (solve_dragon_piece(own_model(2, 1)), own_model(2, 1)),
        (solve_dragon_player(own_model(2, 3)), own_model(2, 3)),
    ]:
        data = certificate_to_json(res.certificate)
        assert set(data) >= {"kind", "config", "eps", "margins"}
        back = certificate_from_json(data)
        assert back == res.certificate
        assert verify_certificate(back, o).ok
    with pytest.raises(ValueError):
        certificate_from_json({"kind": "nope"})
