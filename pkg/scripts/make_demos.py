"""Regenerate the demo model files shipped in src/coopcake/models/."""

import json
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "coopcake" / "models"

CHOCOLATE = {"-1": 1, "0": 1, "1": 1}
WEIGHTED = {"0": 3, "1": -1, "-1": 1}
SYMMETRIC = {"0": 3, "1": -1, "-1": -1}
OWN = {"0": 1}

D_A = [[0, 0.25, 6], [0.25, 0.5, 1], [0.5, 0.875, 2], [0.875, 1, 8]]
D_B = [[0, 0.375, 1], [0.375, 0.625, 9], [0.625, 1, 2]]
D_C = [[0, 0.125, 4], [0.125, 0.75, 0.5], [0.75, 1, 5]]
D_D = [[0, 0.5, 3], [0.5, 1, 1]]
D_E = [[0, 0.0625, 12], [0.0625, 0.5625, 1], [0.5625, 1, 3]]


def player(density, weights, **extra):
    return {"density": density, "weights": weights, "eps_pref": 0.0, **extra}


def model(name, description, r, players, p=None, nu=1, **extra):
    return {
        "name": name,
        "description": description,
        "r": r,
        "p": p or r,
        "nu": nu,
        "players": players,
        **extra,
    }


DEMOS = [
    model(
        "example-1-2",
        "Seven plates at a round table; chocolate on a plate and both neighbours counts. "
        "At the example configuration the plates hold (100,0,100,1,1,0,1) units of chocolate "
        "and the empty plate 2 is the unique favourite while the empty plate 6 is not wanted.",
        7,
        [player([[0, 0.5, 400], [0.5, 0.75, 8], [0.75, 1, 4]], CHOCOLATE) for _ in range(7)],
        example_config={"cut": [0, 0.25, 0.5, 0.625, 0.75, 1], "alloc": {"1": 1, "2": 3, "3": 4, "4": 5, "5": 7}},
    ),
    model(
        "uniform-2",
        "Two players, uniform cake, each values only their own plate: the classical halving.",
        2,
        [player([[0, 1, 1]], OWN), player([[0, 1, 1]], OWN)],
    ),
    model(
        "chocolate-2",
        "Two players at a two-plate table who also count the other plate.",
        2,
        [player(D_A, CHOCOLATE), player(D_B, {"0": 2, "1": 1})],
    ),
    model(
        "weighted-3",
        "Three plates, score 3f(i) - f(i+1) + f(i-1) for every player.",
        3,
        [player(D_A, WEIGHTED), player(D_B, WEIGHTED), player(D_C, WEIGHTED)],
    ),
    model(
        "symmetric-3",
        "Three plates, symmetric penalty 3f(i) - f(i+1) - f(i-1).",
        3,
        [player(D_A, SYMMETRIC), player(D_A, SYMMETRIC), player(D_B, SYMMETRIC)],
    ),
    model(
        "tables-4",
        "Two tables of two plates (G = Z_2 x Z_2); players count their plate and the other "
        "seat at the same table.",
        4,
        [player(D, {"0,0": 1, "0,1": 1}) for D in (D_A, D_B, D_C, D_D)],
        p=2,
        nu=2,
    ),
    model(
        "chocolate-5",
        "Five plates at a round table, chocolate on a plate and both neighbours.",
        5,
        [player(D, CHOCOLATE) for D in (D_A, D_B, D_C, D_D, D_E)],
    ),
    model(
        "broken-plate-bonus",
        "Negative control: player 1 adds a bonus to plate 1 only, which breaks equivariance.",
        3,
        [player(D_A, WEIGHTED, plate_bonus={"1": 2.0}), player(D_B, WEIGHTED), player(D_C, WEIGHTED)],
    ),
    model(
        "dragon-piece-2",
        "Two plates, one player; the dragon grabs a plate first.",
        2,
        [player(D_A, OWN)],
    ),
    model(
        "dragon-piece-3",
        "Three plates, two players; the dragon grabs a plate first.",
        3,
        [player(D_A, WEIGHTED), player(D_B, WEIGHTED)],
    ),
    model(
        "dragon-player-2",
        "Two plates, three players; the dragon swallows one player after the cut.",
        2,
        [player(D, {"0": 2, "1": 1}) for D in (D_A, D_B, D_C)],
    ),
    model(
        "dragon-player-3",
        "Three plates, four players; the dragon swallows one player after the cut.",
        3,
        [player(D, WEIGHTED) for D in (D_A, D_B, D_C, D_D)],
    ),
]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for m in DEMOS:
        path = OUT / f"{m['name']}.json"
        path.write_text(json.dumps(m, indent=2) + "\n")
        print(path.relative_to(OUT.parents[2]))


if __name__ == "__main__":
    main()
