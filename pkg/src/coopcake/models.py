"""Model files, the shipped demo models, and seeded random models."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from .config import NaturalConfig, config_from_json
from .prefs import (
    Density,
    Player,
    ScoreOracle,
    chocolate_weights,
    own_plate_weights,
    symmetric_penalty_weights,
    weighted_weights,
)
from .symmetry import PToralGroup, prime_power


class ModelError(ValueError):
    """A model file that cannot be turned into an oracle."""


@dataclass
class Model:
    name: str
    oracle: ScoreOracle
    description: str = ""
    example_config: NaturalConfig | None = None
    raw: dict[str, Any] | None = None

    @property
    def r(self) -> int:
        return self.oracle.r


def _parse_offset(key: str, group: PToralGroup):
    parts = [p for p in key.strip("()[] ").replace(" ", "").split(",") if p]
    try:
        digits = [int(p) for p in parts]
    except ValueError:
        raise ModelError(f"weight offset {key!r} is not an integer tuple") from None
    if len(digits) == 1 and group.nu > 1:
        # a bare integer shifts the seat (low digit)
        digits = [0] * (group.nu - 1) + digits
    if len(digits) != group.nu:
        raise ModelError(f"weight offset {key!r} needs {group.nu} coordinates")
    return group.element(tuple(digits))


def model_from_json(data: dict[str, Any], name: str = "model") -> Model:
    try:
        r = int(data["r"])
        p = int(data.get("p", r))
        nu = int(data.get("nu", 1))
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"field r/p/nu: {exc}") from None
    if p**nu != r:
        raise ModelError(f"r={r} but p^nu = {p}^{nu} = {p**nu}")
    group = PToralGroup(p, nu)
    if not group.is_p_toral:
        warnings.warn(f"r={r} with p={p} is not a prime-power setting; no existence guarantee")
    players = []
    for idx, raw in enumerate(data.get("players", []), start=1):
        where = f"players[{idx - 1}]"
        try:
            density = Density.from_pieces(raw["density"])
            weights: dict = {}
            for key, w in raw.get("weights", {"0": 1.0}).items():
                g = _parse_offset(str(key), group)
                weights[g] = weights.get(g, 0.0) + float(w)
            bonus = {int(k): float(v) for k, v in raw.get("plate_bonus", {}).items()}
            players.append(
                Player(
                    density,
                    weights,
                    eps_pref=float(raw.get("eps_pref", 0.0)),
                    empty_value=float(raw.get("empty_value", 0.0)),
                    plate_bonus=bonus,
                )
            )
        except ModelError as exc:
            raise ModelError(f"{where}: {exc}") from None
        except (KeyError, TypeError, ValueError) as exc:
            raise ModelError(f"{where}: {exc!r}") from None
    if not players:
        raise ModelError("model has no players")
    example = None
    if "example_config" in data:
        try:
            example = config_from_json({"r": r, **data["example_config"]})
        except (KeyError, TypeError, ValueError) as exc:
            raise ModelError(f"example_config: {exc}") from None
    return Model(
        data.get("name", name), ScoreOracle(group, players), data.get("description", ""), example, data
    )


def model_to_json(model: Model) -> dict[str, Any]:
    o = model.oracle
    out: dict[str, Any] = {
        "name": model.name,
        "description": model.description,
        "r": o.r,
        "p": o.group.p,
        "nu": o.group.nu,
        "players": [],
    }
    for pl in o.players:
        entry: dict[str, Any] = {
            "density": pl.density.pieces(),
            "weights": {",".join(map(str, g)): w for g, w in pl.weights.items()},
            "eps_pref": pl.eps_pref,
        }
        if pl.empty_value:
            entry["empty_value"] = pl.empty_value
        if pl.plate_bonus:
            entry["plate_bonus"] = {str(k): v for k, v in pl.plate_bonus.items()}
        out["players"].append(entry)
    if model.example_config is not None:
        ex = model.example_config.to_json()
        out["example_config"] = {"cut": ex["cut"], "alloc": ex["alloc"]}
    return out


def load_model(path: str | Path) -> Model:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ModelError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return model_from_json(data, name=path.stem)


def list_demos() -> list[str]:
    files = resources.files("coopcake").joinpath("models").iterdir()
    return sorted(f.name[:-5] for f in files if f.name.endswith(".json"))


def load_demo(name: str) -> Model:
    f = resources.files("coopcake").joinpath("models").joinpath(f"{name}.json")
    if not f.is_file():
        raise ModelError(f"no demo named {name!r}; available: {', '.join(list_demos())}")
    return model_from_json(json.loads(f.read_text()), name=name)


def resolve_model(ref: str, seed: int = 0) -> Model:
    """A path to a model file, a shipped demo name, or ``random:R[:style]``.

    Random models are drawn from ``seed``; the style defaults to ``weighted``.
    """
    if ref.startswith("random:"):
        parts = ref.split(":")
        try:
            r = int(parts[1])
        except (IndexError, ValueError):
            raise ModelError(f"bad random model reference {ref!r}; expected random:R[:style]") from None
        style = parts[2] if len(parts) > 2 else "weighted"
        if style not in WEIGHT_STYLES:
            raise ModelError(f"unknown weight style {style!r}; choose from {sorted(WEIGHT_STYLES)}")
        try:
            oracle = random_model(r, seed, style=style)
        except ValueError as exc:
            raise ModelError(str(exc)) from None
        return Model(f"{ref}@{seed}", oracle, f"random {style} model, r={r}, seed {seed}")
    if Path(ref).suffix == ".json" or Path(ref).exists():
        return load_model(ref)
    return load_demo(ref)


WEIGHT_STYLES = {
    "chocolate": chocolate_weights,
    "weighted": weighted_weights,
    "symmetric": symmetric_penalty_weights,
    "own": own_plate_weights,
}


def random_density(rng: np.random.Generator, pieces: int = 4, high: float = 10.0) -> Density:
    inner = np.sort(rng.choice(np.arange(1, 16), size=pieces - 1, replace=False)) / 16
    breaks = (0.0, *inner.tolist(), 1.0)
    values = np.round(rng.uniform(0.0, high, size=pieces), 3)
    values[rng.integers(pieces)] += 1.0  # keep the cake worth something
    return Density(breaks, tuple(values.tolist()))


def random_model(
    r: int,
    seed: int,
    style: str = "chocolate",
    n_players: int | None = None,
    p: int | None = None,
    nu: int | None = None,
    identical: bool = False,
) -> ScoreOracle:
    """Seeded random cooperative model; equivariant because weights are group offsets.

    With ``identical`` every player shares one density, which forces exact ties.
    """
    if p is None or nu is None:
        pp = prime_power(r)
        p, nu = pp if pp else (r, 1)
    group = PToralGroup(p, nu)
    rng = np.random.default_rng(seed)
    weights = WEIGHT_STYLES[style](group)
    n = r if n_players is None else n_players
    if identical:
        shared = random_density(rng)
        players = [Player(shared, dict(weights)) for _ in range(n)]
    else:
        players = [Player(random_density(rng), dict(weights)) for _ in range(n)]
    return ScoreOracle(group, players)
