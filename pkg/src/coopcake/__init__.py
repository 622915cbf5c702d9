"""Cooperative envy-free division of [0, 1] with allocation-dependent preferences."""

from .chess import ChessComplex, enumerate_faces, homology_ranks, is_face
from .config import AuxConfig, NaturalConfig, equivalent, matrix_rep, project
from .geometry import ImproperCut, ProperCut, Tile, collapse, hausdorff_distance, tiles
from .models import Model, list_demos, load_demo, load_model, random_model
from .prefs import Density, Player, ScoreOracle, pullback
from .solver import (
    brute_force_solve,
    envy_potential,
    find_matching,
    solve,
    solve_dragon_piece,
    solve_dragon_player,
    verify_certificate,
)
from .symmetry import PToralGroup, act, act_config, audit_equivariance

__version__ = "0.1.0"
