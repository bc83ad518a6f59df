"""Exact search for online bin-stretching algorithms on a discretized game."""
from .cache import CacheResult, DominanceCache
from .certificate import Certificate, extract, verify
from .model import GameState, Item, ModelError, Params, canonicalize, place, render_state
from .packing import PackingInstance, che, ffd_fits, fits_bruteforce, fits_exact, history_leq
from .solver import (
    Outcome,
    SolveConfig,
    SolveStats,
    Solver,
    generate_items,
    minimal_capacity,
    solve_instance,
)

__all__ = [
    "CacheResult",
    "Certificate",
    "DominanceCache",
    "GameState",
    "Item",
    "ModelError",
    "Outcome",
    "PackingInstance",
    "Params",
    "SolveConfig",
    "SolveStats",
    "Solver",
    "canonicalize",
    "che",
    "extract",
    "ffd_fits",
    "fits_bruteforce",
    "fits_exact",
    "generate_items",
    "history_leq",
    "minimal_capacity",
    "place",
    "render_state",
    "solve_instance",
    "verify",
]
