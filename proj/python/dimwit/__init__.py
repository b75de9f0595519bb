"""Randomness certification from dimension witnesses and Bell functionals.

Targets are catalog names (see :func:`catalog`), paths to functional JSON
files, or functional dicts in the documented schema. Results are plain dicts.
"""

import json
from typing import Any, Dict, List, Optional, Sequence, Union

from . import _core
from ._core import DimwitError

Target = Union[str, Dict[str, Any]]

__all__ = [
    "DimwitError",
    "bell_to_witness",
    "catalog",
    "catalog_entry",
    "certify",
    "classical_bound",
    "figure",
    "functional",
    "grid_max",
    "min_entropy",
    "reduce",
    "relaxation_maximum",
    "seesaw_max_guessing",
    "seesaw_max_witness",
    "solve_sparse",
    "sweep",
    "theorem1_functional",
    "theorem2_functional",
    "verify_inclusion",
]


def _spec(target: Target) -> str:
    return target if isinstance(target, str) else json.dumps(target)


def catalog() -> List[str]:
    return list(_core.catalog_list())


def catalog_entry(name: str) -> Dict[str, Any]:
    return json.loads(_core.catalog_entry(name))


def functional(target: Target) -> Dict[str, Any]:
    return json.loads(_core.functional(_spec(target)))


def certify(
    target: Target,
    s: Optional[float] = None,
    p: Optional[float] = None,
    mode: str = "thm2",
    level: str = "1+AB",
    dim: int = 2,
    x0: Optional[int] = None,
    y0: Optional[int] = None,
    s_max: Optional[float] = None,
    jobs: int = 1,
) -> Dict[str, Any]:
    """Certified guessing probability and min-entropy at one witness value.

    Give either the absolute value ``s`` or ``p``, a fraction of the
    reference maximum (``s_max``, else the catalog value, else the
    relaxation maximum).
    """
    return json.loads(_core.certify(_spec(target), s, p, mode, level, dim, x0, y0, s_max, jobs))


def sweep(
    target: Target,
    p_min: float = 0.8,
    p_max: float = 1.0,
    steps: int = 21,
    mode: str = "thm2",
    level: str = "1+AB",
    dim: int = 2,
    x0: Optional[int] = None,
    y0: Optional[int] = None,
    s_max: Optional[float] = None,
    jobs: int = 1,
) -> Dict[str, Any]:
    return json.loads(_core.sweep(_spec(target), p_min, p_max, steps, mode, level, dim, x0, y0, s_max, jobs))


def relaxation_maximum(target: Target, mode: str = "thm2", level: str = "1+AB", dim: int = 2) -> float:
    return _core.relaxation_maximum(_spec(target), mode, level, dim)


def classical_bound(target: Target, jobs: int = 1, trace_one: bool = True) -> Dict[str, Any]:
    return json.loads(_core.classical_bound(_spec(target), jobs, trace_one))


def grid_max(target: Target, resolution: float = 1.0, jobs: int = 1) -> Dict[str, Any]:
    return json.loads(_core.grid_max(_spec(target), resolution, jobs))


def verify_inclusion(samples: int = 100, seed: int = 1, level: str = "2") -> Dict[str, Any]:
    return json.loads(_core.verify_inclusion(samples, seed, level))


def seesaw_max_witness(target: Target, restarts: int = 50, seed: int = 1) -> Dict[str, Any]:
    return json.loads(_core.seesaw_max_witness(_spec(target), restarts, seed))


def seesaw_max_guessing(
    target: Target,
    s_floor: float,
    x0: Optional[int] = None,
    y0: Optional[int] = None,
    restarts: int = 50,
    seed: int = 1,
) -> Dict[str, Any]:
    return json.loads(_core.seesaw_max_guessing(_spec(target), s_floor, x0, y0, restarts, seed))


def bell_to_witness(target: Target, dim: int = 2) -> Dict[str, Any]:
    return json.loads(_core.bell_to_witness(_spec(target), dim))


def reduce(name: str) -> Dict[str, Any]:
    return json.loads(_core.reduce(name))


def theorem1_functional(target: Target, dim: int = 2) -> Dict[str, Any]:
    return json.loads(_core.theorem1_functional(_spec(target), dim))


def theorem2_functional(target: Target) -> Dict[str, Any]:
    return json.loads(_core.theorem2_functional(_spec(target)))


def figure(n: int, ps: Sequence[float] = (), level: str = "1+AB", jobs: int = 1) -> List[Dict[str, Any]]:
    """Panels of figure ``n``; missing points are ``None``."""
    return json.loads(_core.figure(n, list(ps), level, jobs))


def solve_sparse(text: str) -> Dict[str, Any]:
    return json.loads(_core.solve_sparse(text))


def min_entropy(p_guess: float) -> float:
    return _core.min_entropy(p_guess)
