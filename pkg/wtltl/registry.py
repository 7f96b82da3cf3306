"""
Predicate registry: binds predicate names to robustness functions over states
"""

from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from config import logger
from errors import TraceDimensionError, UnknownPredicateError

_logger = logger(__name__)

PredicateFn = Callable[..., object]


@dataclass(frozen=True)
class _Entry:
    fn: PredicateFn
    vectorized: bool
    dim: Optional[int]


class PredicateRegistry:
    """
    Maps (name, arity) to a function of a state and the predicate arguments.

    A registered function returns a real whose sign tells whether the
    predicate holds at that state. Predicates written with a comparison,
    `f(args) < c`, treat the function as f and evaluate to c - f(y).

    Example:
        registry = PredicateRegistry()
        registry.register("speed", 0, lambda y: float(np.linalg.norm(y)))
        registry.register("inside", 1, inside_fn, vectorized=True, dim=2)
    """

    def __init__(self):
        self._entries: Dict[Tuple[str, int], _Entry] = {}

    def register(
        self,
        name: str,
        arity: int,
        fn: PredicateFn,
        vectorized: bool = False,
        dim: Optional[int] = None,
    ) -> "PredicateRegistry":
        """
        Register a predicate function.

        Args:
            name: Predicate name as written in formulas
            arity: Number of arguments in `name(a, b, ...)`
            fn: fn(state, *args) -> float, or fn(states, *args) -> array when vectorized
            vectorized: fn takes the whole (T+1, d) state array at once
            dim: Required state dimension, checked at evaluation

        Returns:
            The registry, so registrations can be chained
        """
        key = (name, arity)
        if key in self._entries:
            _logger.debug(f"Replacing predicate {name}/{arity}")
        self._entries[key] = _Entry(fn, vectorized, dim)
        return self

    def __contains__(self, key: Tuple[str, int]) -> bool:
        return key in self._entries

    def signal(self, name: str, args: tuple, states: np.ndarray) -> np.ndarray:
        """
        Evaluate a predicate function at every state of a trace.

        Args:
            name: Predicate name
            args: Predicate arguments
            states: Array of shape (T+1, d)

        Returns:
            Array of shape (T+1,)

        Raises:
            UnknownPredicateError: No function registered for name/arity
            TraceDimensionError: State dimension differs from the registered one
        """
        entry = self._entries.get((name, len(args)))
        if entry is None:
            raise UnknownPredicateError(f"Predicate {name}/{len(args)} is not registered")
        if entry.dim is not None and states.shape[1] != entry.dim:
            raise TraceDimensionError(
                f"Predicate {name}/{len(args)} expects {entry.dim}-D states, trace has {states.shape[1]}-D"
            )
        if entry.vectorized:
            values = np.asarray(entry.fn(states, *args), dtype=float)
        else:
            values = np.array([entry.fn(state, *args) for state in states], dtype=float)
        if values.shape != (states.shape[0],):
            raise TraceDimensionError(
                f"Predicate {name}/{len(args)} returned shape {values.shape}, expected ({states.shape[0]},)"
            )
        return values


def _coordinate(states: np.ndarray, index) -> np.ndarray:
    i = int(index)
    if not 0 <= i < states.shape[1]:
        raise TraceDimensionError(f"x({i}) is out of range for {states.shape[1]}-D states")
    return states[:, i]


def default_registry() -> PredicateRegistry:
    """
    Registry with dimension-generic predicates:
        y       first coordinate
        x(i)    coordinate i
        norm    Euclidean norm of the state
    """
    registry = PredicateRegistry()
    registry.register("y", 0, lambda states: states[:, 0], vectorized=True)
    registry.register("x", 1, _coordinate, vectorized=True)
    registry.register("norm", 0, lambda states: np.linalg.norm(states, axis=1), vectorized=True)
    return registry
