from dataclasses import dataclass

import numpy as np

from errors import EmptyTraceError, TraceDimensionError


@dataclass(frozen=True, eq=False)
class Trace:
    """
    Finite, uniformly sampled sequence of d-dimensional states.

    Args:
        states: Array-like of shape (T+1, d); a 1-D sequence is read as d=1
        dt: Sampling period in seconds
    """
    states: np.ndarray
    dt: float = 1.0

    def __post_init__(self):
        states = np.array(self.states, dtype=float)
        if states.ndim == 1:
            states = states.reshape(-1, 1)
        if states.ndim != 2:
            raise TraceDimensionError(f"Trace states must be 2-D (T+1, d), got shape {states.shape}")
        if states.shape[0] == 0:
            raise EmptyTraceError("Trace has no states")
        if states.shape[1] == 0:
            raise TraceDimensionError("Trace states have dimension 0")
        if not (self.dt > 0 and np.isfinite(self.dt)):
            raise TraceDimensionError(f"Trace dt must be positive and finite, got {self.dt}")
        states.setflags(write=False)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "dt", float(self.dt))

    def __len__(self) -> int:
        return self.states.shape[0]

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self)) * self.dt

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]
