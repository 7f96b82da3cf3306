"""
Smooth under-approximations of min and max

smooth_min is the scaled negative log-sum-exp, smooth_max the softmax-weighted
mean. Both never exceed the true min/max and converge to it as k grows.
The running_* variants aggregate prefixes of a signal and drive Eventually
and Always; the pair_* variants drive the Until and Then sweeps.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp, softmax

from errors import EvaluationError
from .constants import DEFAULT_K1, DEFAULT_K2, DEFAULT_RHO_MAX


@dataclass(frozen=True)
class SmoothingParams:
    k1: float = DEFAULT_K1
    k2: float = DEFAULT_K2
    rho_max: float = DEFAULT_RHO_MAX

    def __post_init__(self):
        for name in ("k1", "k2", "rho_max"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise EvaluationError(f"SmoothingParams.{name} must be positive and finite, got {value}")


def _values(values) -> np.ndarray:
    a = np.asarray(values, dtype=float).ravel()
    if a.size == 0:
        raise EvaluationError("Cannot aggregate an empty list")
    return a


def smooth_min(values, k1: float) -> float:
    """
    -(1/k1) * log(sum(exp(-k1 * a_i))), shifted by the true minimum internally.

    Args:
        values: Non-empty sequence of reals
        k1: Sharpness, > 0

    Returns:
        A value <= min(values)
    """
    a = _values(values)
    if not k1 > 0:
        raise EvaluationError(f"k1 must be positive, got {k1}")
    return min(float(-logsumexp(-k1 * a) / k1), float(a.min()))


def smooth_max(values, k2: float) -> float:
    """
    sum(a_i * exp(k2 * a_i)) / sum(exp(k2 * a_i)), written as the true maximum
    minus the softmax-weighted distance to it.

    Args:
        values: Non-empty sequence of reals
        k2: Sharpness, > 0

    Returns:
        A value <= max(values)
    """
    a = _values(values)
    if not k2 > 0:
        raise EvaluationError(f"k2 must be positive, got {k2}")
    top = float(a.max())
    return top - float(softmax(k2 * a) @ (top - a))


# ============================================================================
# ARRAY FORMS
# ============================================================================

def smooth_min_axis(a: np.ndarray, k: float, axis: int = 0) -> np.ndarray:
    """smooth_min along an axis"""
    a = np.asarray(a, dtype=float)
    return np.minimum(-logsumexp(-k * a, axis=axis) / k, np.min(a, axis=axis))


def smooth_max_axis(a: np.ndarray, k: float, axis: int = 0) -> np.ndarray:
    """smooth_max along an axis"""
    a = np.asarray(a, dtype=float)
    top = np.max(a, axis=axis, keepdims=True)
    gap = np.sum(softmax(k * a, axis=axis) * (top - a), axis=axis)
    return np.squeeze(top, axis=axis) - gap


def running_smooth_min(a, k: float) -> np.ndarray:
    """Prefix smooth_min: entry j aggregates a[0..j]"""
    a = np.asarray(a, dtype=float)
    return np.minimum(-np.logaddexp.accumulate(-k * a) / k, np.minimum.accumulate(a))


def running_smooth_max(a, k: float) -> np.ndarray:
    """
    Prefix smooth_max: entry j aggregates a[0..j].

    Keeps the running maximum `top`, the weight sum and the weighted distance
    to `top`, all with weights exp(k * (a_i - top)) <= 1. The result is
    top - distance / weights, so it never exceeds the prefix maximum.
    """
    a = np.asarray(a, dtype=float)
    out = np.empty(a.shape)
    top = -math.inf
    total = 0.0
    gap = 0.0
    for j, x in enumerate(a.tolist()):
        if x > top:
            if total:
                scale = math.exp(k * (top - x))
                gap = scale * (gap + total * (x - top))
                total *= scale
            top = x
            total += 1.0
        else:
            w = math.exp(k * (x - top))
            total += w
            gap += w * (top - x)
        out[j] = top - gap / total
    return out


def pair_smooth_min(a: float, b: float, k: float) -> float:
    """smooth_min of two reals"""
    low = min(a, b)
    return low - math.log1p(math.exp(-k * abs(a - b))) / k


def pair_smooth_max(a: float, b: float, k: float) -> float:
    """smooth_max of two reals"""
    high = max(a, b)
    d = abs(a - b)
    w = math.exp(-k * d)
    return high - d * w / (1.0 + w)
