"""
Weighted truncated linear temporal logic: parser and monitors
"""

from .constants import Kind
from .formula import (
    TRUE,
    Formula,
    always,
    conj,
    depth,
    disj,
    eventually,
    implies,
    is_nnf,
    negate,
    predicate,
    predicates,
    then,
    to_text,
    until,
)
from .parser import parse
from .registry import PredicateRegistry, default_registry
from .semantics import robustness, robustness_signal, satisfies, smooth_robustness
from .smoothing import SmoothingParams, smooth_max, smooth_min
from .trace import Trace

__all__ = [
    'Kind',
    'Formula',
    'TRUE',
    'predicate',
    'negate',
    'conj',
    'disj',
    'eventually',
    'always',
    'until',
    'then',
    'implies',
    'to_text',
    'depth',
    'predicates',
    'is_nnf',
    'parse',
    'PredicateRegistry',
    'default_registry',
    'Trace',
    'satisfies',
    'robustness',
    'robustness_signal',
    'smooth_robustness',
    'SmoothingParams',
    'smooth_min',
    'smooth_max',
]

__version__ = '1.0.0'
