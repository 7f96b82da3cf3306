"""
Qualitative, weighted-robustness and smoothed-robustness semantics

All three semantics share one recursion that turns every subformula into a
signal: an array whose entry t is the value of the subformula on the suffix
starting at state t. Only the algebra (how values are negated, aggregated
and weighted) differs between them.

Temporal operators over a suffix starting at t:
    F phi      max over t' >= t of phi(t')
    G phi      min over t' >= t of phi(t')
    phi U psi  max over t' >= t of min(psi(t'), min over t <= t'' < t' of phi(t''))
    phi T psi  max over t' >  t of min(psi(t'), max over t <= t'' < t' of phi(t''))
The inner min of U is empty at t' = t, so that term is psi(t) alone. A suffix
with no t' > t has no witness for T and evaluates to the algebra's floor.

U and T are computed by a backward sweep over suffixes, using the unrolled
forms of the definitions above:
    (phi U psi)(t) = max(psi(t), min(phi(t), (phi U psi)(t+1)))
    (phi T psi)(t) = max(min(phi(t), (F psi)(t+1)), (phi T psi)(t+1))
The smoothed semantics substitutes the two-argument smooth min/max in these
steps. Each step stays below its exact counterpart, so the result remains an
under-approximation.
"""

import numpy as np

from errors import EvaluationError
from .constants import DEFAULT_RHO_MAX, Kind
from .formula import Formula
from .registry import PredicateRegistry
from .smoothing import (
    SmoothingParams,
    pair_smooth_max,
    pair_smooth_min,
    running_smooth_max,
    running_smooth_min,
    smooth_max_axis,
    smooth_min_axis,
)
from .trace import Trace


def conj_terms(xs: np.ndarray, weights) -> np.ndarray:
    """
    Per-operand terms of the weighted conjunction aggregator.

    A positive operand is scaled by (1 - w_bar), a negative one by w_bar,
    zero stays zero; the aggregate is the minimum of these terms.
    """
    w = np.asarray(weights, dtype=float)
    w_bar = (w / w.sum()).reshape((-1,) + (1,) * (xs.ndim - 1))
    return ((0.5 - w_bar) * np.sign(xs) + 0.5) * xs


def disj_terms(xs: np.ndarray, weights) -> np.ndarray:
    """Terms whose maximum equals -conj(w, -x)"""
    return -conj_terms(-xs, weights)


class _BooleanAlgebra:
    """Values are 0.0 (false) and 1.0 (true); weights are ignored"""

    def floor(self):
        return 0.0

    def true(self, n):
        return np.ones(n)

    def atom(self, robustness):
        return (robustness > 0).astype(float)

    def neg(self, x):
        return 1.0 - x

    def conj(self, xs, weights):
        return np.min(xs, axis=0)

    def disj(self, xs, weights):
        return np.max(xs, axis=0)

    def implies(self, a, b):
        return np.maximum(self.neg(a), b)

    def min2(self, a, b):
        return min(a, b)

    def max2(self, a, b):
        return max(a, b)

    def suffix_min(self, x):
        return np.minimum.accumulate(x[::-1])[::-1]

    def suffix_max(self, x):
        return np.maximum.accumulate(x[::-1])[::-1]


class _RobustnessAlgebra(_BooleanAlgebra):
    """Weighted robustness with exact min/max"""

    def __init__(self, rho_max: float):
        if not (rho_max > 0 and np.isfinite(rho_max)):
            raise EvaluationError(f"rho_max must be positive and finite, got {rho_max}")
        self.rho_max = float(rho_max)

    def floor(self):
        return -self.rho_max

    def true(self, n):
        return np.full(n, self.rho_max)

    def atom(self, robustness):
        return robustness

    def neg(self, x):
        return -x

    def conj(self, xs, weights):
        return np.min(conj_terms(xs, weights), axis=0)

    def disj(self, xs, weights):
        return np.max(disj_terms(xs, weights), axis=0)


class _SmoothAlgebra(_RobustnessAlgebra):
    """Weighted robustness with every min/max replaced by its smooth version"""

    def __init__(self, sp: SmoothingParams):
        super().__init__(sp.rho_max)
        self.k1 = sp.k1
        self.k2 = sp.k2

    def conj(self, xs, weights):
        return smooth_min_axis(conj_terms(xs, weights), self.k1, axis=0)

    def disj(self, xs, weights):
        return smooth_max_axis(disj_terms(xs, weights), self.k2, axis=0)

    def implies(self, a, b):
        return smooth_max_axis(np.stack([-a, b]), self.k2, axis=0)

    def min2(self, a, b):
        return pair_smooth_min(a, b, self.k1)

    def max2(self, a, b):
        return pair_smooth_max(a, b, self.k2)

    def suffix_min(self, x):
        return running_smooth_min(x[::-1], self.k1)[::-1]

    def suffix_max(self, x):
        return running_smooth_max(x[::-1], self.k2)[::-1]


# ============================================================================
# RECURSION
# ============================================================================

def _predicate_signal(formula: Formula, trace: Trace, registry: PredicateRegistry) -> np.ndarray:
    values = registry.signal(formula.name, formula.args, trace.states)
    cmp = formula.comparison
    if cmp is None:
        return values
    return cmp.threshold - values if cmp.op == "<" else values - cmp.threshold


def _until(algebra, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    ps, qs = p.tolist(), q.tolist()
    out = np.empty(len(ps))
    acc = qs[-1]
    out[-1] = acc
    for t in range(len(ps) - 2, -1, -1):
        acc = algebra.max2(qs[t], algebra.min2(ps[t], acc))
        out[t] = acc
    return out


def _then(algebra, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    ps = p.tolist()
    later = algebra.suffix_max(q).tolist()
    out = np.empty(len(ps))
    acc = algebra.floor()
    out[-1] = acc
    for t in range(len(ps) - 2, -1, -1):
        acc = algebra.max2(algebra.min2(ps[t], later[t + 1]), acc)
        out[t] = acc
    return out


def _signal(formula: Formula, trace: Trace, registry: PredicateRegistry, algebra) -> np.ndarray:
    kind = formula.kind
    n = len(trace)
    if kind is Kind.TRUE:
        return algebra.true(n)
    if kind is Kind.PREDICATE:
        return algebra.atom(_predicate_signal(formula, trace, registry))

    children = [_signal(c, trace, registry, algebra) for c in formula.children]
    if kind is Kind.NOT:
        return algebra.neg(children[0])
    if kind is Kind.AND:
        return algebra.conj(np.stack(children), formula.weights)
    if kind is Kind.OR:
        return algebra.disj(np.stack(children), formula.weights)
    if kind is Kind.EVENTUALLY:
        return algebra.suffix_max(children[0])
    if kind is Kind.ALWAYS:
        return algebra.suffix_min(children[0])
    if kind is Kind.UNTIL:
        return _until(algebra, children[0], children[1])
    if kind is Kind.THEN:
        return _then(algebra, children[0], children[1])
    if kind is Kind.IMPLIES:
        return algebra.implies(children[0], children[1])
    raise EvaluationError(f"Unsupported formula kind {kind!r}")


def _check_trace(trace: Trace) -> Trace:
    if not isinstance(trace, Trace):
        trace = Trace(trace)
    return trace


# ============================================================================
# PUBLIC API
# ============================================================================

def satisfies(formula: Formula, trace: Trace, registry: PredicateRegistry) -> bool:
    """
    Qualitative semantics: does the trace satisfy the formula?

    A predicate holds at a state iff its robustness there is > 0. Weights
    play no role.

    Raises:
        UnknownPredicateError: Formula uses an unregistered predicate
        EmptyTraceError: Trace has no states
    """
    trace = _check_trace(trace)
    return bool(_signal(formula, trace, registry, _BooleanAlgebra())[0] > 0.5)


def robustness(
    formula: Formula,
    trace: Trace,
    registry: PredicateRegistry,
    rho_max: float = DEFAULT_RHO_MAX,
) -> float:
    """
    Weighted robustness: signed degree of satisfaction.

    Strictly positive implies satisfaction, strictly negative implies
    violation.
    """
    trace = _check_trace(trace)
    return float(_signal(formula, trace, registry, _RobustnessAlgebra(rho_max))[0])


def smooth_robustness(
    formula: Formula,
    trace: Trace,
    registry: PredicateRegistry,
    sp: SmoothingParams = SmoothingParams(),
) -> float:
    """
    Smoothed weighted robustness.

    Same recursion as robustness() with min replaced by smooth_min(., k1) and
    max by smooth_max(., k2), including inside the weighted aggregators.
    For formulas in negation normal form the result never exceeds
    robustness() and approaches it as k1, k2 grow.
    """
    trace = _check_trace(trace)
    return float(_signal(formula, trace, registry, _SmoothAlgebra(sp))[0])


def robustness_signal(formula: Formula, trace: Trace, registry: PredicateRegistry, rho_max: float = DEFAULT_RHO_MAX) -> np.ndarray:
    """Weighted robustness at every suffix start"""
    trace = _check_trace(trace)
    return _signal(formula, trace, registry, _RobustnessAlgebra(rho_max))
