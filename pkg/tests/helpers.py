"""
Shared test helpers: brute-force suffix oracles, random formulas, polylines
"""

import numpy as np

from wtltl import Kind, always, conj, disj, eventually, implies, negate, predicate, then, until

# Three threshold predicates over a 1-D state
ATOMS = (
    predicate("y", (), (">", 0.5)),
    predicate("y", (), (">", 1.5)),
    predicate("y", (), ("<", 2.5)),
)
STATE_GRID = (0.0, 1.0, 2.0, 3.0)


def _atom_value(formula, states, registry, t):
    value = registry.signal(formula.name, formula.args, np.asarray(states, dtype=float).reshape(len(states), -1))[t]
    cmp = formula.comparison
    if cmp is not None:
        value = cmp.threshold - value if cmp.op == "<" else value - cmp.threshold
    return float(value)


def holds(formula, states, registry):
    """Boolean semantics by direct enumeration of suffixes"""
    n = len(states)
    memo = {}

    def h(f, t):
        key = (f, t)
        if key not in memo:
            memo[key] = _holds(f, t)
        return memo[key]

    def _holds(f, t):
        kind = f.kind
        c = f.children
        if kind is Kind.TRUE:
            return True
        if kind is Kind.PREDICATE:
            return _atom_value(f, states, registry, t) > 0
        if kind is Kind.NOT:
            return not h(c[0], t)
        if kind is Kind.AND:
            return all(h(x, t) for x in c)
        if kind is Kind.OR:
            return any(h(x, t) for x in c)
        if kind is Kind.EVENTUALLY:
            return any(h(c[0], k) for k in range(t, n))
        if kind is Kind.ALWAYS:
            return all(h(c[0], k) for k in range(t, n))
        if kind is Kind.UNTIL:
            return any(h(c[1], k) and all(h(c[0], j) for j in range(t, k)) for k in range(t, n))
        if kind is Kind.THEN:
            return any(h(c[1], k) and any(h(c[0], j) for j in range(t, k)) for k in range(t + 1, n))
        if kind is Kind.IMPLIES:
            return (not h(c[0], t)) or h(c[1], t)
        raise AssertionError(kind)

    return h(formula, 0)


def weighted_conj_oracle(weights, values):
    """Weighted conjunction straight from its definition, one operand at a time"""
    w = np.asarray(weights, dtype=float)
    w_bar = w / w.sum()
    terms = [((0.5 - wb) * np.sign(x) + 0.5) * x for wb, x in zip(w_bar, values)]
    return float(min(terms))


def weighted_disj_oracle(weights, values):
    return -weighted_conj_oracle(weights, [-x for x in values])


def robustness_oracle(formula, states, registry, rho_max=1e6, plain=False):
    """
    Exact robustness by suffix enumeration.

    plain=True replaces the weighted aggregators with min/max, giving the
    unweighted robustness.
    """
    n = len(states)
    memo = {}

    def r(f, t):
        key = (f, t)
        if key not in memo:
            memo[key] = _rob(f, t)
        return memo[key]

    def _rob(f, t):
        kind = f.kind
        c = f.children
        if kind is Kind.TRUE:
            return rho_max
        if kind is Kind.PREDICATE:
            return _atom_value(f, states, registry, t)
        if kind is Kind.NOT:
            return -r(c[0], t)
        if kind is Kind.AND:
            values = [r(x, t) for x in c]
            return min(values) if plain else weighted_conj_oracle(f.weights, values)
        if kind is Kind.OR:
            values = [r(x, t) for x in c]
            return max(values) if plain else weighted_disj_oracle(f.weights, values)
        if kind is Kind.EVENTUALLY:
            return max(r(c[0], k) for k in range(t, n))
        if kind is Kind.ALWAYS:
            return min(r(c[0], k) for k in range(t, n))
        if kind is Kind.UNTIL:
            return max(min([r(c[1], k)] + [r(c[0], j) for j in range(t, k)]) for k in range(t, n))
        if kind is Kind.THEN:
            options = [min(r(c[1], k), max(r(c[0], j) for j in range(t, k))) for k in range(t + 1, n)]
            return max(options) if options else -rho_max
        if kind is Kind.IMPLIES:
            return max(-r(c[0], t), r(c[1], t))
        raise AssertionError(kind)

    return r(formula, 0)


def random_formula(rng, max_depth, atoms=ATOMS, nnf=False, weighted=True):
    """Random formula of depth <= max_depth; nnf=True keeps negation on atoms only"""
    if max_depth == 0 or rng.random() < 0.2:
        atom = atoms[rng.integers(len(atoms))]
        if nnf and rng.random() < 0.3:
            return negate(atom)
        return atom
    kinds = ["and", "or", "F", "G", "U", "T"] + ([] if nnf else ["not", "->"])
    kind = kinds[rng.integers(len(kinds))]
    sub = lambda: random_formula(rng, max_depth - 1, atoms, nnf, weighted)
    if kind == "not":
        return negate(sub())
    if kind in ("and", "or"):
        n = int(rng.integers(2, 4))
        children = [sub() for _ in range(n)]
        weights = rng.integers(1, 4, size=n).tolist() if weighted else None
        return conj(children, weights) if kind == "and" else disj(children, weights)
    if kind == "F":
        return eventually(sub())
    if kind == "G":
        return always(sub())
    if kind == "U":
        return until(sub(), sub())
    if kind == "T":
        return then(sub(), sub())
    return implies(sub(), sub())


def polyline(points, per_segment=40):
    """Densely sampled path through every given vertex"""
    points = np.asarray(points, dtype=float)
    pieces = [points[:1]]
    for a, b in zip(points[:-1], points[1:]):
        s = np.linspace(0.0, 1.0, per_segment + 1)[1:, None]
        pieces.append(a + s * (b - a))
    return np.vstack(pieces)


__all__ = [
    "ATOMS",
    "STATE_GRID",
    "holds",
    "robustness_oracle",
    "weighted_conj_oracle",
    "weighted_disj_oracle",
    "random_formula",
    "polyline",
]
