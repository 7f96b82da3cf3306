"""
Constants for wTLTL formulas: node kinds, operator spellings and smoothing defaults
"""

from enum import Enum


class Kind(str, Enum):
    TRUE = "true"
    PREDICATE = "predicate"
    NOT = "not"
    AND = "and"
    OR = "or"
    EVENTUALLY = "eventually"
    ALWAYS = "always"
    UNTIL = "until"
    THEN = "then"
    IMPLIES = "implies"


# ============================================================================
# ARITY RULES
# ============================================================================

UNARY_KINDS = {Kind.NOT, Kind.EVENTUALLY, Kind.ALWAYS}
BINARY_KINDS = {Kind.UNTIL, Kind.THEN, Kind.IMPLIES}
NARY_KINDS = {Kind.AND, Kind.OR}
LEAF_KINDS = {Kind.TRUE, Kind.PREDICATE}
TEMPORAL_KINDS = {Kind.EVENTUALLY, Kind.ALWAYS, Kind.UNTIL, Kind.THEN}


# ============================================================================
# CONCRETE SYNTAX
# ============================================================================

PREFIX_SYMBOLS = {
    Kind.NOT: "!",
    Kind.EVENTUALLY: "F",
    Kind.ALWAYS: "G",
}

INFIX_SYMBOLS = {
    Kind.AND: "&&",
    Kind.OR: "||",
    Kind.UNTIL: "U",
    Kind.THEN: "T",
    Kind.IMPLIES: "->",
}

COMPARISONS = {"<", ">"}


# ============================================================================
# SMOOTHING DEFAULTS
# ============================================================================

DEFAULT_K1 = 100.0
DEFAULT_K2 = 100.0

# Robustness of the constant `true`. Must dominate any desk-scale margin
# while staying finite for the smoothing arithmetic.
DEFAULT_RHO_MAX = 1.0e6
