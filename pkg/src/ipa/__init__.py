"""Indexed predicate abstraction: universally quantified invariants for
infinite-state transition systems."""

import sys

# expression DAGs (ITE chains, decision-diagram formulas) recurse deeply
if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)

__version__ = "0.1.0"
