"""Deterministic higher-order pushdown automata, run classification, and
an intersection-type view of their stacks."""

__version__ = "0.1.0"
