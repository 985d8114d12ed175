"""Hierarchical knot-tying planner: symbolic topology, rope dynamics, learned primitives."""

__version__ = "0.1.0"
