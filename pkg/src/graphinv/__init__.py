"""Workbench for the invariant ring of graphs under vertex permutations.

Orbit-sum invariants, graded quotient algebras (simple graphs, forests),
Polya/Hilbert counting, exact sparse linear algebra, and the incidence-matrix
tests for algebraic reconstructibility of trees.
"""

__version__ = "0.1.0"
