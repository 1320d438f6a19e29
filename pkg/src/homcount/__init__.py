"""homcount: exact counting of homomorphism invariants #H and #Q for
simplicial complexes, surface groups and Heegaard-presented 3-manifolds,
with a count-preserving reduction pipeline from circuit satisfiability to
zombie-circuit satisfiability."""

__version__ = "0.1.0"
