"""Finite quandles, quandle (co)homology, cocycle invariants of knot diagrams and
abelian extensions of quandles."""

__version__ = "0.1.0"
