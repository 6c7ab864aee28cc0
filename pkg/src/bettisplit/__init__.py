"""Betti numbers of squarefree monomial ideals from posets and simplicial complexes."""

__version__ = "0.1.0"
