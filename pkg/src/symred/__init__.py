"""
symred: reduction by invariants for symmetric Hamiltonian systems.

Exact polynomial core, model verification, induced Poisson structures, semi-algebraic
reduced spaces, rank stratification and relative equilibria.
"""

__all__ = ["__version__"]

__version__ = "0.1.0"
