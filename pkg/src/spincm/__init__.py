"""Numerical lab for spin Calogero-Moser and Ruijsenaars-Schneider systems.

Subpackages: matrix-algebra primitives (lie_core), spectral kernels and Lax
matrices (rmatrix), numeric Poisson brackets (poisson), the two flows
(cm_dynamics, rs_dynamics), conserved-quantity extraction (integrals), the
affine Toda soliton correspondence (toda), and a command-line surface (cli).
"""

__version__ = "0.1.0"

from . import cm_dynamics, integrals, lie_core, poisson, rmatrix, rs_dynamics, toda  # noqa: F401
