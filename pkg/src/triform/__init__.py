"""Exact verification of the (F_3)^4 quadratic-module computation.

The package reconstructs, in exact arithmetic, the finite computations
around a rank-8 lattice with a fixed-point-free order-3 isometry: its
discriminant form (F_3)^4, the attached Weil representation of SL(2, F_3),
the character decomposition and the distinguished 5-dimensional isotypic
subspace, obstruction-space dimensions, the vector-valued Eisenstein
series, and the weights of the resulting product expansions.
"""

__version__ = "0.1.0"
