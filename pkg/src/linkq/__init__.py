"""Exact commutative-algebra toolkit for the link-q-compressed property of
homogeneous polynomials in k[x, y, z] over odd prime fields: colon ideals
against Frobenius powers, Pfaffian-based free resolutions, and the associated
invariants (generator profiles, socle, Hilbert-Kunz values, regularity).
"""

from .primefield import Fp, FrobeniusPower, PrimeField, is_prime
from .poly import ParseError, Poly, degree_basis, degree_dim, grevlex_key, parse, quadric, zq_expansion
from .ringmat import (
    RingMatrix,
    block_matrix,
    classical_adjoint,
    det,
    last_three_pfaffian_identity,
    maximal_order_pfaffians,
    pfaffian,
    pfaffian_adjoint,
    pfaffian_ell,
)

__all__ = [
    "Fp",
    "FrobeniusPower",
    "PrimeField",
    "is_prime",
    "ParseError",
    "Poly",
    "degree_basis",
    "degree_dim",
    "grevlex_key",
    "parse",
    "quadric",
    "zq_expansion",
    "RingMatrix",
    "block_matrix",
    "classical_adjoint",
    "det",
    "last_three_pfaffian_identity",
    "maximal_order_pfaffians",
    "pfaffian",
    "pfaffian_adjoint",
    "pfaffian_ell",
]

__version__ = "0.1.0"
