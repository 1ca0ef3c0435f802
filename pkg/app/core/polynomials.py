"""Characteristic polynomials and the coprime splitting used by Fitting decompositions.

Polynomials are sympy ``Poly`` objects over ``field.poly_domain`` in the
variable ``X``; they never leave the field they were built from.
"""

import logging
from fractions import Fraction
from typing import List

import numpy as np
import sympy
from sympy import Poly

from app.core.field import Field
from app.core.linalg import LinalgError, matmul

logger = logging.getLogger(__name__)

X = sympy.Symbol("x")


def charpoly(field: Field, a: np.ndarray) -> Poly:
    rows, cols = a.shape
    if rows != cols:
        raise LinalgError(f"Characteristic polynomial needs a square matrix, got {a.shape}")
    if rows == 0:
        return Poly([1], X, domain=field.poly_domain)
    mat = sympy.Matrix(rows, cols, [field.to_sympy(v) for v in a.flat])
    coeffs = mat.charpoly(X).all_coeffs()
    return Poly(coeffs, X, domain=field.poly_domain)


def squarefree_part(p: Poly) -> Poly:
    if p.degree() <= 0:
        return Poly([1], X, domain=p.domain)
    return p.sqf_part().monic()


def _root_key(field: Field, r):
    return Fraction(r) if field.is_rational else int(r) % field.p


def rational_roots(field: Field, p: Poly) -> list:
    """Distinct roots of ``p`` lying in the ground field, sorted."""
    if p.degree() <= 0:
        return []
    roots = []
    for factor, _ in p.factor_list()[1]:
        if factor.degree() == 1:
            lead, const = factor.all_coeffs()
            roots.append(-field.convert(const) / field.convert(lead))
    return sorted(set(roots), key=lambda r: _root_key(field, r))


def coprime_split(field: Field, p: Poly) -> List[Poly]:
    """Pairwise coprime monic factors whose product is monic(p).

    Built from the squarefree decomposition; linear factors of each squarefree
    part are peeled off, the remainder is kept whole.
    """
    if p.degree() <= 0:
        return []
    p = p.monic()
    pieces = []
    for part, multiplicity in p.sqf_list()[1]:
        rest = part.monic()
        for root in rational_roots(field, rest):
            linear = Poly([1, -field.to_sympy(root)], X, domain=p.domain)
            pieces.append(linear ** multiplicity)
            rest = rest.exquo(linear)
        if rest.degree() > 0:
            pieces.append(rest ** multiplicity)
    return pieces


def evaluate_at(field: Field, p: Poly, a: np.ndarray) -> np.ndarray:
    """p(a) by Horner's rule."""
    n = a.shape[0]
    identity = field.eye(n)
    result = field.zeros((n, n))
    for c in p.all_coeffs():
        result = matmul(field, result, a) + identity * field.convert(c)
    return result
