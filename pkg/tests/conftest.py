"""Shared test helpers: random generators and a sympy bridge for oracles."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from opkit.poly import Polynomial


def random_polynomial(rng: random.Random, nvars: int, max_terms: int = 5,
                      max_exp: int = 3, coeff_bound: int = 6,
                      allow_zero: bool = True) -> Polynomial:
    terms = {}
    for _ in range(rng.randint(0 if allow_zero else 1, max_terms)):
        exp = tuple(rng.randint(0, max_exp) for _ in range(nvars))
        num = rng.randint(-coeff_bound, coeff_bound)
        den = rng.randint(1, 4)
        terms[exp] = terms.get(exp, Fraction(0)) + Fraction(num, den)
    p = Polynomial(terms, nvars)
    if not allow_zero and p.is_zero():
        return Polynomial.one(nvars)
    return p


def random_vector(rng: random.Random, n: int, bound: int = 9):
    return tuple(Fraction(rng.randint(-bound, bound)) for _ in range(n))


def to_sympy(p: Polynomial, names):
    """Convert to a sympy expression; used only as an independent oracle."""
    import sympy

    symbols = sympy.symbols(names)
    if len(names) == 1:
        symbols = (symbols,)
    expr = sympy.Integer(0)
    for exp, coeff in p.terms.items():
        term = sympy.Rational(coeff.numerator, coeff.denominator)
        for s, e in zip(symbols, exp):
            term *= s ** e
        expr += term
    return sympy.expand(expr)


def invert(m):
    """Exact inverse via column solves; None when singular."""
    from opkit.backend import Matrix, solve_affine

    n = m.rows
    cols = []
    for j in range(n):
        e = [Fraction(1) if i == j else Fraction(0) for i in range(n)]
        sol = solve_affine(m, e)
        if sol.is_empty() or sol.kernel_vectors:
            return None
        cols.append(sol.particular)
    return Matrix([[cols[j][i] for j in range(n)] for i in range(n)])


def conjugated_diagonal(rng: random.Random, eigenvalues):
    """A random exact matrix similar to diag(eigenvalues)."""
    from opkit.backend import Matrix

    n = len(eigenvalues)
    while True:
        v = Matrix([[Fraction(rng.randint(-3, 3)) for _ in range(n)]
                    for _ in range(n)])
        v_inv = invert(v)
        if v_inv is not None:
            return v * Matrix.diagonal(eigenvalues) * v_inv


def distinct_fractions(rng: random.Random, count: int, bound: int = 8):
    values = set()
    while len(values) < count:
        values.add(Fraction(rng.randint(-bound, bound), rng.randint(1, 3)))
    return sorted(values)


@pytest.fixture
def rng():
    return random.Random(20240817)
