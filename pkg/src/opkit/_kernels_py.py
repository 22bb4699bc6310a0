"""Pure-Python reference kernels.

These are the hot inner loops of the package: sparse term-map arithmetic
(dicts mapping exponent tuples to nonzero Fractions) and the integer row
operation used by fraction-free elimination.  ``opkit._accel`` provides a
compiled drop-in replacement; ``opkit.kernels`` picks one at import time.

All polynomial kernels keep the canonical-form invariant: no zero
coefficient is ever stored.
"""

from __future__ import annotations

from fractions import Fraction

IMPLEMENTATION = "pure-python"

_ZERO = Fraction(0)


def poly_add(a: dict, b: dict) -> dict:
    """Return the term-map sum a + b."""
    out = dict(a)
    for exp, coeff in b.items():
        new = out.get(exp, _ZERO) + coeff
        if new:
            out[exp] = new
        else:
            out.pop(exp, None)
    return out


def poly_sub(a: dict, b: dict) -> dict:
    """Return the term-map difference a - b."""
    out = dict(a)
    for exp, coeff in b.items():
        new = out.get(exp, _ZERO) - coeff
        if new:
            out[exp] = new
        else:
            out.pop(exp, None)
    return out


def poly_neg(a: dict) -> dict:
    """Return -a."""
    return {exp: -coeff for exp, coeff in a.items()}


def poly_scale(a: dict, coeff: Fraction) -> dict:
    """Return coeff * a."""
    if not coeff:
        return {}
    return {exp: c * coeff for exp, c in a.items()}


def poly_mul(a: dict, b: dict) -> dict:
    """Return the distributed product a * b."""
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            exp = tuple(x + y for x, y in zip(ea, eb))
            new = out.get(exp, _ZERO) + ca * cb
            if new:
                out[exp] = new
            else:
                out.pop(exp, None)
    return out


def poly_term_mul(a: dict, coeff: Fraction, shift: tuple) -> dict:
    """Return (coeff * x^shift) * a, the single-term product."""
    if not coeff:
        return {}
    return {tuple(x + y for x, y in zip(exp, shift)): c * coeff
            for exp, c in a.items()}


def poly_isubmul(acc: dict, coeff: Fraction, shift: tuple, q: dict) -> None:
    """In place: acc -= (coeff * x^shift) * q.

    This is the single reduction step of multivariate division and of
    Buchberger's algorithm.
    """
    for exp, c in q.items():
        key = tuple(x + y for x, y in zip(exp, shift))
        new = acc.get(key, _ZERO) - coeff * c
        if new:
            acc[key] = new
        else:
            acc.pop(key, None)


def mat_mul(a: list, b: list) -> list:
    """Multiply two dense Fraction matrices given as lists of row lists."""
    cols_b = len(b[0])
    bt = [[row[j] for row in b] for j in range(cols_b)]
    out = []
    for row in a:
        out_row = []
        for col in bt:
            acc = _ZERO
            for x, y in zip(row, col):
                if x and y:
                    acc += x * y
            out_row.append(acc)
        out.append(out_row)
    return out


def mat_apply(a: list, v: list) -> list:
    """Apply a dense Fraction matrix to a vector."""
    out = []
    for row in a:
        acc = _ZERO
        for x, y in zip(row, v):
            if x and y:
                acc += x * y
        out.append(acc)
    return out


def row_combine_int(row: list, a: int, prow: list, b: int,
                    divisor: int, start: int) -> list:
    """Return the fraction-free elimination update of an integer row.

    out[j] = row[j] for j < start, else (a*row[j] - b*prow[j]) // divisor.
    The division is exact by construction of the elimination.
    """
    out = list(row)
    for j in range(start, len(row)):
        out[j] = (a * row[j] - b * prow[j]) // divisor
    return out
