# cython: language_level=3
"""Compiled kernels, a drop-in replacement for opkit._kernels_py.

The polynomial kernels work on dicts mapping exponent tuples to Fraction
coefficients, exactly like the pure-Python module.  Internally they run the
rational arithmetic on integer numerator/denominator pairs and only build
Fraction objects for the surviving entries, which is where the speedup
comes from: Fraction's operator dispatch and per-operation normalization
dominate the pure-Python inner loops.
"""

from fractions import Fraction
from math import gcd

IMPLEMENTATION = "cython"

cdef object _ZERO = Fraction(0)


cdef inline tuple _tuple_add(tuple a, tuple b):
    cdef Py_ssize_t n = len(a)
    cdef list out = [None] * n
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = a[i] + b[i]
    return tuple(out)


def poly_add(dict a, dict b):
    """Return the term-map sum a + b."""
    cdef dict out = dict(a)
    cdef object exp, coeff, cur, new
    for exp, coeff in b.items():
        cur = out.get(exp)
        if cur is None:
            out[exp] = coeff
        else:
            new = cur + coeff
            if new:
                out[exp] = new
            else:
                del out[exp]
    return out


def poly_sub(dict a, dict b):
    """Return the term-map difference a - b."""
    cdef dict out = dict(a)
    cdef object exp, coeff, cur, new
    for exp, coeff in b.items():
        cur = out.get(exp)
        if cur is None:
            out[exp] = -coeff
        else:
            new = cur - coeff
            if new:
                out[exp] = new
            else:
                del out[exp]
    return out


def poly_neg(dict a):
    """Return -a."""
    cdef dict out = {}
    cdef object exp, coeff
    for exp, coeff in a.items():
        out[exp] = -coeff
    return out


def poly_scale(dict a, coeff):
    """Return coeff * a."""
    cdef dict out = {}
    cdef object exp, c
    if not coeff:
        return out
    for exp, c in a.items():
        out[exp] = c * coeff
    return out


def poly_mul(dict a, dict b):
    """Return the distributed product a * b.

    Accumulates numerator/denominator pairs and normalizes once per
    surviving output term.
    """
    cdef dict acc = {}
    cdef list bitems = []
    cdef object exp, coeff, ea, ca, cur
    cdef object na, da, nb, db, n, d, n0, d0, g
    for exp, coeff in b.items():
        bitems.append((exp, coeff.numerator, coeff.denominator))
    for ea, ca in a.items():
        na = ca.numerator
        da = ca.denominator
        for exp, nb, db in bitems:
            key = _tuple_add(ea, exp)
            n = na * nb
            d = da * db
            cur = acc.get(key)
            if cur is None:
                acc[key] = [n, d]
            else:
                n0 = cur[0]
                d0 = cur[1]
                if d0 == d:
                    cur[0] = n0 + n
                else:
                    g = gcd(d0, d)
                    cur[0] = n0 * (d // g) + n * (d0 // g)
                    cur[1] = d0 * (d // g)
    cdef dict out = {}
    for key, cur in acc.items():
        if cur[0]:
            out[key] = Fraction(cur[0], cur[1])
    return out


def poly_term_mul(dict a, coeff, tuple shift):
    """Return (coeff * x^shift) * a, the single-term product."""
    cdef dict out = {}
    cdef object exp, c
    if not coeff:
        return out
    for exp, c in a.items():
        out[_tuple_add(exp, shift)] = c * coeff
    return out


def poly_isubmul(dict acc, coeff, tuple shift, dict q):
    """In place: acc -= (coeff * x^shift) * q."""
    cdef object cn = coeff.numerator
    cdef object cd = coeff.denominator
    cdef object exp, c, old, n, d, nn
    for exp, c in q.items():
        key = _tuple_add(exp, shift)
        n = cn * c.numerator
        d = cd * c.denominator
        old = acc.get(key)
        if old is None:
            acc[key] = Fraction(-n, d)
        else:
            nn = old.numerator * d - n * old.denominator
            if nn:
                acc[key] = Fraction(nn, old.denominator * d)
            else:
                del acc[key]


cdef inline object _dot(list u, list v):
    cdef object n0 = 0
    cdef object d0 = 1
    cdef object x, y, n, d, g
    cdef Py_ssize_t i, m = len(u)
    for i in range(m):
        x = u[i]
        y = v[i]
        if x and y:
            n = x.numerator * y.numerator
            d = x.denominator * y.denominator
            if d0 == d:
                n0 = n0 + n
            else:
                g = gcd(d0, d)
                n0 = n0 * (d // g) + n * (d0 // g)
                d0 = d0 * (d // g)
    return Fraction(n0, d0)


def mat_mul(list a, list b):
    """Multiply two dense Fraction matrices given as lists of row lists."""
    cdef Py_ssize_t cols_b = len(b[0])
    cdef Py_ssize_t j
    cdef list bt = []
    cdef list col, row, out, out_row
    for j in range(cols_b):
        col = [r[j] for r in b]
        bt.append(col)
    out = []
    for row in a:
        out_row = []
        for j in range(cols_b):
            out_row.append(_dot(row, <list>bt[j]))
        out.append(out_row)
    return out


def mat_apply(list a, list v):
    """Apply a dense Fraction matrix to a vector."""
    cdef list vv = list(v)
    cdef list out = []
    cdef list row
    for row in a:
        out.append(_dot(row, vv))
    return out


def row_combine_int(list row, a, list prow, b, divisor, Py_ssize_t start):
    """Fraction-free elimination update of an integer row (exact division)."""
    cdef list out = list(row)
    cdef Py_ssize_t j, n = len(row)
    for j in range(start, n):
        out[j] = (a * row[j] - b * prow[j]) // divisor
    return out
