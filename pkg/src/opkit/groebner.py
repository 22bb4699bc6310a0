"""Certified Buchberger algorithm over Q[x].

Every basis element carries explicit cofactors over the input generators,
maintained through S-polynomial formation and reduction, so membership of 1
comes with a machine-checkable Bezout certificate instead of a bare yes/no.

Normal selection strategy (smallest lcm total degree, ties by pair creation
index), first-applicable-divisor reduction, monic normalization of new
elements: the run is fully deterministic for a fixed input and order.
Coefficient growth is uncontrolled in exact arithmetic, so a per-polynomial
term-count cap (default 100000, override with OPKIT_TERM_CAP) aborts
runaway computations.
"""

from __future__ import annotations

import heapq
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import kernels
from .errors import InputError, ResourceLimitError, VerificationError
from .poly import DEFAULT_ORDER, MonomialOrder, Polynomial

DEFAULT_TERM_CAP = 100_000
TERM_CAP_ENV = "OPKIT_TERM_CAP"


def resolve_term_cap(term_cap: Optional[int] = None) -> int:
    if term_cap is not None:
        return term_cap
    env = os.environ.get(TERM_CAP_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"{TERM_CAP_ENV} must be an integer, got {env!r}") from None
    return DEFAULT_TERM_CAP


@dataclass(frozen=True)
class CertifiedPoly:
    """A polynomial together with cofactors over the input generators.

    Invariant: value == sum(cofactors[i] * generators[i]).
    """

    value: Polynomial
    cofactors: tuple[Polynomial, ...]

    def combination_holds(self, generators: Sequence[Polynomial]) -> bool:
        acc = Polynomial.zero(self.value.variable_count)
        for cof, gen in zip(self.cofactors, generators):
            acc = acc + cof * gen
        return acc == self.value


@dataclass(frozen=True)
class CertifiedBasis:
    generators: tuple[Polynomial, ...]
    basis: tuple[CertifiedPoly, ...]
    order: MonomialOrder


@dataclass(frozen=True)
class BezoutCertificate:
    """Cofactors expressing 1 as a combination of the generators."""

    cofactors: tuple[Polynomial, ...]

    def verify(self, generators: Sequence[Polynomial]) -> bool:
        nvars = generators[0].variable_count
        acc = Polynomial.zero(nvars)
        for cof, gen in zip(self.cofactors, generators):
            acc = acc + cof * gen
        return acc == Polynomial.one(nvars)


@dataclass(frozen=True)
class Reduction:
    """Result of certified reduction: p = sum(cofactors[i]*g_i) + remainder."""

    remainder: Polynomial
    cofactors: tuple[Polynomial, ...]


def s_polynomial(p: Polynomial, q: Polynomial,
                 order: MonomialOrder = DEFAULT_ORDER) -> Polynomial:
    """S(p, q) = (lcm/lt(p)) * p - (lcm/lt(q)) * q for leading-monomial lcm."""
    if p.is_zero() or q.is_zero():
        raise InputError("S-polynomial of a zero polynomial is undefined")
    pexp, pc = p.leading_term(order)
    qexp, qc = q.leading_term(order)
    lcm = tuple(max(a, b) for a, b in zip(pexp, qexp))
    pshift = tuple(l - a for l, a in zip(lcm, pexp))
    qshift = tuple(l - b for l, b in zip(lcm, qexp))
    left = Polynomial._wrap(
        kernels.poly_term_mul(p._terms, Fraction(1) / pc, pshift), p.variable_count)
    right = Polynomial._wrap(
        kernels.poly_term_mul(q._terms, Fraction(1) / qc, qshift), q.variable_count)
    return left - right


def _check_cap(terms: dict, cap: int) -> None:
    if len(terms) > cap:
        raise ResourceLimitError(
            f"term count {len(terms)} exceeds cap {cap}; "
            f"raise {TERM_CAP_ENV} to continue")


class _Tracked:
    """Mutable working pair (value terms, cofactor terms) during the run."""

    __slots__ = ("terms", "cofs")

    def __init__(self, terms: dict, cofs: list[dict]):
        self.terms = terms
        self.cofs = cofs


def _reduce(work: _Tracked, basis: list["_BasisElem"], order: MonomialOrder,
            cap: int) -> tuple[dict, list[dict]]:
    """Full normal form of work against basis, updating cofactors in place."""
    key = order.sort_key
    terms = work.terms
    remainder: dict = {}
    while terms:
        exp = max(terms, key=key)
        for elem in basis:
            lexp = elem.lead_exp
            if all(e >= le for e, le in zip(exp, lexp)):
                coeff = terms[exp]  # basis elements are monic
                shift = tuple(e - le for e, le in zip(exp, lexp))
                kernels.poly_isubmul(terms, coeff, shift, elem.terms)
                _check_cap(terms, cap)
                for wc, bc in zip(work.cofs, elem.cofs):
                    kernels.poly_isubmul(wc, coeff, shift, bc)
                    _check_cap(wc, cap)
                break
        else:
            remainder[exp] = terms.pop(exp)
    return remainder, work.cofs


class _BasisElem:
    __slots__ = ("terms", "cofs", "lead_exp")

    def __init__(self, terms: dict, cofs: list[dict], lead_exp: tuple):
        self.terms = terms
        self.cofs = cofs
        self.lead_exp = lead_exp


def _run_buchberger(generators: Sequence[Polynomial], order: MonomialOrder,
                    cap: int, stop_on_unit: bool) -> list[_BasisElem]:
    gens = list(generators)
    if not gens:
        raise InputError("need at least one generator")
    nvars = gens[0].variable_count
    for g in gens:
        if g.variable_count != nvars:
            raise InputError("generators must share a variable count")
    if all(g.is_zero() for g in gens):
        raise InputError("all generators are zero")
    ngens = len(gens)
    key = order.sort_key

    basis: list[_BasisElem] = []
    pairs: list[tuple[int, int, int, int]] = []  # (lcm degree, index, i, j)
    counter = 0

    def push_elem(terms: dict, cofs: list[dict]) -> bool:
        """Monic-normalize and append; True if the element is a nonzero constant."""
        nonlocal counter
        lead = max(terms, key=key)
        lc = terms[lead]
        if lc != 1:
            inv = Fraction(1) / lc
            terms = {e: c * inv for e, c in terms.items()}
            cofs = [{e: c * inv for e, c in cof.items()} for cof in cofs]
        new = _BasisElem(terms, cofs, lead)
        m = len(basis)
        for i in range(m):
            lcm_deg = sum(max(a, b) for a, b in zip(basis[i].lead_exp, lead))
            heapq.heappush(pairs, (lcm_deg, counter, i, m))
            counter += 1
        basis.append(new)
        return not any(lead)

    for i, g in enumerate(gens):
        if g.is_zero():
            continue
        cofs: list[dict] = [{} for _ in range(ngens)]
        cofs[i] = {(0,) * nvars: Fraction(1)}
        if push_elem(dict(g._terms), cofs) and stop_on_unit:
            return basis

    while pairs:
        _, _, i, j = heapq.heappop(pairs)
        ei, ej = basis[i], basis[j]
        lcm = tuple(max(a, b) for a, b in zip(ei.lead_exp, ej.lead_exp))
        # Product criterion: coprime leading monomials reduce to zero.
        if all(a == 0 or b == 0 for a, b in zip(ei.lead_exp, ej.lead_exp)):
            continue
        ishift = tuple(l - a for l, a in zip(lcm, ei.lead_exp))
        jshift = tuple(l - b for l, b in zip(lcm, ej.lead_exp))
        sterms = kernels.poly_term_mul(ei.terms, Fraction(1), ishift)
        kernels.poly_isubmul(sterms, Fraction(1), jshift, ej.terms)
        scofs = []
        for ci, cj in zip(ei.cofs, ej.cofs):
            c = kernels.poly_term_mul(ci, Fraction(1), ishift)
            kernels.poly_isubmul(c, Fraction(1), jshift, cj)
            scofs.append(c)
        remainder, rcofs = _reduce(_Tracked(sterms, scofs), basis, order, cap)
        if remainder:
            if push_elem(remainder, rcofs) and stop_on_unit:
                return basis
    return basis


def _to_certified(elem: _BasisElem, nvars: int) -> CertifiedPoly:
    return CertifiedPoly(
        Polynomial._wrap(dict(elem.terms), nvars),
        tuple(Polynomial._wrap(dict(c), nvars) for c in elem.cofs))


def buchberger_certified(
    generators: Sequence[Polynomial],
    order: MonomialOrder = DEFAULT_ORDER,
    term_cap: Optional[int] = None,
) -> CertifiedBasis:
    """Compute a Groebner basis whose elements carry exact cofactors."""
    cap = resolve_term_cap(term_cap)
    basis = _run_buchberger(generators, order, cap, stop_on_unit=False)
    nvars = generators[0].variable_count
    return CertifiedBasis(
        tuple(generators),
        tuple(_to_certified(e, nvars) for e in basis),
        order)


def contains_one(
    generators: Sequence[Polynomial],
    order: MonomialOrder = DEFAULT_ORDER,
    term_cap: Optional[int] = None,
) -> Optional[BezoutCertificate]:
    """Decide 1 in <generators> over Q with an explicit certificate.

    Runs Buchberger until a nonzero constant enters the basis (then the
    tracked cofactors, rescaled, are the certificate) or until the basis is
    complete (then 1 is not a member).  The returned certificate is checked
    exactly before being handed out, never trusted.
    """
    cap = resolve_term_cap(term_cap)
    basis = _run_buchberger(generators, order, cap, stop_on_unit=True)
    nvars = generators[0].variable_count
    for elem in basis:
        if not any(elem.lead_exp) and elem.terms:
            const = elem.terms[elem.lead_exp]
            inv = Fraction(1) / const
            cofactors = tuple(
                Polynomial._wrap({e: c * inv for e, c in cof.items()}, nvars)
                for cof in elem.cofs)
            cert = BezoutCertificate(cofactors)
            if not cert.verify(generators):
                raise VerificationError(
                    "internal error: tracked Bezout certificate failed its exact check")
            return cert
    return None


def reduce_certified(p: Polynomial, basis: CertifiedBasis,
                     term_cap: Optional[int] = None) -> Reduction:
    """Certified normal form: p = sum(cofactors[i]*g_i) + remainder.

    The remainder is 0 exactly when p lies in the ideal of the generators.
    """
    cap = resolve_term_cap(term_cap)
    nvars = p.variable_count
    if basis.generators and basis.generators[0].variable_count != nvars:
        raise InputError("variable-count mismatch with the basis")
    elems = [
        _BasisElem(dict(cp.value._terms),
                   [dict(c._terms) for c in cp.cofactors],
                   cp.value.leading_term(basis.order)[0])
        for cp in basis.basis
    ]
    ngens = len(basis.generators)
    work = _Tracked(dict(p._terms), [{} for _ in range(ngens)])
    remainder, cofs = _reduce(work, elems, basis.order, cap)
    # _reduce tracked p - sum(q_b * b); the generator cofactors accumulate
    # negatively, so flip the sign.
    cofactors = tuple(
        Polynomial._wrap(kernels.poly_neg(c), nvars) for c in cofs)
    return Reduction(Polynomial._wrap(remainder, nvars), cofactors)


def inter_reduced(basis: CertifiedBasis) -> tuple[Polynomial, ...]:
    """Reduced Groebner basis of the same ideal, without cofactors.

    Optional post-step; certificates always refer to the tracked basis.
    """
    from .poly import divide_multi

    order = basis.order
    polys = [cp.value for cp in basis.basis]
    leads = [p.leading_term(order)[0] for p in polys]
    # Minimalize: drop elements whose leading monomial is divisible by the
    # leading monomial of another kept element (earlier index wins ties).
    minimal: list[Polynomial] = []
    for i, p in enumerate(polys):
        redundant = False
        for j, other in enumerate(leads):
            if j == i:
                continue
            if all(a >= b for a, b in zip(leads[i], other)):
                if leads[i] != other or j < i:
                    redundant = True
                    break
        if not redundant:
            minimal.append(p)
    reduced: list[Polynomial] = []
    for i, p in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        if others:
            _, r = divide_multi(p, others, order)
        else:
            r = p
        if not r.is_zero():
            lc = r.leading_term(order)[1]
            reduced.append(r.scale(Fraction(1) / lc))
    reduced.sort(key=lambda q: order.sort_key(q.leading_term(order)[0]))
    return tuple(reduced)
