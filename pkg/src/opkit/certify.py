"""Construction and exact verification of decomposition certificates.

A certificate proves an identity of the form

    1 = sum over J in alpha of Q_J * P^J

where P^J multiplies the factors NOT indexed by J; a dual certificate
proves, for every J in its family, 1 = sum over j in J of Q_{J,j} * P_j.
Both directions of the conversion between the two kinds are constructive
and every constructor verifies its output exactly before returning it.
Cofactors are not unique; callers must compare certificates by
verification, never by literal equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (InputError, MembershipError, ResourceLimitError,
                     VerificationError)
from .groebner import contains_one, resolve_term_cap
from .planner import IndexSet, SetSystem, max_elements
from .poly import DEFAULT_ORDER, MonomialOrder, Polynomial, product


@dataclass(frozen=True)
class Certificate:
    """Cofactors Q_J proving 1 = sum_J Q_J * P^J over the family alpha."""

    alpha: SetSystem
    cofactors: Mapping[IndexSet, Polynomial]

    def sorted_items(self) -> list[tuple[IndexSet, Polynomial]]:
        return sorted(self.cofactors.items(), key=lambda kv: sorted(kv[0]))


@dataclass(frozen=True)
class DualCertificate:
    """Per-J cofactors Q_{J,j} proving 1 = sum_{j in J} Q_{J,j} * P_j."""

    beta: SetSystem
    cofactors: Mapping[IndexSet, Mapping[int, Polynomial]]

    def sorted_items(self) -> list[tuple[IndexSet, list[tuple[int, Polynomial]]]]:
        return sorted(
            ((J, sorted(m.items())) for J, m in self.cofactors.items()),
            key=lambda kv: sorted(kv[0]))


@dataclass(frozen=True)
class UnivariateSpec:
    """Pairwise-distinct shifts l_i defining factors (x + l_i)."""

    lambdas: tuple[Fraction, ...]

    def __post_init__(self):
        if len(set(self.lambdas)) != len(self.lambdas):
            raise InputError("repeated lambda: confluent case unsupported")

    @classmethod
    def of(cls, values: Iterable) -> "UnivariateSpec":
        return cls(tuple(Fraction(v) for v in values))


def _check_factors(factors: Sequence[Polynomial]) -> int:
    if not factors:
        raise InputError("need at least one factor")
    nvars = factors[0].variable_count
    for i, f in enumerate(factors):
        if f.is_zero():
            raise InputError(f"factor {i} is the zero polynomial")
        if f.variable_count != nvars:
            raise InputError("factors must share a variable count")
    return nvars


def factor_product_complement(factors: Sequence[Polynomial], J: IndexSet) -> Polynomial:
    """P^J: the product of the factors whose index is NOT in J."""
    nvars = factors[0].variable_count
    return product((f for i, f in enumerate(factors) if i not in J), nvars)


def factor_product(factors: Sequence[Polynomial], J: Iterable[int]) -> Polynomial:
    """P_J: the product of the factors indexed by J."""
    nvars = factors[0].variable_count
    return product((factors[i] for i in sorted(J)), nvars)


def verify_certificate(cert, factors: Sequence[Polynomial]
                       ) -> tuple[bool, Polynomial]:
    """Exact check of the defining identity; returns (ok, left side minus 1).

    Accepts either certificate kind.  For a dual certificate the residual
    reported is the first nonzero per-J residual (zero when all hold).
    """
    nvars = _check_factors(factors)
    one = Polynomial.one(nvars)
    if isinstance(cert, Certificate):
        acc = Polynomial.zero(nvars)
        for J, q in cert.sorted_items():
            acc = acc + q * factor_product_complement(factors, J)
        residual = acc - one
        return residual.is_zero(), residual
    if isinstance(cert, DualCertificate):
        for J, items in cert.sorted_items():
            acc = Polynomial.zero(nvars)
            for j, q in items:
                acc = acc + q * factors[j]
            residual = acc - one
            if not residual.is_zero():
                return False, residual
        return True, Polynomial.zero(nvars)
    raise InputError(f"unsupported certificate type {type(cert).__name__}")


def _verified(cert, factors, what: str):
    ok, residual = verify_certificate(cert, factors)
    if not ok:
        raise VerificationError(f"internal error: {what} failed its exact check")
    return cert


def univariate_factors(spec: UnivariateSpec) -> list[Polynomial]:
    """The factors (x + l_i) in one variable."""
    x = Polynomial.variable(0, 1)
    return [x + Polynomial.constant(lam, 1) for lam in spec.lambdas]


def univariate_certificate(spec: UnivariateSpec) -> Certificate:
    """Constant cofactors a_i = prod_{j != i} 1/(l_j - l_i) over the singletons.

    This is the partial-fraction decomposition of the unit for a product of
    distinct linear factors; for a single factor it degenerates to 1 = 1.
    """
    lambdas = spec.lambdas
    ell = len(lambdas) - 1
    cofactors: dict[IndexSet, Polynomial] = {}
    for i, li in enumerate(lambdas):
        alpha_i = Fraction(1)
        for j, lj in enumerate(lambdas):
            if j != i:
                alpha_i /= (lj - li)
        cofactors[frozenset((i,))] = Polynomial.constant(alpha_i, 1)
    cert = Certificate(
        SetSystem.of(ell, [[i] for i in range(ell + 1)]), cofactors)
    return _verified(cert, univariate_factors(spec), "univariate certificate")


def dual_certificate(factors: Sequence[Polynomial], beta: SetSystem,
                     order: MonomialOrder = DEFAULT_ORDER) -> DualCertificate:
    """Bezout cofactors for every J in beta, found by certified Buchberger runs.

    Raises MembershipError naming the first J whose factor ideal does not
    contain 1.
    """
    _check_factors(factors)
    if beta.ground != len(factors) - 1:
        raise InputError(
            f"beta ground {beta.ground} does not match {len(factors)} factors")
    cofactors: dict[IndexSet, dict[int, Polynomial]] = {}
    for J in beta:
        indices = sorted(J)
        if not indices:
            raise InputError("the empty set cannot appear in a dual family")
        bez = contains_one([factors[j] for j in indices], order)
        if bez is None:
            raise MembershipError(
                f"1 is not in the ideal of factors {indices}")
        cofactors[J] = {j: q for j, q in zip(indices, bez.cofactors)}
    cert = DualCertificate(beta, cofactors)
    return _verified(cert, factors, "dual certificate")


def dual_to_alpha(dual: DualCertificate, factors: Sequence[Polynomial],
                  term_cap: Optional[int] = None) -> Certificate:
    """Multiply the per-J identities of a dual certificate into one identity.

    Expanding the product over all choice functions c (one index per J)
    gives terms carrying prod_J P_{c(J)}; the factor product of S = image(c)
    divides it, the excess powers fold into the cofactor, and the term lands
    on the index set L \\ S.  Equal index sets are summed, then each
    non-maximal set is absorbed into the first maximal superset (which keeps
    the identity exact and matches working with the Max of the family).
    """
    nvars = _check_factors(factors)
    cap = resolve_term_cap(term_cap)
    ell = len(factors) - 1
    if dual.beta.ground != ell:
        raise InputError("dual certificate ground does not match factor count")
    members = [sorted(J) for J in dual.beta]
    if not members:
        raise InputError("dual certificate has an empty family")

    def capped_mul(a: Polynomial, b: Polynomial) -> Polynomial:
        out = a * b
        if out.term_count() > cap:
            raise ResourceLimitError(
                f"cofactor expansion exceeded the term cap ({cap})")
        return out

    grouped: dict[IndexSet, Polynomial] = {}
    for choice in iter_product(*members):
        q = Polynomial.one(nvars)
        counts: dict[int, int] = {}
        for J, j in zip(members, choice):
            q = capped_mul(q, dual.cofactors[frozenset(J)][j])
            counts[j] = counts.get(j, 0) + 1
        for j, m in counts.items():
            for _ in range(m - 1):
                q = capped_mul(q, factors[j])
        K = frozenset(range(ell + 1)) - frozenset(counts)
        if K in grouped:
            grouped[K] = grouped[K] + q
        else:
            grouped[K] = q
    grouped = {K: q for K, q in grouped.items() if not q.is_zero()}

    maximal = sorted(
        max_elements(SetSystem(ell, frozenset(grouped))).sets,
        key=sorted)
    final: dict[IndexSet, Polynomial] = {}
    for K in sorted(grouped, key=sorted):
        q = grouped[K]
        target = K if K in maximal else next(M for M in maximal if K <= M)
        if target != K:
            q = capped_mul(q, factor_product(factors, target - K))
        final[target] = final.get(target, Polynomial.zero(nvars)) + q
    final = {K: q for K, q in final.items() if not q.is_zero()}

    cert = Certificate(SetSystem(ell, frozenset(final)), final)
    return _verified(cert, factors, "converted certificate")


def alpha_to_dual(cert: Certificate, I: Iterable[int],
                  factors: Sequence[Polynomial]) -> DualCertificate:
    """Rewrite an alpha-certificate as the dual identity for one index set I.

    Requires I \\ J nonempty for every J in alpha.  Each term Q_J * P^J is
    rewritten through the factor indexed by min(I \\ J) and the terms are
    grouped by that index.
    """
    nvars = _check_factors(factors)
    I = frozenset(I)
    ell = len(factors) - 1
    if not all(0 <= i <= ell for i in I):
        raise InputError(f"I = {sorted(I)} is not a subset of the index set")
    for J in cert.alpha:
        if not I - J:
            raise InputError(
                f"I = {sorted(I)} minus alpha member {sorted(J)} is empty; "
                f"the rewriting requires a free index for every member")
    L = frozenset(range(ell + 1))
    grouped: dict[int, Polynomial] = {}
    for J, q in cert.sorted_items():
        i_j = min(I - J)
        rest = (L - J) - {i_j}
        contribution = q * factor_product(factors, rest)
        grouped[i_j] = grouped.get(i_j, Polynomial.zero(nvars)) + contribution
    out = DualCertificate(
        SetSystem.of(ell, [sorted(I)]),
        {I: grouped})
    return _verified(out, factors, "dual rewrite")


def alpha_to_dual_system(cert: Certificate, beta: SetSystem,
                         factors: Sequence[Polynomial]) -> DualCertificate:
    """Dual certificate covering every member of beta via alpha_to_dual."""
    cofactors: dict[IndexSet, Mapping[int, Polynomial]] = {}
    for I in beta:
        single = alpha_to_dual(cert, I, factors)
        cofactors[I] = single.cofactors[I]
    out = DualCertificate(beta, cofactors)
    return _verified(out, factors, "dual system rewrite")


def true_decomposition_certificate(
    factors: Sequence[Polynomial],
    order: MonomialOrder = DEFAULT_ORDER,
    term_cap: Optional[int] = None,
) -> Certificate:
    """Certificate over the singleton family, from all pairwise identities.

    Requires every factor pair to generate the unit ideal.  Missing
    singletons (cancelled cofactors) are padded with explicit zeros so the
    family is exactly the singletons.
    """
    nvars = _check_factors(factors)
    ell = len(factors) - 1
    if ell == 0:
        cert = Certificate(
            SetSystem.of(0, [[0]]),
            {frozenset((0,)): Polynomial.one(nvars)})
        return _verified(cert, factors, "trivial certificate")
    from itertools import combinations
    beta = SetSystem.of(ell, [list(c) for c in combinations(range(ell + 1), 2)])
    dual = dual_certificate(factors, beta, order)
    cert = dual_to_alpha(dual, factors, term_cap)
    cofactors = dict(cert.cofactors)
    for i in range(ell + 1):
        cofactors.setdefault(frozenset((i,)), Polynomial.zero(nvars))
    if any(len(J) != 1 for J in cofactors):
        raise VerificationError(
            "internal error: pairwise conversion left a non-singleton set")
    out = Certificate(
        SetSystem.of(ell, [[i] for i in range(ell + 1)]), cofactors)
    return _verified(out, factors, "true-decomposition certificate")
