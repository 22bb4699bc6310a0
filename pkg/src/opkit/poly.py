"""Exact sparse multivariate polynomials over the rationals.

A polynomial in k variables is stored as a map from exponent vectors
(length-k tuples of non-negative ints) to nonzero Fraction coefficients:

    x^2*y + 3  ->  {(2, 1): Fraction(1), (0, 0): Fraction(3)}

The zero polynomial is the empty map.  Canonical form (no stored zero
coefficient) is maintained by every operation, so equality is plain
term-map equality and "identity equals 1" is a reliable exact test.

The expression grammar accepted by :func:`parse_polynomial`:

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := '-' unary | power
    power  := atom ('^' INTEGER)*
    atom   := NUMBER | NAME | '(' expr ')'

NUMBER is an integer or a contiguous rational literal ``a/b``; NAME matches
``[a-zA-Z][a-zA-Z0-9_]*``.  Implicit multiplication is rejected ("x y" is a
syntax error), and '/' only appears inside rational literals.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from . import kernels
from .errors import InputError, ParseError

Exponent = tuple[int, ...]
RationalLike = Fraction | int | str


class MonomialOrder(enum.Enum):
    """Total orders on monomials compatible with multiplication."""

    LEX = "lex"
    GRLEX = "grlex"
    GREVLEX = "grevlex"

    def sort_key(self, exponent: Exponent):
        """Key so that larger monomials compare greater."""
        if self is MonomialOrder.LEX:
            return exponent
        if self is MonomialOrder.GRLEX:
            return (sum(exponent), exponent)
        return (sum(exponent), tuple(-e for e in reversed(exponent)))

    @classmethod
    def from_name(cls, name: str) -> "MonomialOrder":
        try:
            return cls(name)
        except ValueError:
            raise InputError(
                f"unknown monomial order {name!r}; expected one of "
                f"{', '.join(o.value for o in cls)}") from None


DEFAULT_ORDER = MonomialOrder.GREVLEX


def _as_fraction(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise InputError(f"cannot interpret {value!r} as an exact rational")


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("_terms", "_nvars")

    def __init__(self, terms: Mapping[Exponent, RationalLike], variable_count: int):
        if not isinstance(variable_count, int) or variable_count < 1:
            raise InputError("variable_count must be a positive integer")
        canon: dict = {}
        for exp, coeff in terms.items():
            exp = tuple(exp)
            if len(exp) != variable_count:
                raise InputError(
                    f"exponent vector {exp} has length {len(exp)}, "
                    f"expected {variable_count}")
            if any((not isinstance(e, int)) or e < 0 for e in exp):
                raise InputError(f"exponents must be non-negative ints: {exp}")
            c = _as_fraction(coeff)
            if c:
                canon[exp] = c
        self._terms = canon
        self._nvars = variable_count

    @classmethod
    def _wrap(cls, terms: dict, variable_count: int) -> "Polynomial":
        # Fast path for results of kernel operations, already canonical.
        self = object.__new__(cls)
        self._terms = terms
        self._nvars = variable_count
        return self

    @classmethod
    def zero(cls, variable_count: int) -> "Polynomial":
        return cls({}, variable_count)

    @classmethod
    def one(cls, variable_count: int) -> "Polynomial":
        return cls.constant(1, variable_count)

    @classmethod
    def constant(cls, value: RationalLike, variable_count: int) -> "Polynomial":
        return cls({(0,) * variable_count: _as_fraction(value)}, variable_count)

    @classmethod
    def variable(cls, index: int, variable_count: int) -> "Polynomial":
        if not 0 <= index < variable_count:
            raise InputError(
                f"variable index {index} out of range for {variable_count} variables")
        exp = [0] * variable_count
        exp[index] = 1
        return cls({tuple(exp): Fraction(1)}, variable_count)

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def variable_count(self) -> int:
        return self._nvars

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(exp) for exp in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise InputError("polynomial is not constant")
        return next(iter(self._terms.values()), Fraction(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(exp) for exp in self._terms), default=-1)

    def term_count(self) -> int:
        return len(self._terms)

    def leading_term(self, order: MonomialOrder = DEFAULT_ORDER) -> tuple[Exponent, Fraction]:
        if not self._terms:
            raise InputError("the zero polynomial has no leading term")
        exp = max(self._terms, key=order.sort_key)
        return exp, self._terms[exp]

    def _check_compatible(self, other: "Polynomial") -> None:
        if self._nvars != other._nvars:
            raise InputError(
                f"variable-count mismatch: {self._nvars} vs {other._nvars}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_compatible(other)
        return Polynomial._wrap(kernels.poly_add(self._terms, other._terms), self._nvars)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_compatible(other)
        return Polynomial._wrap(kernels.poly_sub(self._terms, other._terms), self._nvars)

    def __neg__(self) -> "Polynomial":
        return Polynomial._wrap(kernels.poly_neg(self._terms), self._nvars)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            self._check_compatible(other)
            return Polynomial._wrap(kernels.poly_mul(self._terms, other._terms), self._nvars)
        if isinstance(other, (Fraction, int)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Fraction, int)):
            return self.scale(other)
        return NotImplemented

    def scale(self, coeff: RationalLike) -> "Polynomial":
        return Polynomial._wrap(
            kernels.poly_scale(self._terms, _as_fraction(coeff)), self._nvars)

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise InputError("polynomial powers must be non-negative integers")
        result = Polynomial.one(self._nvars)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        return (isinstance(other, Polynomial)
                and self._nvars == other._nvars
                and self._terms == other._terms)

    def __hash__(self) -> int:
        return hash((self._nvars, frozenset(self._terms.items())))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        names = [f"x{i}" for i in range(self._nvars)]
        return f"Polynomial({format_polynomial(self, names)!r}, {self._nvars})"


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    """Term-wise sum with zero terms removed."""
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    """Distributed product in canonical form."""
    return p * q


def product(polys: Iterable[Polynomial], variable_count: int) -> Polynomial:
    """Product of a (possibly empty) collection; the empty product is 1."""
    result = Polynomial.one(variable_count)
    for p in polys:
        result = result * p
    return result


def divide_multi(
    p: Polynomial,
    divisors: Sequence[Polynomial],
    order: MonomialOrder = DEFAULT_ORDER,
) -> tuple[list[Polynomial], Polynomial]:
    """Multivariate division of p by an ordered list of divisors.

    Returns (quotients, remainder) with p = sum(q_i * d_i) + r and no
    monomial of r divisible by any divisor leading monomial.  Deterministic:
    each step reduces by the first applicable divisor in list order.
    """
    if not divisors:
        raise InputError("need at least one divisor")
    nvars = p.variable_count
    leads = []
    for i, d in enumerate(divisors):
        if d.is_zero():
            raise InputError(f"divisor {i} is the zero polynomial")
        if d.variable_count != nvars:
            raise InputError("variable-count mismatch between dividend and divisors")
        leads.append(d.leading_term(order))
    work = dict(p.terms)
    remainder: dict = {}
    quotients: list[dict] = [{} for _ in divisors]
    key = order.sort_key
    while work:
        exp = max(work, key=key)
        coeff = work[exp]
        for i, (lexp, lcoeff) in enumerate(leads):
            if all(e >= le for e, le in zip(exp, lexp)):
                shift = tuple(e - le for e, le in zip(exp, lexp))
                q = coeff / lcoeff
                kernels.poly_isubmul(work, q, shift, divisors[i]._terms)
                qterm = quotients[i]
                new = qterm.get(shift, Fraction(0)) + q
                if new:
                    qterm[shift] = new
                else:
                    qterm.pop(shift, None)
                break
        else:
            remainder[exp] = coeff
            del work[exp]
    return ([Polynomial._wrap(q, nvars) for q in quotients],
            Polynomial._wrap(remainder, nvars))


# ---------------------------------------------------------------------------
# Parsing and printing
# ---------------------------------------------------------------------------

_OPS = set("+-*^()")


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    tokens: list[tuple[str, object, int]] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            start = i
            while i < n and text[i].isdigit():
                i += 1
            num = int(text[start:i])
            if i < n and text[i] == "/" and i + 1 < n and text[i + 1].isdigit():
                i += 1
                dstart = i
                while i < n and text[i].isdigit():
                    i += 1
                den = int(text[dstart:i])
                if den == 0:
                    raise ParseError("zero denominator in rational literal", start)
                tokens.append(("number", Fraction(num, den), start))
            else:
                tokens.append(("number", Fraction(num), start))
        elif ch.isalpha():
            start = i
            i += 1
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(("name", text[start:i], start))
        elif ch in _OPS:
            tokens.append((ch, ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        if not variables:
            raise InputError("at least one variable name is required")
        if len(set(variables)) != len(variables):
            raise InputError("duplicate variable names")
        self.tokens = _tokenize(text)
        self.pos = 0
        self.variables = {name: i for i, name in enumerate(variables)}
        self.nvars = len(variables)

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str):
        tok = self.advance()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        return tok

    def parse(self) -> Polynomial:
        value = self.parse_expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected trailing {tok[0]!r}", tok[2])
        return value

    def parse_expr(self) -> Polynomial:
        value = self.parse_term()
        while True:
            kind, _, _ = self.peek()
            if kind == "+":
                self.advance()
                value = value + self.parse_term()
            elif kind == "-":
                self.advance()
                value = value - self.parse_term()
            else:
                return value

    def parse_term(self) -> Polynomial:
        value = self.parse_unary()
        while True:
            kind, _, pos = self.peek()
            if kind == "*":
                self.advance()
                value = value * self.parse_unary()
            elif kind in ("name", "number", "("):
                raise ParseError("implicit multiplication is not allowed", pos)
            else:
                return value

    def parse_unary(self) -> Polynomial:
        kind, _, _ = self.peek()
        if kind == "-":
            self.advance()
            return -self.parse_unary()
        return self.parse_power()

    def parse_power(self) -> Polynomial:
        value = self.parse_atom()
        while self.peek()[0] == "^":
            self.advance()
            kind, val, pos = self.advance()
            if kind != "number" or not isinstance(val, Fraction) or val.denominator != 1 or val < 0:
                raise ParseError("exponent must be a non-negative integer", pos)
            value = value ** int(val)
        return value

    def parse_atom(self) -> Polynomial:
        kind, val, pos = self.advance()
        if kind == "number":
            return Polynomial.constant(val, self.nvars)
        if kind == "name":
            index = self.variables.get(val)
            if index is None:
                raise ParseError(f"unknown variable {val!r}", pos)
            return Polynomial.variable(index, self.nvars)
        if kind == "(":
            value = self.parse_expr()
            self.expect(")")
            return value
        raise ParseError(f"unexpected {kind!r}", pos)


def parse_polynomial(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse an expression into canonical form.  Raises ParseError on bad input."""
    return _Parser(text, variables).parse()


def format_polynomial(p: Polynomial, variables: Sequence[str]) -> str:
    """Canonical printing: descending default order, 'a/b' rationals.

    Round-trips through :func:`parse_polynomial` exactly.
    """
    if len(variables) != p.variable_count:
        raise InputError(
            f"got {len(variables)} variable names for a "
            f"{p.variable_count}-variable polynomial")
    if p.is_zero():
        return "0"
    pieces = []
    key = DEFAULT_ORDER.sort_key
    for exp in sorted(p.terms, key=key, reverse=True):
        coeff = p.terms[exp]
        factors = []
        for name, e in zip(variables, exp):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mag = abs(coeff)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if not pieces:
            pieces.append(f"-{body}" if coeff < 0 else body)
        else:
            pieces.append(f"- {body}" if coeff < 0 else f"+ {body}")
    return " ".join(pieces)
