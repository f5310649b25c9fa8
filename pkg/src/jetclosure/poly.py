"""Exact multivariate polynomial arithmetic over Q or a prime field.

Monomials are plain exponent tuples (one entry per ring variable);
polynomials are immutable term maps from exponent tuple to a nonzero
scalar.  Scalars are ``fractions.Fraction`` over Q and canonical residues
in ``[0, p)`` over F_p, so every operation is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

from .errors import ParseError, RingMismatchError, UnknownVariableError

Exponents = tuple  # exponent tuple, one nonnegative int per variable
Scalar = Union[Fraction, int]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The coefficient field: Q when ``characteristic`` is 0, else F_p."""

    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if p != 0 and not _is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(0)

    @classmethod
    def prime_field(cls, p: int) -> "FieldSpec":
        return cls(p)

    @property
    def label(self) -> str:
        return "Q" if self.characteristic == 0 else f"F {self.characteristic}"

    # scalar arithmetic -------------------------------------------------

    def of_int(self, n: int) -> Scalar:
        if self.characteristic == 0:
            return Fraction(n)
        return n % self.characteristic

    def zero(self) -> Scalar:
        return self.of_int(0)

    def one(self) -> Scalar:
        return self.of_int(1)

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        if self.characteristic == 0:
            return a + b
        return (a + b) % self.characteristic

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        if self.characteristic == 0:
            return a - b
        return (a - b) % self.characteristic

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        if self.characteristic == 0:
            return a * b
        return (a * b) % self.characteristic

    def neg(self, a: Scalar) -> Scalar:
        if self.characteristic == 0:
            return -a
        return (-a) % self.characteristic

    def inv(self, a: Scalar) -> Scalar:
        if self.characteristic == 0:
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return Fraction(1) / a
        if a % self.characteristic == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.characteristic - 2, self.characteristic)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    def is_zero(self, a: Scalar) -> bool:
        return a == 0


@dataclass(frozen=True)
class RingContext:
    """A polynomial ring: a coefficient field and an ordered variable list."""

    field_spec: FieldSpec
    variables: tuple
    _index: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variable names must be distinct")
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.variables)})

    @classmethod
    def make(cls, field_spec: FieldSpec, names: Iterable[str]) -> "RingContext":
        return cls(field_spec, tuple(names))

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def var_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"'{name}' is not a variable of this ring") from None

    # element constructors ----------------------------------------------

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        c = self.field_spec.of_int(c) if isinstance(c, int) else c
        if self.field_spec.is_zero(c):
            return Polynomial(self, {})
        return Polynomial(self, {(0,) * self.nvars: c})

    def variable(self, which) -> "Polynomial":
        j = which if isinstance(which, int) else self.var_index(which)
        exps = [0] * self.nvars
        exps[j] = 1
        return Polynomial(self, {tuple(exps): self.field_spec.one()})

    def monomial(self, exps: Iterable[int], coeff=1) -> "Polynomial":
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ValueError("exponent length does not match ring")
        c = self.field_spec.of_int(coeff) if isinstance(coeff, int) else coeff
        if self.field_spec.is_zero(c):
            return Polynomial(self, {})
        return Polynomial(self, {exps: c})


# monomial helpers -------------------------------------------------------


def monomial_mul(u: Exponents, v: Exponents) -> Exponents:
    return tuple(a + b for a, b in zip(u, v))


def monomial_divides(u: Exponents, v: Exponents) -> bool:
    """True when x^u divides x^v."""
    return all(a <= b for a, b in zip(u, v))


def monomial_quotient(u: Exponents, v: Exponents) -> Exponents:
    return tuple(a - b for a, b in zip(u, v))


def monomial_lcm(u: Exponents, v: Exponents) -> Exponents:
    return tuple(max(a, b) for a, b in zip(u, v))


def monomial_degree(u: Exponents) -> int:
    return sum(u)


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order: lex, degrevlex, or an elimination block order.

    ``key`` maps an exponent tuple to a tuple of integers whose
    lexicographic comparison realizes the order; keys add componentwise
    under monomial multiplication, which makes every order here
    multiplicative, and the key of 1 is minimal among exponent tuples.
    """

    kind: str  # "lex" | "degrevlex" | "elim"
    block: int = 0

    @classmethod
    def lex(cls) -> "MonomialOrder":
        return cls("lex")

    @classmethod
    def degrevlex(cls) -> "MonomialOrder":
        return cls("degrevlex")

    @classmethod
    def elimination_block(cls, k: int) -> "MonomialOrder":
        if k < 0:
            raise ValueError("block size must be nonnegative")
        return cls("elim", k)

    def key(self, u: Exponents):
        if self.kind == "lex":
            return u
        if self.kind == "degrevlex":
            return (sum(u), tuple(-e for e in reversed(u)))
        head, tail = u[: self.block], u[self.block :]
        return (
            sum(head),
            tuple(-e for e in reversed(head)),
            sum(tail),
            tuple(-e for e in reversed(tail)),
        )


def compare_monomials(order: MonomialOrder, u: Exponents, v: Exponents) -> int:
    """Return -1, 0, or 1 as x^u is below, equal to, or above x^v."""
    if len(u) != len(v):
        raise ValueError("exponent tuples have different lengths")
    ku, kv = order.key(u), order.key(v)
    if ku < kv:
        return -1
    if ku > kv:
        return 1
    return 0


class Polynomial:
    """A polynomial in canonical form: no zero coefficients are stored.

    Instances are treated as immutable; all arithmetic returns fresh
    objects and raises ``RingMismatchError`` across distinct rings.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: RingContext, terms: dict):
        self.ring = ring
        self.terms = terms

    def _check(self, other: "Polynomial") -> None:
        if self.ring != other.ring:
            raise RingMismatchError("operands live in different rings")

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring.variables, tuple(sorted(self.terms.items()))))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        fld = self.ring.field_spec
        out = dict(self.terms)
        for u, c in other.terms.items():
            s = fld.add(out.get(u, 0), c)
            if fld.is_zero(s):
                out.pop(u, None)
            else:
                out[u] = s
        return Polynomial(self.ring, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        fld = self.ring.field_spec
        out = dict(self.terms)
        for u, c in other.terms.items():
            s = fld.sub(out.get(u, 0), c)
            if fld.is_zero(s):
                out.pop(u, None)
            else:
                out[u] = s
        return Polynomial(self.ring, out)

    def __neg__(self) -> "Polynomial":
        fld = self.ring.field_spec
        return Polynomial(self.ring, {u: fld.neg(c) for u, c in self.terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        fld = self.ring.field_spec
        out: dict = {}
        for u, cu in self.terms.items():
            for v, cv in other.terms.items():
                w = tuple(a + b for a, b in zip(u, v))
                s = fld.add(out.get(w, 0), fld.mul(cu, cv))
                if fld.is_zero(s):
                    out.pop(w, None)
                else:
                    out[w] = s
        return Polynomial(self.ring, out)

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        fld = self.ring.field_spec
        c = fld.of_int(c) if isinstance(c, int) else c
        if fld.is_zero(c):
            return self.ring.zero()
        return Polynomial(self.ring, {u: fld.mul(cv, c) for u, cv in self.terms.items()})

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(u) for u in self.terms)

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * self.ring.nvars, self.ring.field_spec.zero())

    def leading_term(self, order: MonomialOrder):
        """(exponents, coefficient) of the largest term under ``order``."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        u = max(self.terms, key=order.key)
        return u, self.terms[u]

    def monic(self, order: MonomialOrder) -> "Polynomial":
        if not self.terms:
            return self
        _, lc = self.leading_term(order)
        fld = self.ring.field_spec
        inv = fld.inv(lc)
        return Polynomial(self.ring, {u: fld.mul(c, inv) for u, c in self.terms.items()})

    def sorted_terms(self, order: MonomialOrder = None) -> list:
        """Terms in decreasing order (degrevlex unless told otherwise)."""
        order = order or MonomialOrder.degrevlex()
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def transport(self, target: RingContext, positions: Iterable[int]) -> "Polynomial":
        """Reinterpret in ``target``, sending variable j to ``positions[j]``.

        The coefficient field must match; exponents are just reindexed,
        so the map is the obvious ring inclusion/renaming.
        """
        positions = list(positions)
        if target.field_spec != self.ring.field_spec:
            raise RingMismatchError("transport requires the same coefficient field")
        out = {}
        for u, c in self.terms.items():
            w = [0] * target.nvars
            for j, e in enumerate(u):
                if e:
                    w[positions[j]] = e
            out[tuple(w)] = c
        return Polynomial(target, out)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"

    def __str__(self) -> str:
        return format_polynomial(self)


# parsing ----------------------------------------------------------------

_SYMBOLS = "+-*^(),:"


class Token:
    __slots__ = ("kind", "text", "line", "column")

    def __init__(self, kind: str, text: str, line: int, column: int):
        self.kind = kind  # "nat" | "ident" | one of _SYMBOLS | "end"
        self.text = text
        self.line = line
        self.column = column


def tokenize(text: str, line: int = 1) -> list:
    """Split ``text`` into tokens, tracking 1-based line/column positions.

    Identifiers start with a letter and may contain letters, digits,
    underscores and '@' (the latter only ever appears in jet-variable
    names produced by this library).
    """
    tokens = []
    col = 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
        elif ch.isdigit():
            start = i
            while i < n and text[i].isdigit():
                i += 1
            tokens.append(Token("nat", text[start:i], line, col))
            col += i - start
        elif ch.isalpha():
            start = i
            while i < n and (text[i].isalnum() or text[i] in "_@"):
                i += 1
            tokens.append(Token("ident", text[start:i], line, col))
            col += i - start
        elif ch in _SYMBOLS:
            tokens.append(Token(ch, ch, line, col))
            i += 1
            col += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("end", "", line, col))
    return tokens


class _TokenStream:
    def __init__(self, tokens: list):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "end":
            self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text or 'end of input'!r}", tok.line, tok.column)
        return self.next()


def _parse_factor(ts: _TokenStream, ring: RingContext) -> Polynomial:
    tok = ts.peek()
    if tok.kind == "ident":
        ts.next()
        try:
            j = ring.var_index(tok.text)
        except KeyError:
            raise UnknownVariableError(tok.text, tok.line, tok.column) from None
        p = ring.variable(j)
        if ts.peek().kind == "^":
            ts.next()
            e = ts.expect("nat")
            p = p ** int(e.text)
        return p
    if tok.kind == "(":
        ts.next()
        p = _parse_poly(ts, ring)
        ts.expect(")")
        return p
    if tok.kind == "nat":
        ts.next()
        return ring.constant(int(tok.text))
    raise ParseError(f"expected a factor, found {tok.text or 'end of input'!r}", tok.line, tok.column)


_FACTOR_START = ("ident", "(", "nat")


def _parse_term(ts: _TokenStream, ring: RingContext) -> Polynomial:
    tok = ts.peek()
    p = None
    if tok.kind == "nat":
        ts.next()
        p = ring.constant(int(tok.text))
        if ts.peek().kind == "*":
            ts.next()
            p = p * _parse_factor(ts, ring)
        elif ts.peek().kind in _FACTOR_START:
            p = p * _parse_factor(ts, ring)
        else:
            return p
    else:
        p = _parse_factor(ts, ring)
    while ts.peek().kind == "*":
        ts.next()
        p = p * _parse_factor(ts, ring)
    return p


def _parse_poly(ts: _TokenStream, ring: RingContext) -> Polynomial:
    p = _parse_term(ts, ring)
    while ts.peek().kind in "+-":
        op = ts.next().kind
        q = _parse_term(ts, ring)
        p = p + q if op == "+" else p - q
    return p


def parse_polynomial(text: str, ring: RingContext) -> Polynomial:
    """Parse ``text`` as a polynomial of ``ring`` (canonical form)."""
    ts = _TokenStream(tokenize(text))
    p = _parse_poly(ts, ring)
    tok = ts.peek()
    if tok.kind != "end":
        raise ParseError(f"unexpected trailing input {tok.text!r}", tok.line, tok.column)
    return p


# printing ---------------------------------------------------------------


def _integerized(p: Polynomial) -> list:
    """Terms of ``p`` with denominators cleared, sorted degrevlex-descending.

    Over Q the polynomial is scaled by the (positive) lcm of coefficient
    denominators so that the printed text stays inside the integer
    grammar; integer-coefficient input is emitted verbatim.
    """
    items = p.sorted_terms()
    if p.ring.field_spec.characteristic != 0:
        return [(u, int(c)) for u, c in items]
    lcm = 1
    for _, c in items:
        d = c.denominator
        g = _gcd(lcm, d)
        lcm = lcm // g * d
    return [(u, int(c * lcm)) for u, c in items]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _factor_sort_key(name: str):
    # group jet variables by base name, then jet order: x@0*y@2 not y@2*x@0
    if "@" in name:
        prefix, _, idx = name.partition("@")
        if idx.isdigit():
            return (prefix, int(idx))
    return (name, -1)


def _format_term_body(ring: RingContext, u: Exponents, c: int) -> str:
    parts = []
    if c != 1 or not any(u):
        parts.append(str(c))
    factors = sorted(
        ((name, e) for name, e in zip(ring.variables, u) if e),
        key=lambda ne: _factor_sort_key(ne[0]),
    )
    for name, e in factors:
        if e == 1:
            parts.append(name)
        else:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(p: Polynomial) -> str:
    """Render ``p`` in the session grammar, terms degrevlex-descending.

    The output always re-parses (in ``p.ring``) to a polynomial equal to
    ``p`` up to the positive denominator-clearing factor; for polynomials
    with integer coefficients the round trip is exact.  A leading
    negative term is emitted as ``0 - ...`` since the grammar has no
    unary minus.
    """
    items = _integerized(p)
    if not items:
        return "0"
    pieces = []
    first = True
    for u, c in items:
        if first:
            if c < 0:
                pieces.append("0")
                pieces.append(f" - {_format_term_body(p.ring, u, -c)}")
            else:
                pieces.append(_format_term_body(p.ring, u, c))
            first = False
        elif c < 0:
            pieces.append(f" - {_format_term_body(p.ring, u, -c)}")
        else:
            pieces.append(f" + {_format_term_body(p.ring, u, c)}")
    return "".join(pieces)
