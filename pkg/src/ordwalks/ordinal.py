"""Exact Cantor-normal-form arithmetic for ordinals below epsilon_0.

An ordinal is a finite sum ``w^e1*c1 + ... + w^ek*ck`` with ordinal exponents
``e1 > e2 > ... > ek`` and positive integer coefficients; the empty sum is 0.
Values are immutable, hashable and totally ordered, and the representation is
canonical: two ordinals are equal exactly when their term sequences are
identical.

The text form uses ``w`` for the first infinite ordinal, ``^`` for powers,
``*`` for coefficients and ``+`` between terms, e.g. ``w^2*3+w+4``.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Optional, Tuple

Term = Tuple["Ordinal", int]


class OrdinalSyntaxError(ValueError):
    """Malformed ordinal text; ``position`` is the offset of the bad token."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class Ordinal:
    """A canonical CNF ordinal.  Construct via parse/from_int/from_terms."""

    __slots__ = ("terms", "_hash", "_limit")

    def __init__(self, terms: Tuple[Term, ...] = ()):
        # Trusted constructor: callers must supply canonical term tuples
        # (exponents strictly decreasing, coefficients >= 1).
        self.terms = terms
        self._hash = hash(terms)
        self._limit: Optional[Ordinal] = None

    # -- classification ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero

    def natural(self) -> Optional[int]:
        """The integer value if this ordinal is finite, else None."""
        if not self.terms:
            return 0
        if len(self.terms) == 1 and self.terms[0][0].is_zero:
            return self.terms[0][1]
        return None

    def predecessor(self) -> "Ordinal":
        if not self.is_successor:
            raise ValueError("only successor ordinals have a predecessor")
        exp, coeff = self.terms[-1]
        if coeff == 1:
            return Ordinal(self.terms[:-1])
        return Ordinal(self.terms[:-1] + ((exp, coeff - 1),))

    def limit_part(self) -> "Ordinal":
        """Self with any trailing finite term removed (so self = part + n)."""
        cached = self._limit
        if cached is None:
            if self.terms and self.terms[-1][0].is_zero:
                cached = Ordinal(self.terms[:-1])
            else:
                cached = self
            self._limit = cached
        return cached

    # -- total order --------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self._hash == other._hash and self.terms == other.terms

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Ordinal") -> bool:
        return compare(self, other) < 0

    def __le__(self, other: "Ordinal") -> bool:
        return compare(self, other) <= 0

    def __gt__(self, other: "Ordinal") -> bool:
        return compare(self, other) > 0

    def __ge__(self, other: "Ordinal") -> bool:
        return compare(self, other) >= 0

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"Ordinal({render(self)!r})"


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


def from_int(n: int) -> Ordinal:
    if n < 0:
        raise ValueError("ordinals are non-negative")
    if n == 0:
        return ZERO
    return Ordinal(((ZERO, n),))


def from_terms(pairs: Iterable[Term]) -> Ordinal:
    """Validated constructor: exponents strictly decreasing, coeffs >= 1."""
    terms = tuple(pairs)
    prev = None
    for exp, coeff in terms:
        if not isinstance(exp, Ordinal) or not isinstance(coeff, int):
            raise TypeError("terms must be (Ordinal, int) pairs")
        if coeff < 1:
            raise ValueError("coefficients must be positive")
        if prev is not None and compare(exp, prev) >= 0:
            raise ValueError("exponents must be strictly decreasing")
        prev = exp
    return Ordinal(terms)


def compare(a: Ordinal, b: Ordinal) -> int:
    """Trichotomous comparison: -1 (a < b), 0 (equal), or 1 (a > b)."""
    if a is b or a.terms == b.terms:
        return 0
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = compare(ea, eb)
        if c != 0:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    if len(a.terms) == len(b.terms):
        return 0
    return -1 if len(a.terms) < len(b.terms) else 1


def classify(a: Ordinal) -> str:
    """One of 'zero', 'successor', 'limit'."""
    if a.is_zero:
        return "zero"
    return "successor" if a.is_successor else "limit"


def fund_seq(a: Ordinal, n: int) -> Ordinal:
    """The n-th element (0-indexed) of the canonical sequence converging to a.

    Writing a = d + w^g for one copy of the last CNF term: if g is a
    successor g'+1, the n-th element is d + w^g'*(n+1); if g is a limit it is
    d + w^(g[n]).  The sequence is strictly increasing and cofinal in a.
    """
    if not a.is_limit:
        raise ValueError("fundamental sequences exist only for limit ordinals")
    if n < 0:
        raise ValueError("index must be non-negative")
    head = a.terms[:-1]
    gamma, coeff = a.terms[-1]
    if coeff > 1:
        head = head + ((gamma, coeff - 1),)
    if gamma.is_successor:
        return Ordinal(head + ((gamma.predecessor(), n + 1),))
    return Ordinal(head + ((fund_seq(gamma, n), 1),))


def _add_power(a: Ordinal, exp: Ordinal, coeff: int) -> Ordinal:
    """CNF sum a + w^exp*coeff.  Internal: used for normalization/sampling."""
    if coeff < 1:
        raise ValueError("coefficients must be positive")
    terms = a.terms
    keep = len(terms)
    while keep > 0 and compare(terms[keep - 1][0], exp) < 0:
        keep -= 1
    if keep > 0 and compare(terms[keep - 1][0], exp) == 0:
        merged = terms[keep - 1][1] + coeff
        return Ordinal(terms[: keep - 1] + ((exp, merged),))
    return Ordinal(terms[:keep] + ((exp, coeff),))


def universe(max_exponent: int, max_coefficient: int) -> Tuple[Ordinal, ...]:
    """All sums over w^e (e <= max_exponent) with coefficients 0..max_coefficient.

    Returned in strictly increasing order; (max_coefficient+1)^(max_exponent+1)
    ordinals in total.
    """
    if max_exponent < 0 or max_coefficient < 0:
        raise ValueError("bounds must be non-negative")
    exps = [from_int(e) for e in range(max_exponent, -1, -1)]
    out = []
    for vec in product(range(max_coefficient + 1), repeat=max_exponent + 1):
        terms = tuple((e, c) for e, c in zip(exps, vec) if c)
        out.append(Ordinal(terms))
    return tuple(out)


# -- text form ---------------------------------------------------------------


def render(a: Ordinal) -> str:
    if not a.terms:
        return "0"
    parts = []
    for exp, coeff in a.terms:
        if exp.is_zero:
            parts.append(str(coeff))
            continue
        if exp == ONE:
            parts.append("w" if coeff == 1 else f"w*{coeff}")
            continue
        n = exp.natural()
        if n is not None:
            atom = str(n)
        elif exp == OMEGA:
            atom = "w"
        else:
            atom = f"({render(exp)})"
        parts.append(f"w^{atom}" if coeff == 1 else f"w^{atom}*{coeff}")
    return "+".join(parts)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> OrdinalSyntaxError:
        return OrdinalSyntaxError(message, self.pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def nat(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        digits = self.text[start : self.pos]
        if not digits:
            raise self.error("expected a number")
        if digits[0] == "0":
            self.pos = start
            raise self.error("numbers may not start with 0 here")
        return int(digits)

    def atom(self) -> Ordinal:
        ch = self.peek()
        if ch == "w":
            self.pos += 1
            return OMEGA
        if ch == "(":
            self.pos += 1
            inner = self.ordinal()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.pos += 1
            return inner
        if ch.isdigit():
            return from_int(self.nat())
        raise self.error("expected an exponent (number, 'w' or parenthesis)")

    def term(self) -> Term:
        ch = self.peek()
        if ch == "w":
            self.pos += 1
            nxt = self.peek()
            if nxt == "^":
                self.pos += 1
                exp = self.atom()
                if self.peek() == "*":
                    self.pos += 1
                    return exp, self.nat()
                return exp, 1
            if nxt == "*":
                self.pos += 1
                return ONE, self.nat()
            return ONE, 1
        if ch.isdigit():
            return ZERO, self.nat()
        raise self.error("expected a term")

    def ordinal(self) -> Ordinal:
        if self.peek() == "0":
            self.pos += 1
            return ZERO
        result = ZERO
        exp, coeff = self.term()
        result = _add_power(result, exp, coeff)
        while self.peek() == "+":
            self.pos += 1
            exp, coeff = self.term()
            result = _add_power(result, exp, coeff)
        return result

    def parse(self) -> Ordinal:
        result = self.ordinal()
        if self.peek() != "":
            raise self.error("unexpected trailing input")
        return result


def parse(text: str) -> Ordinal:
    """Parse the text form of an ordinal.

    Whitespace is ignored.  Non-canonical input is normalized by evaluating
    the written sum left to right (so ``w+w^2`` parses to ``w^2`` and ``w+w``
    to ``w*2``); genuine grammar violations raise OrdinalSyntaxError with the
    failing position.
    """
    return _Parser(text).parse()
