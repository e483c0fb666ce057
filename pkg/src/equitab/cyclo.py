"""Exact cyclotomic numbers in canonical Zumbroich-basis form.

A value lives in Q(zeta_n) for its minimal conductor n and is stored as a
sparse map from Zumbroich-basis exponents to nonzero rationals.  Because the
representation is canonical, two values are equal exactly when their stored
forms are identical, so they can be hashed, ordered and serialized directly.

The text syntax follows the ``E(n)`` convention: ``E(n)`` is exp(2*pi*i/n).
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Iterable, Mapping, Optional, Union

__all__ = [
    "Cyclotomic",
    "CyclotomicParseError",
    "E",
    "parse_cyclotomic",
    "zumbroich_basis",
    "add",
    "mul",
    "neg",
    "conj",
    "cmp_total",
    "serialize",
    "is_rational_integer",
    "is_real",
]

Number = Union[int, Fraction]

# exponents must fit in a signed machine word
MAX_EXPONENT = 2**63 - 1


def _factorize(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def _balanced_residues(p: int, k: int) -> list[int]:
    """Integers whose k base-p digits all lie in [-(p-1)/2, (p-1)/2]."""
    res = [0]
    h = (p - 1) // 2
    for level in range(k):
        w = p**level
        res = [r + d * w for r in res for d in range(-h, h + 1)]
    return res


def _prime_power_basis(p: int, k: int) -> frozenset[int]:
    """Allowed residues c mod p**k for the p-primary component of an exponent."""
    q = p**k
    top = p ** (k - 1)
    if p == 2:
        return frozenset(range(top))
    lower = _balanced_residues(p, k - 1)
    return frozenset((j * top + r) % q for j in range(1, p) for r in lower)


@lru_cache(maxsize=None)
def _components(n: int) -> tuple[tuple[int, int, int, int, frozenset[int]], ...]:
    # (p, q = p**k, cofactor n/q, inverse of cofactor mod q, allowed residues)
    comps = []
    for p, k in _factorize(n):
        q = p**k
        cof = n // q
        comps.append((p, q, cof, pow(cof, -1, q) if q > 1 else 0, _prime_power_basis(p, k)))
    return tuple(comps)


@lru_cache(maxsize=None)
def zumbroich_basis(n: int) -> tuple[int, ...]:
    """Sorted exponents e such that E(n)^e is in the Zumbroich basis of Q(E(n))."""
    if n == 1:
        return (0,)
    return tuple(e for e in range(n) if _in_basis(n, e))


def _in_basis(n: int, e: int) -> bool:
    for _p, q, _cof, inv, allowed in _components(n):
        if (e * inv) % q not in allowed:
            return False
    return True


@lru_cache(maxsize=None)
def _expansion_table(n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """For every exponent e mod n, E(n)^e written as signed sum of basis powers."""
    table = []
    for e in range(n):
        terms = {e: 1}
        for p, q, _cof, inv, allowed in _components(n):
            step = n // p
            nxt: dict[int, int] = {}
            for x, c in terms.items():
                if (x * inv) % q in allowed:
                    nxt[x] = nxt.get(x, 0) + c
                elif p == 2:
                    y = (x + step) % n
                    nxt[y] = nxt.get(y, 0) - c
                else:
                    for j in range(1, p):
                        y = (x + j * step) % n
                        nxt[y] = nxt.get(y, 0) - c
            terms = {x: c for x, c in nxt.items() if c}
        table.append(tuple(sorted(terms.items())))
    return tuple(table)


def _reduce_dense(n: int, raw: Mapping[int, Fraction]) -> dict[int, Fraction]:
    """Rewrite an arbitrary sum of powers of E(n) in the Zumbroich basis."""
    table = _expansion_table(n)
    out: dict[int, Fraction] = {}
    for e, c in raw.items():
        if not c:
            continue
        for b, s in table[e % n]:
            out[b] = out.get(b, 0) + s * c
    return {e: Fraction(c) for e, c in out.items() if c}


def _minimize_conductor(n: int, terms: dict[int, Fraction]) -> tuple[int, dict[int, Fraction]]:
    """Descend to the smallest cyclotomic field containing the value."""
    if not terms:
        return 1, {}
    changed = True
    while changed and n > 1:
        changed = False
        for p, q, _cof, inv, _allowed in _components(n):
            if q % (p * p) == 0 or p == 2:
                # the subfield basis embeds as multiples of p
                if all(e % p == 0 for e in terms):
                    terms = {e // p: c for e, c in terms.items()}
                    n //= p
                    changed = True
                    break
                continue
            # p exactly divides n (p odd): coefficients must be constant along
            # each fibre of the p-component
            m = n // p
            fibres: dict[int, dict[int, Fraction]] = {}
            for e, c in terms.items():
                cp = (e * inv) % q
                base = (e - cp * (n // q)) % n
                fibres.setdefault(base, {})[cp] = c
            ok = True
            for fib in fibres.values():
                if len(fib) != p - 1 or len(set(fib.values())) != 1:
                    ok = False
                    break
            if not ok:
                continue
            new: dict[int, Fraction] = {}
            for base, fib in fibres.items():
                c = next(iter(fib.values()))
                new[(base // p) % m] = -c
            terms = new
            n = m
            changed = True
            break
    if n == 1:
        return 1, {0: terms[0]} if terms.get(0) else {}
    return n, terms


def _to_fraction(x: Number) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


@total_ordering
class Cyclotomic:
    """Immutable exact element of a cyclotomic field."""

    __slots__ = ("conductor", "terms", "_hash")

    conductor: int
    terms: tuple[tuple[int, Fraction], ...]

    def __init__(self, value: Number = 0):
        c = _to_fraction(value)
        object.__setattr__(self, "conductor", 1)
        object.__setattr__(self, "terms", ((0, c),) if c else ())
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _canonical(cls, n: int, terms: dict[int, Fraction]) -> "Cyclotomic":
        obj = cls.__new__(cls)
        object.__setattr__(obj, "conductor", n)
        object.__setattr__(obj, "terms", tuple(sorted(terms.items())))
        object.__setattr__(obj, "_hash", None)
        return obj

    @classmethod
    def from_powers(cls, n: int, coeffs: Mapping[int, Number]) -> "Cyclotomic":
        """Value of sum(c * E(n)^e) for an arbitrary (non-basis) exponent map."""
        if n < 1:
            raise ValueError("conductor must be positive")
        raw: dict[int, Fraction] = {}
        for e, c in coeffs.items():
            raw[e % n] = raw.get(e % n, Fraction(0)) + _to_fraction(c)
        m, terms = _minimize_conductor(n, _reduce_dense(n, raw))
        return cls._canonical(m, terms)

    @classmethod
    def root_of_unity(cls, n: int, e: int = 1) -> "Cyclotomic":
        return cls.from_powers(n, {e % n: 1})

    def __setattr__(self, name, value):
        raise AttributeError("Cyclotomic values are immutable")

    # -- arithmetic ---------------------------------------------------------

    def _lifted(self, n: int) -> dict[int, Fraction]:
        f = n // self.conductor
        return {e * f: c for e, c in self.terms}

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        n = math.lcm(self.conductor, other.conductor)
        raw = self._lifted(n)
        for e, c in other._lifted(n).items():
            raw[e] = raw.get(e, 0) + c
        m, terms = _minimize_conductor(n, _reduce_dense(n, raw))
        return Cyclotomic._canonical(m, terms)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._canonical(self.conductor, {e: -c for e, c in self.terms})

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if other.conductor == 1:
            c = other.rational_part()
            if not c:
                return ZERO
            return Cyclotomic._canonical(self.conductor, {e: v * c for e, v in self.terms})
        if self.conductor == 1:
            return other * self
        n = math.lcm(self.conductor, other.conductor)
        a = self._lifted(n)
        b = other._lifted(n)
        raw: dict[int, Fraction] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                k = (ea + eb) % n
                raw[k] = raw.get(k, 0) + ca * cb
        m, terms = _minimize_conductor(n, _reduce_dense(n, raw))
        return Cyclotomic._canonical(m, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers are supported")
        # a single root of unity reduces the exponent modulo its order
        if len(self.terms) == 1 and self.conductor > 1 and abs(self.terms[0][1]) == 1:
            e, c = self.terms[0]
            sign = c ** (k % 2) if c < 0 else 1
            return sign * Cyclotomic.from_powers(self.conductor, {(e * k) % self.conductor: 1})
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if other.conductor != 1:
            return self * other.inverse()
        c = other.rational_part()
        if not c:
            raise ZeroDivisionError("division by zero cyclotomic")
        return Cyclotomic._canonical(self.conductor, {e: v / c for e, v in self.terms})

    def inverse(self) -> "Cyclotomic":
        """Multiplicative inverse via the product of the nontrivial Galois conjugates."""
        if not self.terms:
            raise ZeroDivisionError("division by zero cyclotomic")
        n = self.conductor
        if n == 1:
            return Cyclotomic(1 / self.terms[0][1])
        prod = ONE
        for k in range(2, n):
            if math.gcd(k, n) == 1:
                prod = prod * self.galois(k)
        norm = self * prod
        return prod / norm

    def galois(self, k: int) -> "Cyclotomic":
        """Image under the automorphism E(n) -> E(n)^k, gcd(k, n) = 1."""
        n = self.conductor
        if math.gcd(k, n) != 1:
            raise ValueError(f"{k} is not a unit modulo {n}")
        if n == 1:
            return self
        raw = {(e * k) % n: c for e, c in self.terms}
        return Cyclotomic._canonical(n, _reduce_dense(n, raw))

    def conj(self) -> "Cyclotomic":
        return self.galois(-1)

    # -- predicates ---------------------------------------------------------

    def rational_part(self) -> Fraction:
        if self.conductor != 1:
            raise ValueError("value is not rational")
        return self.terms[0][1] if self.terms else Fraction(0)

    @property
    def is_rational(self) -> bool:
        return self.conductor == 1

    def is_rational_integer(self) -> Optional[int]:
        if self.conductor != 1:
            return None
        c = self.rational_part()
        return c.numerator if c.denominator == 1 else None

    def is_real(self) -> bool:
        return self.conj() == self

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- ordering / identity -------------------------------------------------

    def sort_key(self) -> tuple:
        coeffs = dict(self.terms)
        return (self.conductor, tuple(coeffs.get(e, Fraction(0)) for e in zumbroich_basis(self.conductor)))

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.conductor == other.conductor and self.terms == other.terms

    def __lt__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.conductor, self.terms))
            object.__setattr__(self, "_hash", h)
        return h

    def __str__(self) -> str:
        return serialize(self)

    def __repr__(self) -> str:
        return f"Cyclotomic({serialize(self)!r})"

    def __reduce__(self):
        return (parse_cyclotomic, (serialize(self),))


def _coerce(x) -> Optional[Cyclotomic]:
    if isinstance(x, Cyclotomic):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return Cyclotomic(x)
    return None


ZERO = Cyclotomic(0)
ONE = Cyclotomic(1)


def E(n: int) -> Cyclotomic:
    """Primitive n-th root of unity exp(2*pi*i/n)."""
    if n < 1:
        raise ValueError("E(n) requires n >= 1")
    return Cyclotomic.root_of_unity(n, 1)


# -- functional API ----------------------------------------------------------


def add(a: Cyclotomic, b: Cyclotomic) -> Cyclotomic:
    return a + b


def mul(a: Cyclotomic, b: Cyclotomic) -> Cyclotomic:
    return a * b


def neg(a: Cyclotomic) -> Cyclotomic:
    return -a


def conj(a: Cyclotomic) -> Cyclotomic:
    return a.conj()


def cmp_total(a: Cyclotomic, b: Cyclotomic) -> int:
    """-1, 0 or 1: conductor first, then coefficients over the sorted basis."""
    ka, kb = a.sort_key(), b.sort_key()
    return (ka > kb) - (ka < kb)


def is_rational_integer(a: Cyclotomic) -> Optional[int]:
    return a.is_rational_integer()


def is_real(a: Cyclotomic) -> bool:
    return a.is_real()


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def serialize(a: Cyclotomic) -> str:
    """Canonical text form, e.g. ``-1``, ``E(4)``, ``2*E(5)-E(5)^4``."""
    if a.conductor == 1:
        return _fmt_rational(a.terms[0][1]) if a.terms else "0"
    n = a.conductor
    parts = []
    for e, c in a.terms:
        if e == 0:
            piece = _fmt_rational(c)
        else:
            root = f"E({n})" if e == 1 else f"E({n})^{e}"
            if c == 1:
                piece = root
            elif c == -1:
                piece = "-" + root
            else:
                piece = f"{_fmt_rational(c)}*{root}"
        if parts and not piece.startswith("-"):
            parts.append("+")
        parts.append(piece)
    return "".join(parts)


# -- parser --------------------------------------------------------------------


class CyclotomicParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


class _Parser:
    """Recursive descent over::

        expr   := term (('+' | '-') term)*
        term   := unary ('*' unary)*
        unary  := '-' unary | power
        power  := atom ('^' INT)?
        atom   := INT ('/' INT)? | 'E' '(' INT ')' | '(' expr ')'
    """

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise CyclotomicParseError(msg, self.text, self.pos)

    def skip(self):
        t = self.text
        while self.pos < len(t) and t[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected integer")
        return int(self.text[start:self.pos])

    def parse(self) -> Cyclotomic:
        if not self.peek():
            self.error("empty expression")
        v = self.expr()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return v

    def expr(self) -> Cyclotomic:
        v = self.term()
        while self.peek() in ("+", "-") and self.peek():
            op = self.text[self.pos]
            self.pos += 1
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self) -> Cyclotomic:
        v = self.unary()
        while self.peek() == "*":
            self.pos += 1
            v = v * self.unary()
        return v

    def unary(self) -> Cyclotomic:
        if self.peek() == "-":
            self.pos += 1
            return -self.unary()
        return self.power()

    def power(self) -> Cyclotomic:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            at = self.pos
            k = self.integer()
            if k > MAX_EXPONENT:
                self.pos = at
                self.error("exponent overflow")
            return base**k
        return base

    def atom(self) -> Cyclotomic:
        ch = self.peek()
        if ch.isdigit():
            num = self.integer()
            if self.peek() == "/":
                self.pos += 1
                at = self.pos
                den = self.integer()
                if den == 0:
                    self.pos = at
                    self.error("zero denominator")
                return Cyclotomic(Fraction(num, den))
            return Cyclotomic(num)
        if ch == "E":
            self.pos += 1
            self.expect("(")
            at = self.pos
            n = self.integer()
            if n < 1:
                self.pos = at
                self.error("E(n) requires n >= 1")
            if n > MAX_EXPONENT:
                self.pos = at
                self.error("conductor overflow")
            self.expect(")")
            return E(n)
        if ch == "(":
            self.pos += 1
            v = self.expr()
            self.expect(")")
            return v
        self.error("unexpected end of input" if not ch else f"unexpected {ch!r}")


def parse_cyclotomic(text: str) -> Cyclotomic:
    """Parse an ``E(n)`` expression into canonical form."""
    return _Parser(text).parse()


def sum_cyclotomics(values: Iterable[Cyclotomic]) -> Cyclotomic:
    total = ZERO
    for v in values:
        total = total + v
    return total
