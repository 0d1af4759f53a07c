"""Sparse multivariate polynomials with exact coefficients.

A :class:`Poly` lives in a ring k[x_1, ..., x_n] fixed by its tuple of variable
names and its characteristic ``p``.  ``p=None`` means rational coefficients
(ints or Fractions); otherwise coefficients are ints reduced into [0, p).
Terms are stored as ``{exponent tuple: coefficient}`` with no zero coefficients.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ArityMismatch, ParseError
from .exact import Fp, check_prime, reduce_raw

Exponent = tuple[int, ...]

# f^(p-1) at desk scale has degree at most (p-1)*n; anything far beyond is a bug
MAX_EXPONENT = 10_000


def _normalize(c, p):
    if p is not None:
        return reduce_raw(c, p)
    if isinstance(c, Fp):
        raise TypeError("F_p scalar used in a rational polynomial")
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class Poly:
    __slots__ = ("names", "p", "terms")

    def __init__(self, terms: Mapping[Exponent, object] | None, names: Sequence[str], p: int | None = None):
        self.names = tuple(names)
        if p is not None:
            check_prime(p)
        self.p = p
        n = len(self.names)
        clean: dict[Exponent, object] = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise ArityMismatch(f"exponent {e} has length {len(e)}, ring has {n} variables")
            if any(k < 0 for k in e):
                raise ValueError(f"negative exponent in {e}")
            c = _normalize(c, p)
            if c:
                clean[e] = _normalize(clean.get(e, 0) + c, p)
                if not clean[e]:
                    del clean[e]
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict, names: tuple, p):
        # trusted constructor: terms already normalized and nonzero
        out = object.__new__(cls)
        out.names = names
        out.p = p
        out.terms = terms
        return out

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, names, p=None) -> Poly:
        return cls({}, names, p)

    @classmethod
    def const(cls, c, names, p=None) -> Poly:
        return cls({(0,) * len(names): c}, names, p)

    @classmethod
    def var(cls, i: int, names, p=None) -> Poly:
        e = [0] * len(names)
        e[i] = 1
        return cls({tuple(e): 1}, names, p)

    @classmethod
    def monomial(cls, exponent: Sequence[int], names, p=None, coeff=1) -> Poly:
        return cls({tuple(exponent): coeff}, names, p)

    def gens(self) -> list[Poly]:
        return [Poly.var(i, self.names, self.p) for i in range(self.nvars)]

    # -- basic properties -----------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.names)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, 0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def coefficient_of(self, exponent: Sequence[int]):
        exponent = tuple(exponent)
        if len(exponent) != self.nvars:
            raise ArityMismatch(f"exponent {exponent} does not match {self.nvars} variables")
        return self.terms.get(exponent, 0)

    def monomials(self) -> list[Exponent]:
        """Exponents in graded-lexicographic order, largest first."""
        return sorted(self.terms, key=lambda e: (sum(e), e), reverse=True)

    def depends_on(self, i: int) -> bool:
        return any(e[i] for e in self.terms)

    def divisible_by_var(self, i: int) -> bool:
        return all(e[i] >= 1 for e in self.terms)

    # -- arithmetic -----------------------------------------------------

    def _check(self, other: Poly):
        if other.names != self.names:
            if len(other.names) != len(self.names):
                raise ArityMismatch(f"{len(self.names)} vs {len(other.names)} variables")
            raise ArityMismatch(f"variable names differ: {self.names} vs {other.names}")
        if other.p != self.p:
            raise ArityMismatch(f"coefficient fields differ: p={self.p} vs p={other.p}")

    def _lift(self, other) -> Poly | None:
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, Fp)):
            return Poly.const(other, self.names, self.p)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        p = self.p
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if p is not None:
                v %= p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(out, self.names, p)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        if p is None:
            return Poly._raw({e: -c for e, c in self.terms.items()}, self.names, p)
        return Poly._raw({e: (-c) % p for e, c in self.terms.items()}, self.names, p)

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scalar_mul(self, c) -> Poly:
        c = _normalize(c, self.p)
        if not c:
            return Poly.zero(self.names, self.p)
        p = self.p
        if p is None:
            return Poly._raw({e: _normalize(v * c, None) for e, v in self.terms.items()}, self.names, p)
        return Poly._raw({e: v * c % p for e, v in self.terms.items()}, self.names, p)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Fp)):
            return self.scalar_mul(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        p = self.p
        out: dict[Exponent, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        if p is None:
            clean = {e: _normalize(c, None) for e, c in out.items() if c}
        else:
            clean = {}
            for e, c in out.items():
                c %= p
                if c:
                    clean[e] = c
        for e in clean:
            if max(e, default=0) > MAX_EXPONENT:
                raise OverflowError(f"exponent bound exceeded in {e}")
        return Poly._raw(clean, self.names, p)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, Poly):
            if not c.is_constant() or c.is_zero():
                raise ZeroDivisionError("only division by nonzero constants is supported")
            c = c.constant_term()
        if self.p is None:
            return self.scalar_mul(Fraction(1) / Fraction(c))
        return self.scalar_mul(pow(reduce_raw(c, self.p), -1, self.p))

    def power(self, e: int) -> Poly:
        """f**e by repeated squaring."""
        if e < 0:
            raise ValueError("negative exponent")
        result = Poly.const(1, self.names, self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    __pow__ = power

    def partial_derivative(self, i: int) -> Poly:
        if not 0 <= i < self.nvars:
            raise ArityMismatch(f"no variable with index {i}")
        p = self.p
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                v = c * k
                if p is not None:
                    v %= p
                if v:
                    ee = list(e)
                    ee[i] -= 1
                    out[tuple(ee)] = _normalize(v, p)
        return Poly._raw(out, self.names, p)

    diff = partial_derivative

    def evaluate(self, point: Sequence):
        """Value of the polynomial at a point of k^n."""
        if len(point) != self.nvars:
            raise ArityMismatch(f"point has {len(point)} coordinates, ring has {self.nvars}")
        p = self.p
        pt = [_normalize(v, p) for v in point]
        total = 0
        for e, c in self.terms.items():
            term = c
            for v, k in zip(pt, e):
                if k:
                    term = term * (pow(v, k, p) if p is not None else v ** k)
            total += term
        return _normalize(total, p)

    def reduce(self, p: int) -> Poly:
        """Image in F_p[x] of a polynomial with rational coefficients."""
        if self.p == p:
            return self
        if self.p is not None:
            raise ValueError(f"cannot reduce an F_{self.p} polynomial mod {p}")
        return Poly(self.terms, self.names, p)

    def rename(self, names: Sequence[str]) -> Poly:
        if len(names) != self.nvars:
            raise ArityMismatch("rename must keep the number of variables")
        return Poly._raw(dict(self.terms), tuple(names), self.p)

    def embed(self, names: Sequence[str], positions: Sequence[int]) -> Poly:
        """Move into a bigger ring, variable i going to slot positions[i]."""
        n = len(names)
        out = {}
        for e, c in self.terms.items():
            ee = [0] * n
            for k, pos in zip(e, positions):
                ee[pos] = k
            out[tuple(ee)] = c
        return Poly._raw(out, tuple(names), self.p)

    # -- comparison / display -------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.names == other.names and self.p == other.p and self.terms == other.terms
        if isinstance(other, (int, Fraction, Fp)):
            return self.terms == Poly.const(other, self.names, self.p).terms
        return NotImplemented

    def __hash__(self):
        return hash((self.names, self.p, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Poly({format_poly(self)!r}, p={self.p})"

    def __str__(self):
        return format_poly(self)


def format_poly(f: Poly) -> str:
    """Render in graded-lex order, e.g. ``3*z1^2*t2 - z1 + 4``."""
    if not f.terms:
        return "0"
    pieces = []
    for e in f.monomials():
        c = f.terms[e]
        neg = f.p is None and c < 0
        a = -c if neg else c
        factors = []
        for name, k in zip(f.names, e):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}^{k}")
        if a != 1 or not factors:
            factors.insert(0, str(a))
        body = "*".join(factors)
        if not pieces:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append(("- " if neg else "+ ") + body)
    return " ".join(pieces)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("name", name))
        elif op is not None and op.strip():
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r} in {text!r}")
            out.append(("op", op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text, names, p):
        self.toks = _tokenize(text)
        self.i = 0
        self.names = tuple(names)
        self.p = p
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r} in {self.text!r}")

    def parse(self) -> Poly:
        if not self.toks:
            raise ParseError("empty polynomial")
        f = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input in {self.text!r}")
        return f

    def expr(self):
        f = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self):
        f = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            _, op = self.take()
            g = self.unary()
            f = f * g if op == "*" else f / g
        return f

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        f = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ParseError(f"exponent must be a non-negative integer in {self.text!r}")
            f = f.power(val)
        return f

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return Poly.const(val, self.names, self.p)
        if kind == "name":
            if val not in self.names:
                raise ParseError(f"unknown variable {val!r}; ring has {self.names}")
            return Poly.var(self.names.index(val), self.names, self.p)
        if (kind, val) == ("op", "("):
            f = self.expr()
            self.expect(")")
            return f
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_poly(text: str, names: Sequence[str], p: int | None = None) -> Poly:
    """Parse the textual syntax produced by :func:`format_poly`."""
    try:
        return _Parser(text, names, p).parse()
    except ZeroDivisionError as exc:
        raise ParseError(str(exc)) from exc


def var_names(prefix: str, n: int, start: int = 1) -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(start, start + n))


def product(polys: Iterable[Poly], names, p=None) -> Poly:
    out = Poly.const(1, names, p)
    for f in polys:
        out = out * f
    return out
