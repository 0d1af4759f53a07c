"""Exact scalars: the prime field F_p (p > 3) and reduction of rationals into it.

Rationals are plain :class:`fractions.Fraction` values; polynomial code works on
raw ``int`` residues for speed and only uses :class:`Fp` at API boundaries.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .errors import DenominatorDivisibleByP, DivisionByZero, NotPrime, PrimeTooSmall

RationalScalar = Fraction


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
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


def check_prime(p: int) -> int:
    """Validate a characteristic: prime and greater than 3."""
    if not isinstance(p, int) or isinstance(p, bool):
        raise NotPrime(f"modulus must be an integer, got {p!r}")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p <= 3:
        raise PrimeTooSmall(f"characteristic must be > 3, got {p}")
    return p


def reduce_mod_p(q, p: int) -> "Fp":
    """Image of a rational number in F_p."""
    check_prime(p)
    return Fp(reduce_raw(q, p), p)


def reduce_raw(q, p: int) -> int:
    """Like :func:`reduce_mod_p` but returns the bare residue."""
    if isinstance(q, Fp):
        if q.p != p:
            raise ValueError(f"cannot move F_{q.p} element into F_{p}")
        return q.value
    if isinstance(q, int):
        return q % p
    if isinstance(q, Rational):
        num, den = q.numerator, q.denominator
        if den % p == 0:
            raise DenominatorDivisibleByP(f"denominator {den} of {q} is divisible by {p}")
        return num * pow(den, -1, p) % p
    raise TypeError(f"cannot reduce {q!r} modulo {p}")


class Fp:
    """An element of the prime field F_p."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        check_prime(p)
        self.p = p
        self.value = reduce_raw(value, p)

    def _coerce(self, other) -> int | None:
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError(f"field mismatch: F_{self.p} vs F_{other.p}")
            return other.value
        if isinstance(other, (int, Fraction)):
            return reduce_raw(other, self.p)
        return None

    def _new(self, v: int) -> Fp:
        out = object.__new__(Fp)
        out.p = self.p
        out.value = v % self.p
        return out

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._new(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._new(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._new(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._new(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.value)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * inverse(self._new(o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._new(o) * inverse(self)

    def __pow__(self, e: int):
        if e < 0:
            return inverse(self) ** (-e)
        return self._new(pow(self.value, e, self.p))

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Fp({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


PrimeFieldScalar = Fp


def inverse(a: Fp) -> Fp:
    if a.value == 0:
        raise DivisionByZero(f"0 has no inverse in F_{a.p}")
    return a._new(pow(a.value, -1, a.p))
