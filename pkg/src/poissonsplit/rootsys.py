"""Finite root systems, Weyl groups as matrices, Bruhat order, subexpressions.

Roots are integer vectors in the basis of simple roots.  The invariant form is
normalized so that short roots of a non-simply-laced type have <a, a> = 2 and
every root satisfies <a, a>/2 in {1, 2, 3}.  Cartan integers follow Bourbaki:
``C[i][j] = <a_i^vee, a_j> = 2 <a_i, a_j> / <a_i, a_i>``.

Words are tuples of 1-based simple indices; the word (i1, ..., ik) stands for
the product s_{i1} ... s_{ik}, which acts on vectors rightmost letter first.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import IndexOutOfRange, LengthMismatch, ParseError, UnsupportedType

Vector = tuple[int, ...]
Word = tuple[int, ...]


def _path(n: int) -> list[list[int]]:
    c = [[0] * n for _ in range(n)]
    for i in range(n):
        c[i][i] = 2
        if i + 1 < n:
            c[i][i + 1] = c[i + 1][i] = -1
    return c


def cartan_data(family: str, n: int) -> tuple[list[list[int]], list[int]]:
    """Cartan matrix and the half squared lengths d_i = <a_i, a_i>/2."""
    if family == "A" and n >= 1:
        return _path(n), [1] * n
    if family == "B" and n >= 2:
        c = _path(n)
        c[n - 1][n - 2] = -2
        return c, [2] * (n - 1) + [1]
    if family == "C" and n >= 2:
        c = _path(n)
        c[n - 2][n - 1] = -2
        return c, [1] * (n - 1) + [2]
    if family == "D" and n >= 4:
        c = _path(n)
        c[n - 2][n - 1] = c[n - 1][n - 2] = 0
        c[n - 3][n - 1] = c[n - 1][n - 3] = -1
        return c, [1] * n
    if family == "E" and n in (6, 7, 8):
        c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        edges = [(0, 2), (2, 3), (3, 4), (1, 3)] + [(k, k + 1) for k in range(4, n - 1)]
        for i, j in edges:
            c[i][j] = c[j][i] = -1
        return c, [1] * n
    if family == "F" and n == 4:
        c = _path(4)
        c[2][1] = -2
        return c, [2, 2, 1, 1]
    if family == "G" and n == 2:
        return [[2, -3], [-1, 2]], [1, 3]
    raise UnsupportedType(f"no root system of type {family}{n}")


class RootSystem:
    """A reduced irreducible root system of finite type."""

    def __init__(self, label: str):
        m = re.fullmatch(r"\s*([A-Ga-g])\s*(\d+)\s*", str(label))
        if not m:
            raise UnsupportedType(f"cannot parse root system label {label!r}")
        self.family = m.group(1).upper()
        self.rank = int(m.group(2))
        self.cartan, self.d = cartan_data(self.family, self.rank)
        n = self.rank
        self.gram = [[self.d[i] * self.cartan[i][j] for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(n):
                assert self.gram[i][j] == self.gram[j][i], "Cartan data not symmetrizable"

    @property
    def label(self) -> str:
        return f"{self.family}{self.rank}"

    def __repr__(self):
        return f"RootSystem({self.label!r})"

    def __eq__(self, other):
        return isinstance(other, RootSystem) and other.label == self.label

    def __hash__(self):
        return hash(self.label)

    def simple_root(self, i: int) -> Vector:
        self._check_index(i)
        return tuple(int(k == i - 1) for k in range(self.rank))

    def _check_index(self, i: int):
        if not 1 <= i <= self.rank:
            raise IndexOutOfRange(f"simple index {i} outside 1..{self.rank} for {self.label}")

    def pairing(self, u: Sequence[int], v: Sequence[int]) -> int:
        """The invariant form <u, v> on the root lattice."""
        n = self.rank
        return sum(u[i] * self.gram[i][j] * v[j] for i in range(n) for j in range(n) if u[i] and v[j])

    def coroot_pairing(self, i: int, v: Sequence[int]) -> int:
        """<a_i^vee, v> for 1-based i."""
        row = self.cartan[i - 1]
        return sum(c * x for c, x in zip(row, v))

    def reflect(self, i: int, v: Sequence[int]) -> Vector:
        """s_i(v) = v - <a_i^vee, v> a_i."""
        self._check_index(i)
        k = self.coroot_pairing(i, v)
        out = list(v)
        out[i - 1] -= k
        return tuple(out)

    def to_fundamental(self, v: Sequence[int]) -> Vector:
        """Coordinates of v in the fundamental weight basis: (<v, a_k^vee>)_k."""
        return tuple(self.coroot_pairing(k, v) for k in range(1, self.rank + 1))

    def to_coroot(self, v: Sequence[int]) -> Vector:
        """Coordinates of the element v^# of the Cartan with mu(v^#) = <mu, v>,
        in the basis of simple coroots."""
        return tuple(v[k] * self.d[k] for k in range(self.rank))

    @cached_property
    def positive_roots(self) -> list[Vector]:
        seen = {self.simple_root(i) for i in range(1, self.rank + 1)}
        frontier = list(seen)
        while frontier:
            nxt = []
            for v in frontier:
                for i in range(1, self.rank + 1):
                    w = self.reflect(i, v)
                    if all(x >= 0 for x in w) and w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return sorted(seen, key=lambda v: (sum(v), tuple(-x for x in v)))

    @cached_property
    def roots(self) -> list[Vector]:
        pos = self.positive_roots
        return pos + [tuple(-x for x in v) for v in pos]

    def is_positive(self, v: Sequence[int]) -> bool:
        return any(v) and all(x >= 0 for x in v)

    def is_negative(self, v: Sequence[int]) -> bool:
        return any(v) and all(x <= 0 for x in v)

    @cached_property
    def weyl(self) -> WeylGroup:
        return WeylGroup(self)


def positive_roots(rs: RootSystem) -> list[Vector]:
    return list(rs.positive_roots)


def reflect(rs: RootSystem, i: int, v: Sequence[int]) -> Vector:
    return rs.reflect(i, v)


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element stored by the images of the simple roots."""

    images: tuple[Vector, ...]

    def act(self, v: Sequence[int]) -> Vector:
        n = len(self.images)
        return tuple(sum(v[j] * self.images[j][k] for j in range(n)) for k in range(n))

    def __mul__(self, other: WeylElement) -> WeylElement:
        return WeylElement(tuple(self.act(img) for img in other.images))


class WeylGroup:
    def __init__(self, rs: RootSystem):
        self.rs = rs
        self._downsets: dict[WeylElement, frozenset] = {}
        self._nf: dict[WeylElement, Word] = {}

    @cached_property
    def identity(self) -> WeylElement:
        return WeylElement(tuple(self.rs.simple_root(i) for i in range(1, self.rs.rank + 1)))

    @cached_property
    def generators(self) -> list[WeylElement]:
        rs = self.rs
        return [
            WeylElement(tuple(rs.reflect(i, rs.simple_root(j)) for j in range(1, rs.rank + 1)))
            for i in range(1, rs.rank + 1)
        ]

    def element(self, w: Word | WeylElement) -> WeylElement:
        if isinstance(w, WeylElement):
            return w
        out = self.identity
        for i in w:
            self.rs._check_index(i)
            out = out * self.generators[i - 1]
        return out

    def act(self, w: Word | WeylElement, v: Sequence[int]) -> Vector:
        return self.element(w).act(v)

    def length(self, w: Word | WeylElement) -> int:
        x = self.element(w)
        return sum(1 for b in self.rs.positive_roots if self.rs.is_negative(x.act(b)))

    def is_reduced(self, word: Word) -> bool:
        return self.length(word) == len(word)

    def normal_form(self, w: Word | WeylElement) -> Word:
        """Lexicographically smallest reduced word, found by greedy left descents."""
        x = self.element(w)
        if x in self._nf:
            return self._nf[x]
        word = []
        y = x
        ell = self.length(y)
        while ell:
            for i, g in enumerate(self.generators, start=1):
                z = g * y
                lz = self.length(z)
                if lz < ell:
                    word.append(i)
                    y, ell = z, lz
                    break
        self._nf[x] = tuple(word)
        return self._nf[x]

    @cached_property
    def longest_element(self) -> Word:
        x = self.identity
        while True:
            for g in self.generators:
                if self.length(x * g) > self.length(x):
                    x = x * g
                    break
            else:
                return self.normal_form(x)

    def elements(self) -> list[WeylElement]:
        """All elements, ordered by length and then normal form."""
        seen = {self.identity}
        layer = [self.identity]
        out = [self.identity]
        while layer:
            nxt = set()
            for x in layer:
                for g in self.generators:
                    y = x * g
                    if y not in seen:
                        seen.add(y)
                        nxt.add(y)
            layer = sorted(nxt, key=self.normal_form)
            out.extend(layer)
        return out

    def reduced_words(self, w: Word | WeylElement) -> list[Word]:
        """Every reduced word of w, sorted lexicographically."""
        x = self.element(w)
        ell = self.length(x)
        if ell == 0:
            return [()]
        out = []
        for i, g in enumerate(self.generators, start=1):
            y = x * g
            if self.length(y) < ell:
                out.extend(word + (i,) for word in self.reduced_words(y))
        return sorted(out)

    def downset(self, w: Word | WeylElement) -> frozenset:
        """{u : u <= w} via reduced subwords of one fixed reduced word of w."""
        x = self.element(w)
        if x in self._downsets:
            return self._downsets[x]
        reach = {self.identity: 0}
        for i in self.normal_form(x):
            g = self.generators[i - 1]
            for y, ly in list(reach.items()):
                z = y * g
                if z not in reach and self.length(z) > ly:
                    reach[z] = ly + 1
        self._downsets[x] = frozenset(reach)
        return self._downsets[x]

    def bruhat_leq(self, u: Word | WeylElement, w: Word | WeylElement) -> bool:
        return self.element(u) in self.downset(w)


def act(rs: RootSystem, w: Word, v: Sequence[int]) -> Vector:
    return rs.weyl.act(w, v)


def length(rs: RootSystem, w: Word) -> int:
    return rs.weyl.length(w)


def longest_element(rs: RootSystem) -> Word:
    return rs.weyl.longest_element


def bruhat_leq(rs: RootSystem, u: Word, w: Word) -> bool:
    return rs.weyl.bruhat_leq(u, w)


# -- subexpressions -----------------------------------------------------

@dataclass(frozen=True)
class Subexpression:
    """gamma = (gamma_1, ..., gamma_n) with gamma_i in {e, s_{u_i}}."""

    word: Word
    flips: tuple[bool, ...]

    def __post_init__(self):
        if len(self.word) != len(self.flips):
            raise LengthMismatch(f"word has length {len(self.word)}, subexpression {len(self.flips)}")

    def letters(self) -> Word:
        """Letters of the gamma_i equal to a reflection, as a word."""
        return tuple(i for i, f in zip(self.word, self.flips) if f)

    def prefix(self, i: int) -> Word:
        """gamma^i = gamma_1 ... gamma_i as a word (i counts from 1)."""
        return tuple(a for a, f in zip(self.word[:i], self.flips[:i]) if f)

    def prefixes(self) -> list[Word]:
        return [self.prefix(i) for i in range(1, len(self.word) + 1)]

    def signs(self) -> tuple[int, ...]:
        """+1 where gamma_i = e, -1 where gamma_i = s_{u_i}."""
        return tuple(-1 if f else 1 for f in self.flips)

    def __str__(self):
        return format_gamma(self)


def subexpressions(u: Word) -> list[Subexpression]:
    u = tuple(u)
    return [Subexpression(u, flips) for flips in itertools.product((False, True), repeat=len(u))]


def parse_word(text: str, rs: RootSystem | None = None) -> Word:
    """``"1,2,1"`` -> (1, 2, 1); ``""`` or ``"e"`` is the empty word."""
    text = text.strip()
    if text in ("", "e"):
        return ()
    try:
        word = tuple(int(tok) for tok in text.replace(" ", "").split(","))
    except ValueError as exc:
        raise ParseError(f"cannot parse word {text!r}") from exc
    if rs is not None:
        for i in word:
            rs._check_index(i)
    elif any(i < 1 for i in word):
        raise IndexOutOfRange(f"word letters are 1-based: {text!r}")
    return word


def format_word(word: Word) -> str:
    return ",".join(map(str, word)) if word else "e"


def parse_gamma(text: str, word: Word) -> Subexpression:
    """``"e,s,e"``; an entry may also name its reflection explicitly, e.g. ``s2``."""
    toks = [t.strip() for t in text.split(",")] if text.strip() else []
    if len(toks) != len(word):
        raise LengthMismatch(f"subexpression {text!r} has {len(toks)} entries, word has {len(word)}")
    flips = []
    for tok, letter in zip(toks, word):
        if tok == "e":
            flips.append(False)
        elif tok == "s" or tok == f"s{letter}":
            flips.append(True)
        else:
            raise ParseError(f"bad subexpression entry {tok!r} (expected e or s{letter})")
    return Subexpression(tuple(word), tuple(flips))


def format_gamma(gamma: Subexpression) -> str:
    return ",".join("s" if f else "e" for f in gamma.flips)


def all_reduced_words_of_longest(rs: RootSystem) -> list[Word]:
    return rs.weyl.reduced_words(rs.weyl.longest_element)


def iter_charts(rs: RootSystem, words: Iterable[Word] | None = None):
    """(word, gamma) for every reduced word of w0 (or the given words) and every gamma."""
    for word in words if words is not None else all_reduced_words_of_longest(rs):
        for gamma in subexpressions(word):
            yield word, gamma
