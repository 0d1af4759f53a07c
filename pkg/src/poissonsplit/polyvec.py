"""Polyvector fields (multi-derivations) on a polynomial ring.

A degree-k field is stored as ``{I: a_I}`` meaning sum_I a_I d_I, where I is a
strictly increasing tuple of 0-based variable indices and d_I is the wedge
d_{i1} ^ ... ^ d_{ik}.  Evaluation on functions uses
``d_I(f_1, ..., f_k) = det[d_{i_r} f_s]``, so ``(d_0 ^ d_1)(x_0, x_1) = 1``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ArityMismatch, DimensionMismatch, ParseError
from .exact import Fp, reduce_raw
from .linalg import rank as matrix_rank
from .poly import Poly, format_poly, parse_poly

Index = tuple[int, ...]


def merge_sign(a: Index, b: Index) -> tuple[int, Index]:
    """Sign and sorted union of d_a ^ d_b; sign 0 when the index sets overlap."""
    if set(a) & set(b):
        return 0, ()
    inversions = sum(1 for x in a for y in b if x > y)
    return (-1 if inversions % 2 else 1), tuple(sorted(a + b))


class PolyVector:
    __slots__ = ("names", "p", "degree", "terms")

    def __init__(self, terms: Mapping[Index, Poly] | None, degree: int, names: Sequence[str], p: int | None = None):
        self.names = tuple(names)
        self.p = p
        self.degree = degree
        n = len(self.names)
        if degree < 0 or degree > n and terms:
            raise ArityMismatch(f"degree {degree} impossible with {n} variables")
        clean: dict[Index, Poly] = {}
        for idx, f in (terms or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ArityMismatch(f"index set {idx} does not have degree {degree}")
            if any(not 0 <= i < n for i in idx):
                raise ArityMismatch(f"index set {idx} out of range for {n} variables")
            if any(a >= b for a, b in zip(idx, idx[1:])):
                raise ValueError(f"index set {idx} is not strictly increasing")
            if not isinstance(f, Poly):
                f = Poly.const(f, self.names, p)
            elif f.names != self.names or f.p != p:
                raise ArityMismatch("coefficient lives in a different ring")
            if f:
                clean[idx] = clean[idx] + f if idx in clean else f
                if not clean[idx]:
                    del clean[idx]
        self.terms = clean

    @classmethod
    def _raw(cls, terms, degree, names, p):
        out = object.__new__(cls)
        out.names, out.p, out.degree, out.terms = names, p, degree, terms
        return out

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, degree: int, names, p=None) -> PolyVector:
        return cls({}, degree, names, p)

    @classmethod
    def function(cls, f: Poly) -> PolyVector:
        return cls({(): f}, 0, f.names, f.p)

    @classmethod
    def partial(cls, i: int, names, p=None) -> PolyVector:
        return cls({(i,): Poly.const(1, names, p)}, 1, names, p)

    @classmethod
    def basis(cls, idx: Sequence[int], names, p=None, coeff: Poly | None = None) -> PolyVector:
        """coeff * d_idx for an arbitrary (possibly unsorted) index sequence."""
        idx = tuple(idx)
        if len(set(idx)) != len(idx):
            return cls.zero(len(idx), names, p)
        perm_sign = 1
        for a, b in itertools.combinations(range(len(idx)), 2):
            if idx[a] > idx[b]:
                perm_sign = -perm_sign
        c = coeff if coeff is not None else Poly.const(1, names, p)
        return cls({tuple(sorted(idx)): c * perm_sign}, len(idx), names, p)

    @classmethod
    def bivector(cls, coeffs: Mapping[tuple[int, int], Poly], names, p=None) -> PolyVector:
        """Build sum c_ij d_i ^ d_j from a map (i, j) -> c_ij (any order of i, j)."""
        out = cls.zero(2, names, p)
        for (i, j), c in coeffs.items():
            if i == j:
                continue
            out = out + cls.basis((i, j), names, p, c)
        return out

    # -- ring structure -------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.names)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, idx: Sequence[int]) -> Poly:
        return self.terms.get(tuple(idx), Poly.zero(self.names, self.p))

    def top_coefficient(self) -> Poly:
        """f with self = f d_1 ^ ... ^ d_n (self must have top degree)."""
        if self.degree != self.nvars:
            raise DimensionMismatch(f"degree {self.degree} is not top degree {self.nvars}")
        return self.coefficient(tuple(range(self.nvars)))

    def _check(self, other: PolyVector):
        if other.names != self.names or other.p != self.p:
            raise ArityMismatch("polyvectors live over different rings")

    def __add__(self, other: PolyVector) -> PolyVector:
        if not isinstance(other, PolyVector):
            return NotImplemented
        self._check(other)
        if other.degree != self.degree:
            if not other.terms:
                return self
            if not self.terms:
                return other
            raise ArityMismatch(f"cannot add degrees {self.degree} and {other.degree}")
        out = dict(self.terms)
        for idx, f in other.terms.items():
            g = out[idx] + f if idx in out else f
            if g:
                out[idx] = g
            else:
                out.pop(idx, None)
        return PolyVector._raw(out, self.degree, self.names, self.p)

    def __neg__(self):
        return PolyVector._raw({i: -f for i, f in self.terms.items()}, self.degree, self.names, self.p)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> PolyVector:
        """Multiply by a function or scalar."""
        out = {}
        for idx, f in self.terms.items():
            g = f * c
            if g:
                out[idx] = g
        return PolyVector._raw(out, self.degree, self.names, self.p)

    def __mul__(self, c):
        if isinstance(c, (Poly, int, Fraction, Fp)):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PolyVector):
            return NotImplemented
        if self.names != other.names or self.p != other.p:
            return False
        if not self.terms and not other.terms:
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.names, self.p, self.degree, frozenset(self.terms.items())))

    def __repr__(self):
        return f"PolyVector({format_polyvector(self)!r}, degree={self.degree}, p={self.p})"

    __str__ = lambda self: format_polyvector(self)

    def reduce(self, p: int) -> PolyVector:
        return PolyVector({i: f.reduce(p) for i, f in self.terms.items()}, self.degree, self.names, p)

    def embed(self, names: Sequence[str], positions: Sequence[int]) -> PolyVector:
        """Push forward along the coordinate inclusion i -> positions[i]."""
        out = PolyVector.zero(self.degree, names, self.p)
        for idx, f in self.terms.items():
            new_idx = tuple(positions[i] for i in idx)
            out = out + PolyVector.basis(new_idx, names, self.p, f.embed(names, positions))
        return out

    # -- exterior and Schouten structure --------------------------------

    def wedge(self, other: PolyVector) -> PolyVector:
        self._check(other)
        deg = self.degree + other.degree
        out: dict[Index, Poly] = {}
        for i1, f1 in self.terms.items():
            for i2, f2 in other.terms.items():
                sign, idx = merge_sign(i1, i2)
                if not sign:
                    continue
                g = f1 * f2
                if sign < 0:
                    g = -g
                out[idx] = out[idx] + g if idx in out else g
        out = {i: f for i, f in out.items() if f}
        return PolyVector._raw(out, deg, self.names, self.p)

    __xor__ = wedge

    def _contract_derivative(self, other: PolyVector) -> PolyVector:
        """sum_i (d/dx_i of other) ^ (left odd derivative d/dxi_i of self)."""
        deg = self.degree + other.degree - 1
        out: dict[Index, Poly] = {}
        for i1, f1 in self.terms.items():
            for pos, i in enumerate(i1):
                rest = i1[:pos] + i1[pos + 1:]
                for i2, f2 in other.terms.items():
                    d = f2.partial_derivative(i)
                    if not d:
                        continue
                    sign, idx = merge_sign(i2, rest)
                    if not sign:
                        continue
                    if pos % 2:
                        sign = -sign
                    g = f1 * d
                    if sign < 0:
                        g = -g
                    out[idx] = out[idx] + g if idx in out else g
        out = {i: f for i, f in out.items() if f}
        return PolyVector._raw(out, max(deg, 0), self.names, self.p)

    def schouten(self, other: PolyVector) -> PolyVector:
        """Schouten-Nijenhuis bracket, normalized so that [X, f] = X(f).

        In odd coordinates xi_i = d_i:
        [A, B] = sum_i (d_i B)(d/dxi_i A) - (-1)^((a-1)(b-1)) (d_i A)(d/dxi_i B)
        with left odd derivatives d/dxi_i.
        """
        self._check(other)
        m, n = self.degree, other.degree
        if m + n == 0:
            return PolyVector.zero(0, self.names, self.p)
        first = self._contract_derivative(other)
        second = other._contract_derivative(self)
        if ((m - 1) * (n - 1)) % 2:
            result = first + second
        else:
            result = first - second
        if not result.terms:
            return PolyVector.zero(m + n - 1, self.names, self.p)
        return result

    # -- evaluation -----------------------------------------------------

    def evaluate(self, args: Sequence[Poly]) -> Poly:
        """Value as an alternating multi-derivation on k polynomials."""
        if len(args) != self.degree:
            raise ArityMismatch(f"degree-{self.degree} field applied to {len(args)} arguments")
        zero = Poly.zero(self.names, self.p)
        if self.degree == 0:
            return self.terms.get((), zero)
        grads = [[a.partial_derivative(i) for i in range(self.nvars)] for a in args]
        total = zero
        for idx, f in self.terms.items():
            rows = [[grads[s][i] for s in range(self.degree)] for i in idx]
            total = total + f * poly_det(rows)
        return total

    __call__ = evaluate

    def apply(self, f: Poly) -> Poly:
        return self.evaluate([f])


def evaluate_multi(a: PolyVector, args: Sequence[Poly]) -> Poly:
    return a.evaluate(args)


def wedge(a: PolyVector, b: PolyVector) -> PolyVector:
    return a.wedge(b)


def schouten(a: PolyVector, b: PolyVector) -> PolyVector:
    return a.schouten(b)


def wedge_all(fields: Iterable[PolyVector], names, p=None) -> PolyVector:
    out = PolyVector.function(Poly.const(1, names, p))
    for v in fields:
        out = out.wedge(v)
    return out


def poly_det(rows: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant by Laplace expansion along rows, memoized on column subsets."""
    k = len(rows)
    if k == 0:
        raise ValueError("empty determinant")
    cache: dict[tuple[int, tuple[int, ...]], Poly] = {}

    def det(r: int, cols: tuple[int, ...]) -> Poly:
        if r == k - 1:
            return rows[r][cols[0]]
        key = (r, cols)
        if key in cache:
            return cache[key]
        total = None
        for pos, c in enumerate(cols):
            entry = rows[r][c]
            if not entry:
                continue
            term = entry * det(r + 1, cols[:pos] + cols[pos + 1:])
            if pos % 2:
                term = -term
            total = term if total is None else total + term
        if total is None:
            total = rows[0][0] * 0
        cache[key] = total
        return total

    return det(0, tuple(range(k)))


# -- bivectors ----------------------------------------------------------

def coefficient_matrix(pi: PolyVector) -> list[list[Poly]]:
    """Skew matrix (pi_ij) with pi = sum_{i<j} pi_ij d_i ^ d_j."""
    if pi.degree != 2 and pi.terms:
        raise DimensionMismatch(f"expected a bivector, got degree {pi.degree}")
    n = pi.nvars
    zero = Poly.zero(pi.names, pi.p)
    m = [[zero] * n for _ in range(n)]
    for (i, j), f in pi.terms.items():
        m[i][j] = f
        m[j][i] = -f
    return m


def _pfaffian_table(matrix: Sequence[Sequence[Poly]]):
    """Memoized sub-Pfaffian of the skew matrix on any sorted index tuple."""
    cache: dict[Index, Poly] = {}
    one = None

    def pf(idx: Index) -> Poly:
        nonlocal one
        if not idx:
            if one is None:
                one = Poly.const(1, matrix[0][0].names, matrix[0][0].p)
            return one
        if idx in cache:
            return cache[idx]
        i0 = idx[0]
        total = None
        for pos in range(1, len(idx)):
            entry = matrix[i0][idx[pos]]
            if not entry:
                continue
            sub = pf(idx[1:pos] + idx[pos + 1:])
            if not sub:
                continue
            term = entry * sub
            if pos % 2 == 0:
                term = -term
            total = term if total is None else total + term
        if total is None:
            total = matrix[0][0] * 0
        cache[idx] = total
        return total

    return pf


def divided_power(pi: PolyVector, r: int) -> PolyVector:
    """pi^[r]: coefficient on each 2r-subset I is the sub-Pfaffian of (pi_ij) on I."""
    if r < 0:
        raise ValueError("r must be non-negative")
    if pi.degree != 2 and pi.terms:
        raise DimensionMismatch("divided powers are defined for bivectors")
    n = pi.nvars
    if r == 0:
        return PolyVector.function(Poly.const(1, pi.names, pi.p))
    if 2 * r > n:
        return PolyVector.zero(2 * r, pi.names, pi.p)
    pf = _pfaffian_table(coefficient_matrix(pi))
    terms = {}
    for idx in itertools.combinations(range(n), 2 * r):
        c = pf(idx)
        if c:
            terms[idx] = c
    return PolyVector._raw(terms, 2 * r, pi.names, pi.p)


def rank(pi: PolyVector) -> int:
    """2 * max{r : pi^[r] != 0}."""
    if pi.degree != 2 and pi.terms:
        raise DimensionMismatch("rank is defined for bivectors")
    if not pi.terms:
        return 0
    n = pi.nvars
    pf = _pfaffian_table(coefficient_matrix(pi))
    r = 0
    while 2 * (r + 1) <= n:
        if not any(pf(idx) for idx in itertools.combinations(range(n), 2 * (r + 1))):
            break
        r += 1
    return 2 * r


def matrix_at_point(pi: PolyVector, point: Sequence) -> list[list]:
    if len(point) != pi.nvars:
        raise ArityMismatch(f"point has {len(point)} coordinates, ring has {pi.nvars}")
    return [[f.evaluate(point) for f in row] for row in coefficient_matrix(pi)]


def rank_at_point(pi: PolyVector, point: Sequence) -> int:
    """Rank of the skew form pi_m at the maximal ideal of a k-point."""
    return matrix_rank(matrix_at_point(pi, point), pi.p)


def hamiltonian(a: Poly, pi: PolyVector) -> PolyVector:
    """X_a with X_a(b) = pi(a, b)."""
    m = coefficient_matrix(pi)
    n = pi.nvars
    grad = [a.partial_derivative(i) for i in range(n)]
    out = {}
    for j in range(n):
        c = None
        for i in range(n):
            if grad[i] and m[i][j]:
                t = m[i][j] * grad[i]
                c = t if c is None else c + t
        if c:
            out[(j,)] = c
    return PolyVector._raw(out, 1, pi.names, pi.p)


def log_canonical_matrix(pi: PolyVector) -> list[list]:
    """Constant skew matrix c with pi = sum_{i<j} c_ij x_i x_j d_i ^ d_j.

    Raises ValueError when pi is not log-canonical.
    """
    n = pi.nvars
    c = [[0] * n for _ in range(n)]
    for (i, j), f in pi.terms.items():
        e = [0] * n
        e[i] += 1
        e[j] += 1
        if set(f.terms) != {tuple(e)}:
            raise ValueError(f"coefficient of d{i + 1}^d{j + 1} is not a multiple of x{i + 1}x{j + 1}")
        v = f.terms[tuple(e)]
        c[i][j] = v
        c[j][i] = -v if pi.p is None else (-v) % pi.p
    return c


# -- torus actions ------------------------------------------------------

@dataclass(frozen=True)
class TorusWeightData:
    """Characters of the variables under a rank-m torus, as integer vectors."""

    weights: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(tuple(w) for w in self.weights))
        if self.weights and len({len(w) for w in self.weights}) != 1:
            raise DimensionMismatch("all weights must have the same length")

    @property
    def m(self) -> int:
        return len(self.weights[0]) if self.weights else 0

    @property
    def n(self) -> int:
        return len(self.weights)

    def pair(self, i: int, h: Sequence):
        """lambda_i(h) = sum_k lambda_i[k] h[k]."""
        if len(h) != self.m:
            raise DimensionMismatch(f"h has {len(h)} entries, torus has rank {self.m}")
        return sum(a * b for a, b in zip(self.weights[i], h))

    def weight_of_monomial(self, exponent: Sequence[int]) -> tuple:
        m = self.m
        return tuple(sum(e * w[k] for e, w in zip(exponent, self.weights)) for k in range(m))

    def weight_of_term(self, exponent: Sequence[int], idx: Index) -> tuple:
        """Weight of x^e d_I: functions carry lambda, each d_i carries -lambda_i."""
        w = list(self.weight_of_monomial(exponent))
        for i in idx:
            for k in range(self.m):
                w[k] -= self.weights[i][k]
        return tuple(w)

    def extend(self, other: TorusWeightData) -> TorusWeightData:
        return TorusWeightData(self.weights + other.weights)


def generating_field(h: Sequence, wd: TorusWeightData, names, p=None) -> PolyVector:
    """d_h = sum_i lambda_i(h) x_i d_i."""
    if len(names) != wd.n:
        raise DimensionMismatch(f"{wd.n} weights for {len(names)} variables")
    out = {}
    for i in range(wd.n):
        c = wd.pair(i, h)
        if p is not None:
            c = reduce_raw(c, p)
        if c:
            out[(i,)] = Poly.var(i, names, p).scalar_mul(c)
    return PolyVector(out, 1, names, p)


def field_from_column(col: Sequence, names, p=None) -> PolyVector:
    """sum_i col[i] x_i d_i, i.e. a toric vector field given in the basis x_i d_i."""
    out = {}
    for i, c in enumerate(col):
        if p is not None:
            c = reduce_raw(c, p)
        if c:
            out[(i,)] = Poly.var(i, names, p).scalar_mul(c)
    return PolyVector(out, 1, names, p)


def is_weight_homogeneous(pv: PolyVector, wd: TorusWeightData, weight: Sequence[int] | None = None) -> bool:
    target = tuple(weight) if weight is not None else (0,) * wd.m
    for idx, f in pv.terms.items():
        for e in f.terms:
            if wd.weight_of_term(e, idx) != target:
                return False
    return True


# -- text syntax --------------------------------------------------------

def format_polyvector(pv: PolyVector) -> str:
    """``(poly) * d1^d3 + ...`` with 1-based d-indices."""
    if not pv.terms:
        return "0"
    parts = []
    for idx in sorted(pv.terms):
        f = pv.terms[idx]
        coeff = format_poly(f)
        if not idx:
            parts.append(coeff)
            continue
        wedge_txt = "^".join(f"d{i + 1}" for i in idx)
        if coeff == "1":
            parts.append(wedge_txt)
        else:
            parts.append(f"({coeff})*{wedge_txt}")
    return " + ".join(parts)


_WEDGE_TAIL = re.compile(r"^(?:(.*)\*)?\s*(d\d+(?:\s*\^\s*d\d+)*)\s*$", re.S)


def _split_top_level(text: str) -> list[tuple[int, str]]:
    depth, start, buf_sign = 0, 0, 1
    pieces = []
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0:
            prev = text[start:i].strip()
            if prev:
                pieces.append((buf_sign, prev))
                buf_sign = 1 if ch == "+" else -1
            else:
                buf_sign = buf_sign * (1 if ch == "+" else -1)
            start = i + 1
    last = text[start:].strip()
    if last:
        pieces.append((buf_sign, last))
    return pieces


def parse_polyvector(text: str, names: Sequence[str], p: int | None = None) -> PolyVector:
    """Inverse of :func:`format_polyvector`; ``d``-indices are 1-based."""
    if text.strip() == "0":
        raise ParseError("cannot infer the degree of the zero polyvector from text")
    result = None
    for sign, chunk in _split_top_level(text):
        m = _WEDGE_TAIL.match(chunk)
        if m and not any(chunk.strip().startswith(nm) and nm.startswith("d") for nm in names):
            coeff_txt, wedge_txt = m.groups()
            idx = tuple(int(tok[1:]) - 1 for tok in re.findall(r"d\d+", wedge_txt))
            coeff = parse_poly(coeff_txt, names, p) if coeff_txt else Poly.const(1, names, p)
        else:
            idx = ()
            coeff = parse_poly(chunk, names, p)
        if any(not 0 <= i < len(names) for i in idx):
            raise ParseError(f"d-index out of range in {chunk!r}")
        term = PolyVector.basis(idx, names, p, coeff * sign)
        if result is not None and term.degree != result.degree:
            raise ParseError("mixed degrees in polyvector text")
        result = term if result is None else result + term
    if result is None:
        raise ParseError("empty polyvector")
    return result
