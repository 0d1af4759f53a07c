"""Frobenius splittings of affine space defined by f^(p-1).

For f in F_p[x_1..x_n] the map phi(g) = Tr(f^(p-1) g) is a Frobenius
near-splitting, where Tr sends x^b to x^((b - (p-1))/p) when every b_i is
congruent to p-1 and to 0 otherwise.  It is a splitting after rescaling iff
phi(1) is a nonzero constant; that constant is the coefficient of
(x_1...x_n)^(p-1) in f^(p-1).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

from .cgl import monomial_shape_ok
from .errors import ArityMismatch, NotASplitting
from .exact import check_prime
from .poly import Poly
from .polyvec import PolyVector, TorusWeightData, coefficient_matrix, is_weight_homogeneous

# direct expansion of f^(p-1) is skipped past this many potential terms
TERM_GUARD = 10**7


def _in_field(f: Poly, p: int) -> Poly:
    if f.p is None:
        return f.reduce(p)
    if f.p != p:
        raise ArityMismatch(f"polynomial over F_{f.p} used with p={p}")
    return f


def trace(g: Poly, p: int) -> Poly:
    """The p^-1-linear monomial trace."""
    p = check_prime(p)
    g = _in_field(g, p)
    out = {}
    for e, c in g.terms.items():
        if all(k % p == p - 1 for k in e):
            out[tuple((k - (p - 1)) // p for k in e)] = c
    return Poly._raw(out, g.names, p)


def near_splitting_apply(f: Poly, g: Poly, p: int) -> Poly:
    """phi_f(g) = Tr(f^(p-1) g)."""
    p = check_prime(p)
    f, g = _in_field(f, p), _in_field(g, p)
    if f.names != g.names:
        raise ArityMismatch("f and g live in different rings")
    return trace(f.power(p - 1) * g, p)


class NearSplitting:
    """phi(g) = c * Tr(f^(p-1) g), with f^(p-1) expanded once."""

    def __init__(self, f: Poly, p: int, normalize: bool = True):
        self.p = check_prime(p)
        self.f = _in_field(f, p)
        self.F = self.f.power(p - 1)
        self.scale = 1
        if normalize:
            one = trace(self.F, p)
            if not one or not one.is_constant():
                raise NotASplitting("phi(1) is not a nonzero constant")
            self.scale = pow(one.constant_term(), -1, p)

    def __call__(self, g: Poly) -> Poly:
        g = _in_field(g, self.p)
        return trace(self.F * g, self.p).scalar_mul(self.scale)


@dataclass
class SplittingReport:
    split: bool
    criterion_value: int
    top_coefficient: int
    normalizer: int | None
    compatible_ideals: list[tuple[int, ...]] = field(default_factory=list)
    shortcut_value: int | None = None
    shortcut_only: bool = False
    p: int | None = None

    @property
    def verdict(self) -> str:
        return "split" if self.split else "not-split"

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "criterion_value": self.criterion_value,
            "top_coefficient": self.top_coefficient,
            "normalizer": self.normalizer,
            "compatible_ideals": [[i + 1 for i in s] for s in self.compatible_ideals],
        }
        if self.shortcut_only:
            out["criterion_source"] = "shortcut"
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def expansion_bound(f: Poly, p: int) -> int:
    """Upper bound on the number of terms of f^(p-1)."""
    n, deg = f.nvars, max(f.total_degree(), 0)
    return min(comb(len(f.terms) + p - 2, p - 1), comb(n + deg * (p - 1), n))


def is_splitting(f: Poly, p: int, with_ideals: bool = True) -> SplittingReport:
    p = check_prime(p)
    f = _in_field(f, p)
    n = f.nvars
    c = f.coefficient_of((1,) * n)
    shaped = monomial_shape_ok(f)
    shortcut = pow(c, p - 1, p) if shaped else None
    if expansion_bound(f, p) > TERM_GUARD:
        if not shaped:
            raise OverflowError("f^(p-1) too large to expand and f lacks the shortcut shape")
        split = shortcut != 0
        return SplittingReport(split, shortcut, c, pow(shortcut, -1, p) if split else None, [], shortcut, True, p)
    F = f.power(p - 1)
    one = trace(F, p)
    crit = F.coefficient_of((p - 1,) * n)
    split = bool(one) and one.is_constant()
    if shortcut is not None:
        assert shortcut == crit, "shortcut value disagrees with the expanded criterion"
    ideals = _compatible_from_expansion(F, p) if split and with_ideals else []
    return SplittingReport(split, crit, c, pow(crit, -1, p) if split else None, ideals, shortcut, False, p)


def ideal_is_compatible(F: Poly, S: Sequence[int], p: int) -> bool:
    """Is <x_i : i in S> stable under Tr(F * -)?

    Fails exactly when some monomial x^c of F has c_j <= p-1 for all j in S and
    c_j <= p-2 for some j in S: then x^b with b_j = p-1-c_j on S (and b_j
    congruent to -1-c_j elsewhere) lies in the ideal but its image does not.
    """
    S = tuple(S)
    if not S:
        return True
    for e in F.terms:
        if all(e[j] <= p - 1 for j in S) and any(e[j] <= p - 2 for j in S):
            return False
    return True


def _compatible_from_expansion(F: Poly, p: int) -> list[tuple[int, ...]]:
    n = F.nvars
    out = []
    for k in range(n + 1):
        for S in itertools.combinations(range(n), k):
            if ideal_is_compatible(F, S, p):
                out.append(S)
    return out


def compatibly_split_coordinate_ideals(f: Poly, p: int) -> list[tuple[int, ...]]:
    """All S (0-based, including the empty set) with phi(I_S) inside I_S."""
    p = check_prime(p)
    f = _in_field(f, p)
    F = f.power(p - 1)
    one = trace(F, p)
    if not one or not one.is_constant():
        raise NotASplitting("f^(p-1) does not define a Frobenius splitting")
    return _compatible_from_expansion(F, p)


def in_coordinate_ideal(g: Poly, S: Iterable[int]) -> bool:
    S = tuple(S)
    return all(any(e[j] for j in S) for e in g.terms)


def verify_theorem_d_chart(pi: PolyVector, weights: TorusWeightData | None, splits: Iterable[Sequence[int]]) -> bool:
    """Each compatibly split coordinate ideal must be a torus-stable Poisson ideal."""
    m = coefficient_matrix(pi)
    n = pi.nvars
    for S in splits:
        S = tuple(S)
        if weights is not None:
            # coordinate functions are weight vectors, so I_S is torus stable
            for i in S:
                assert is_weight_homogeneous(PolyVector.function(Poly.var(i, pi.names, pi.p)), weights, weights.weights[i])
        for i in S:
            for j in range(n):
                if m[i][j] and not in_coordinate_ideal(m[i][j], S):
                    return False
    return True
