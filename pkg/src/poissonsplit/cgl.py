"""Poisson CGL data, chart bivectors and T-Pfaffian certificates.

Conventions: variables are 0-based in the Python API and 1-based in text and
JSON.  ``pairing[i][j] = lambda_i(h_j)``; the bracket is

    {x_i, x_j} = lambda_j(h_i) x_i x_j + delta_i(x_j),   i < j.

The skew matrix used for ranks and certificates is built from the same bracket
coefficients: ``S[i][j] = pairing[j][i]`` for i < j.  The generating field of
h_j is sum_a lambda_a(h_j) x_a d_a, i.e. column j of ``pairing``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (
    BadPrime,
    CertificateNotFound,
    DenominatorDivisibleByP,
    DimensionMismatch,
    EigenvalueZero,
    HypothesisFailed,
    InvalidDelta,
    JacobiFailure,
    LengthMismatch,
)
from .exact import check_prime, reduce_raw
from .linalg import hstack, inverse as matrix_inverse, rank as matrix_rank
from .poly import Poly, format_poly, parse_poly, var_names
from .polyvec import (
    PolyVector,
    TorusWeightData,
    divided_power,
    field_from_column,
    log_canonical_matrix,
    rank as bivector_rank,
    wedge_all,
)
from .rootsys import RootSystem, Subexpression, Word


def _scalar(x):
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


@dataclass
class CGLData:
    """Torus pairing data of a Poisson CGL extension in n variables."""

    weights: tuple[tuple[int, ...], ...]
    h: tuple[tuple, ...]
    delta: dict[tuple[int, int], Poly] = field(default_factory=dict)
    prime: int | None = None
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        self.weights = tuple(tuple(int(x) for x in w) for w in self.weights)
        self.h = tuple(tuple(_scalar(x) for x in v) for v in self.h)
        if len(self.weights) != len(self.h):
            raise DimensionMismatch(f"{len(self.weights)} weights but {len(self.h)} h-vectors")
        m = len(self.weights[0]) if self.weights else 0
        if any(len(w) != m for w in self.weights) or any(len(v) != m for v in self.h):
            raise DimensionMismatch("weights and h-vectors must all have length m")
        if self.prime is not None:
            check_prime(self.prime)
        if self.names is None:
            self.names = var_names("x", self.n)
        self.names = tuple(self.names)
        if len(self.names) != self.n:
            raise DimensionMismatch(f"{len(self.names)} names for {self.n} variables")
        clean = {}
        for (i, j), f in self.delta.items():
            if isinstance(f, str):
                f = parse_poly(f, self.names, self.prime)
            elif self.prime is not None and f.p is None:
                f = f.reduce(self.prime)
            if not 0 <= i < j < self.n:
                raise InvalidDelta(f"delta_{i + 1}(x_{j + 1}) needs 1 <= i < j <= n")
            if any(f.depends_on(k) for k in range(self.n) if not i < k < j):
                raise InvalidDelta(f"delta_{i + 1}(x_{j + 1}) = {f} uses variables outside x_{i + 2}..x_{j}")
            if f:
                clean[(i, j)] = f
        self.delta = clean

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def m(self) -> int:
        return len(self.weights[0]) if self.weights else 0

    @property
    def pairing(self) -> list[list]:
        """P[i][j] = lambda_i(h_j)."""
        return [[_scalar(sum(a * b for a, b in zip(w, v))) for v in self.h] for w in self.weights]

    def torus(self) -> TorusWeightData:
        return TorusWeightData(self.weights)

    def bracket_coefficient(self, i: int, j: int):
        """Coefficient of x_i x_j in {x_i, x_j} for i < j."""
        return self.pairing[j][i]

    # -- JSON -----------------------------------------------------------

    def to_json(self) -> dict:
        def enc(x):
            return x if isinstance(x, int) else str(x)

        return {
            "n": self.n,
            "m": self.m,
            "weights": [list(w) for w in self.weights],
            "h": [[enc(x) for x in v] for v in self.h],
            "delta": {f"{i + 1},{j + 1}": format_poly(f) for (i, j), f in sorted(self.delta.items())},
            "prime": self.prime,
            "names": list(self.names),
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> CGLData:
        n = obj.get("n", len(obj["weights"]))
        if len(obj["weights"]) != n:
            raise DimensionMismatch(f"n={n} but {len(obj['weights'])} weights given")
        if "m" in obj and any(len(w) != obj["m"] for w in obj["weights"]):
            raise DimensionMismatch(f"weights do not all have length m={obj['m']}")
        names = tuple(obj["names"]) if obj.get("names") else var_names("x", n)
        prime = obj.get("prime")
        delta = {}
        for key, text in (obj.get("delta") or {}).items():
            i, j = (int(t) - 1 for t in key.split(","))
            delta[(i, j)] = parse_poly(text, names, prime)
        return cls(obj["weights"], obj["h"], delta, prime, names)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> CGLData:
        return cls.from_json(json.loads(text))


def _field(d: CGLData, p: int | None):
    p = d.prime if p is None else check_prime(p)
    return p


def _reduce(x, p):
    return x if p is None else reduce_raw(x, p)


def _check_eigenvalues(d: CGLData, p):
    P = d.pairing
    for i in range(d.n):
        if not _reduce(P[i][i], p):
            raise EigenvalueZero(f"lambda_{i + 1}(h_{i + 1}) vanishes" + (f" mod {p}" if p else ""))


def log_canonical_part(d: CGLData, p: int | None = None) -> PolyVector:
    """pi_0 = sum_{i<j} lambda_j(h_i) x_i x_j d_i ^ d_j."""
    p = _field(d, p)
    P = d.pairing
    x = [Poly.var(i, d.names, p) for i in range(d.n)]
    coeffs = {}
    for i, j in itertools.combinations(range(d.n), 2):
        c = _reduce(P[j][i], p)
        if c:
            coeffs[(i, j)] = (x[i] * x[j]).scalar_mul(c)
    return PolyVector.bivector(coeffs, d.names, p)


def delta_part(d: CGLData, p: int | None = None) -> PolyVector:
    p = _field(d, p)
    coeffs = {ij: (f.reduce(p) if p is not None else f) for ij, f in d.delta.items()}
    return PolyVector.bivector(coeffs, d.names, p)


def assemble_bivector(d: CGLData, p: int | None = None, check: bool = True) -> PolyVector:
    """The Poisson CGL bivector; Jacobi is verified whenever a delta part is present."""
    p = _field(d, p)
    _check_eigenvalues(d, p)
    pi = log_canonical_part(d, p)
    if d.delta:
        pi = pi + delta_part(d, p)
        if check and pi.schouten(pi):
            raise JacobiFailure("[pi, pi] != 0 for the supplied delta")
    return pi


def skew_matrix(d: CGLData, p: int | None = None) -> list[list]:
    """Omega - Omega^T with Omega_ij = lambda_j(h_i) for i < j."""
    p = _field(d, p)
    P = d.pairing
    n = d.n
    s = [[0] * n for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        c = _reduce(P[j][i], p)
        s[i][j] = c
        s[j][i] = -c if p is None else (-c) % p
    return s


# -- Bott-Samelson charts ------------------------------------------------

def bott_samelson_chart(rs: RootSystem, u: Word, gamma: Subexpression | Sequence[bool]) -> tuple[CGLData, TorusWeightData]:
    """CGL data of the chart of Z_u attached to the subexpression gamma.

    With beta_i = gamma^i(a_i) and eps_i = +1 (gamma_i = e) or -1, the bracket is
    {z_i, z_k} = eps_i <beta_i, beta_k> z_i z_k.  Variable z_i has torus weight
    -beta_i, stored in fundamental-weight coordinates; h_i = eps_i (-beta_i)^#
    is stored in simple-coroot coordinates, so lambda_k(h_i) = eps_i <beta_i, beta_k>.
    """
    u = tuple(u)
    if not isinstance(gamma, Subexpression):
        gamma = Subexpression(u, tuple(bool(g) for g in gamma))
    if gamma.word != u:
        if len(gamma.word) != len(u):
            raise LengthMismatch(f"word has length {len(u)}, subexpression {len(gamma.word)}")
        gamma = Subexpression(u, gamma.flips)
    W = rs.weyl
    for i in u:
        rs._check_index(i)
    betas = []
    for k, letter in enumerate(u, start=1):
        betas.append(W.act(gamma.prefix(k), rs.simple_root(letter)))
    eps = gamma.signs()
    weights = [tuple(-c for c in rs.to_fundamental(b)) for b in betas]
    hs = [tuple(-e * c for c in rs.to_coroot(b)) for b, e in zip(betas, eps)]
    for b, e, letter in zip(betas, eps, u):
        assert rs.pairing(b, b) == 2 * rs.d[letter - 1]
    d = CGLData(weights, hs, names=var_names("z", len(u)))
    return d, d.torus()


# -- certificates ---------------------------------------------------------

@dataclass
class PfaffianCandidate:
    sigma: PolyVector
    r: int
    h_indices: tuple[int, ...]
    columns: tuple[tuple, ...]
    pi: PolyVector
    p: int

    @property
    def coefficient(self) -> Poly:
        """f with sigma = f d_1 ^ ... ^ d_n."""
        return self.sigma.top_coefficient()

    @property
    def top_coefficient(self):
        """Coefficient of x_1 ... x_n in f."""
        return self.coefficient.coefficient_of((1,) * self.sigma.nvars)

    @property
    def names(self):
        return self.sigma.names


def monomial_shape_ok(f: Poly) -> bool:
    """Every monomial is x_1...x_n, or has some t_s = 0 with t_j <= 1 for j > s."""
    n = f.nvars
    for e in f.terms:
        if e == (1,) * n:
            continue
        if not any(e[s] == 0 and all(t <= 1 for t in e[s + 1:]) for s in range(n)):
            return False
    return True


def full_rank_verdict(skew: Sequence[Sequence], columns: Sequence[Sequence], p: int | None) -> bool:
    """Matrix path: is [skew | columns] of full row rank n?"""
    n = len(skew)
    cols = [list(c) for c in columns]
    block = [[c[i] for c in cols] for i in range(n)] if cols else [[] for _ in range(n)]
    return matrix_rank(hstack(skew, block) or skew, p) == n


def select_columns(skew: Sequence[Sequence], candidates: Sequence[Sequence], need: int, p: int | None) -> tuple[int, ...]:
    """Greedy smallest-first choice of `need` candidate columns completing skew to rank n."""
    n = len(skew)
    chosen: list[int] = []
    current = matrix_rank(skew, p) if n else 0
    for j, col in enumerate(candidates):
        if len(chosen) == need:
            break
        trial = [candidates[k] for k in chosen] + [col]
        r = matrix_rank(hstack(skew, [[c[i] for c in trial] for i in range(n)]), p)
        if r > current:
            chosen.append(j)
            current = r
    if len(chosen) == need and current == n:
        return tuple(chosen)
    for combo in itertools.combinations(range(len(candidates)), need):
        if full_rank_verdict(skew, [candidates[k] for k in combo], p):
            return combo
    raise CertificateNotFound("no choice of generating fields completes the skew matrix to full rank")


def theorem_c_certificate(d: CGLData, p: int) -> PfaffianCandidate:
    """Build sigma = pi^[r] ^ d_{h_i1} ^ ... with 2r = rank(pi_0) and a nonzero x_1...x_n term."""
    p = check_prime(p)
    pi = assemble_bivector(d, p)
    pi0 = log_canonical_part(d, p)
    r2 = bivector_rank(pi0)
    if d.delta and bivector_rank(pi) != r2:
        raise HypothesisFailed(f"rank(pi) = {bivector_rank(pi)} differs from rank(pi_0) = {r2}")
    skew = skew_matrix(d, p)
    assert matrix_rank(skew, p) == r2
    n = d.n
    r = r2 // 2
    P = d.pairing
    candidates = [[_reduce(P[a][j], p) for a in range(n)] for j in range(n)]
    idx = select_columns(skew, candidates, n - r2, p)
    cols = tuple(tuple(candidates[j]) for j in idx)
    fields = [field_from_column(c, d.names, p) for c in cols]
    sigma = divided_power(pi, r).wedge(wedge_all(fields, d.names, p)) if fields else divided_power(pi, r)
    cand = PfaffianCandidate(sigma, r, idx, cols, pi, p)
    if sigma.degree != n or not cand.top_coefficient:
        raise CertificateNotFound("selected fields give a Pfaffian without an x_1...x_n term")
    if not monomial_shape_ok(cand.coefficient):
        raise CertificateNotFound("Pfaffian coefficient has an unexpected monomial shape")
    return cand


def wedge_nonvanishing_oracle(d: CGLData | Sequence[Sequence], columns: Sequence[Sequence], p: int | None = None) -> bool:
    """Exterior-algebra path: is pi_0^[r] ^ v_1 ^ ... ^ v_{n-2r} nonzero in wedge^n V?

    ``d`` is CGL data or directly the constant skew matrix Omega - Omega^T.
    """
    if isinstance(d, CGLData):
        p = _field(d, p)
        skew = skew_matrix(d, p)
    else:
        skew = [[_reduce(x, p) for x in row] for row in d]
    n = len(skew)
    names = var_names("e", n)
    coeffs = {(i, j): Poly.const(skew[i][j], names, p) for i, j in itertools.combinations(range(n), 2) if skew[i][j]}
    pi0 = PolyVector.bivector(coeffs, names, p)
    r = bivector_rank(pi0) // 2
    if len(columns) != n - 2 * r:
        raise DimensionMismatch(f"need {n - 2 * r} columns, got {len(columns)}")
    vs = []
    for col in columns:
        if len(col) != n:
            raise DimensionMismatch(f"column of length {len(col)} in dimension {n}")
        terms = {(a,): Poly.const(_reduce(c, p), names, p) for a, c in enumerate(col) if _reduce(c, p)}
        vs.append(PolyVector(terms, 1, names, p))
    top = divided_power(pi0, r).wedge(wedge_all(vs, names, p))
    return not top.is_zero()


# -- basic affine space ------------------------------------------------------

def coroot_gram(rs: RootSystem) -> list[list[Fraction]]:
    """<a_j^vee, a_l^vee> = <a_j, a_l> / (d_j d_l)."""
    n = rs.rank
    return [[Fraction(rs.gram[j][l], rs.d[j] * rs.d[l]) for l in range(n)] for j in range(n)]


def inverse_gram(rs: RootSystem) -> list[list[Fraction]]:
    """A_0 = sum_k H_k (x) H_k in simple-coroot coordinates."""
    return matrix_inverse(coroot_gram(rs), None)


def mixed_product_bivector(piQ: PolyVector, a0: Sequence[Sequence], z_weights: TorusWeightData, m: int, t_names: Sequence[str] | None = None) -> PolyVector:
    """0 x_{A_0} pi_Q on (t_1..t_m, z_1..z_n).

    The mixed part is sum_{j,i} c_ji t_j z_i d_{t_j} ^ d_{z_i} with
    c_ji = sum_l A0[j][l] lambda_i[l], lambda_i the weight of z_i.
    """
    n = piQ.nvars
    p = piQ.p
    if len(a0) != m or any(len(row) != m for row in a0):
        raise DimensionMismatch(f"A0 must be {m} x {m}")
    if z_weights.n != n or (n and z_weights.m != m):
        raise DimensionMismatch("z weights do not match the chart")
    for j in range(m):
        for l in range(m):
            if a0[j][l] != a0[l][j]:
                raise ValueError("A0 must be symmetric")
    t_names = tuple(t_names) if t_names is not None else var_names("t", m)
    names = t_names + piQ.names
    out = piQ.embed(names, list(range(m, m + n)))
    coeffs = {}
    for j in range(m):
        tj = Poly.var(j, names, p)
        for i in range(n):
            c = sum((Fraction(a0[j][l]) * z_weights.weights[i][l] for l in range(m)), Fraction(0))
            c = _scalar(c) if p is None else reduce_raw(c, p)
            if c:
                coeffs[(j, m + i)] = (tj * Poly.var(m + i, names, p)).scalar_mul(c)
    return out + PolyVector.bivector(coeffs, names, p)


@dataclass
class GUChart:
    pi: PolyVector
    weights: TorusWeightData
    word: Word
    m: int
    n: int


def gu_chart(rs: RootSystem, p: int | None = None, a0: Sequence[Sequence] | None = None) -> GUChart:
    """Big-cell chart of G/U: variables (t_1..t_m, z_1..z_n), n = length of w0."""
    word = rs.weyl.longest_element
    d, wd = bott_samelson_chart(rs, word, [False] * len(word))
    m = rs.rank
    if a0 is None:
        a0 = inverse_gram(rs)
        if p is not None:
            try:
                [[reduce_raw(x, p) for x in row] for row in a0]
            except DenominatorDivisibleByP as exc:
                raise BadPrime(f"p={p} divides a denominator of the inverse Gram matrix") from exc
    piQ = log_canonical_part(d, p)
    pi = mixed_product_bivector(piQ, a0, wd, m)
    t_weights = TorusWeightData(tuple(tuple(int(k == j) for k in range(m)) for j in range(m)))
    return GUChart(pi, t_weights.extend(wd), word, m, len(word))


def gu_chart_pfaffian(rs: RootSystem, p: int, a0: Sequence[Sequence] | None = None, r: int | None = None) -> PfaffianCandidate:
    """sigma = pi^[r] ^ (torus fields t_j d_{t_j}, then chart generating fields) on G/U.

    ``r`` defaults to half the rank of the full bivector; the fields are chosen
    greedily among t_1 d_{t_1}, ..., t_m d_{t_m}, then the generating fields of
    the Bott-Samelson h_i, so that the certificate matrix has full rank.
    """
    p = check_prime(p)
    chart = gu_chart(rs, p, a0)
    pi = chart.pi
    m, n = chart.m, chart.n
    N = m + n
    skew = log_canonical_matrix(pi) if pi.terms else [[0] * N for _ in range(N)]
    r2 = bivector_rank(pi) if r is None else 2 * r
    word = chart.word
    d, _ = bott_samelson_chart(rs, word, [False] * n)
    P = d.pairing
    candidates = [[int(k == j) for k in range(N)] for j in range(m)]
    candidates += [[0] * m + [reduce_raw(P[a][i], p) for a in range(n)] for i in range(n)]
    need = N - r2
    if need < 0:
        raise CertificateNotFound(f"r = {r2 // 2} exceeds half the number of variables")
    idx = select_columns(skew, candidates, need, p) if r is None else tuple(range(need))
    cols = tuple(tuple(candidates[j]) for j in idx)
    fields = [field_from_column(c, pi.names, p) for c in cols]
    sigma = divided_power(pi, r2 // 2)
    if fields:
        sigma = sigma.wedge(wedge_all(fields, pi.names, p))
    cand = PfaffianCandidate(sigma, r2 // 2, idx, cols, pi, p)
    if sigma.degree != N or not cand.top_coefficient:
        raise CertificateNotFound("G/U Pfaffian has no t_1...t_m z_1...z_n term")
    return cand
