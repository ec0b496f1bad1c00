"""Exact lattice certification: determinants, short vectors, isometries.

Everything here works on exact rational Gram matrices. No floating point is
involved in any result.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import floor, ceil, isqrt, lcm
from typing import Sequence

log = logging.getLogger(__name__)

MAX_DIM = 8


class NotPositiveDefinite(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class NotIsometric(Exception):
    """The two forms are certified not isometric (up to the rational scale)."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)


class SearchExhausted(Exception):
    """The isometry search hit its node budget before deciding."""


@dataclass(frozen=True)
class GramMatrix:
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(v) for v in row) for row in self.entries)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("Gram matrix must be square")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def of(cls, m) -> GramMatrix:
        return m if isinstance(m, GramMatrix) else cls(tuple(tuple(r) for r in m))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def rows(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]

    def is_symmetric(self) -> bool:
        n = self.n
        return all(self.entries[i][j] == self.entries[j][i]
                   for i in range(n) for j in range(i + 1, n))

    def scaled(self, c) -> GramMatrix:
        c = Fraction(c)
        return GramMatrix(tuple(tuple(v * c for v in r) for r in self.entries))

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for r in self.entries for v in r)

    def norm(self, x: Sequence[int]) -> Fraction:
        return inner(self, x, x)

    def __str__(self):
        return "\n".join(" ".join(f"{str(v):>6}" for v in r) for r in self.entries)


def inner(G: GramMatrix, x: Sequence[int], y: Sequence[int]) -> Fraction:
    n = G.n
    return sum((x[i] * G.entries[i][j] * y[j] for i in range(n) for j in range(n)
                if x[i] and y[j]), Fraction(0))


# -- exact matrix helpers ---------------------------------------------------

def mat_mul(A, B) -> list[list]:
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def transpose(A) -> list[list]:
    return [list(c) for c in zip(*A)]


def congruence(U, G) -> GramMatrix:
    """U G U^T."""
    G = GramMatrix.of(G)
    return GramMatrix.of(mat_mul(mat_mul(U, G.rows()), transpose(U)))


def block_diag(*blocks) -> GramMatrix:
    blocks = [GramMatrix.of(b) for b in blocks]
    n = sum(b.n for b in blocks)
    out = [[Fraction(0)] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i in range(b.n):
            for j in range(b.n):
                out[off + i][off + j] = b[i, j]
        off += b.n
    return GramMatrix.of(out)


def _integer_scaled(G: GramMatrix) -> tuple[list[list[int]], int]:
    d = lcm(*(v.denominator for r in G.entries for v in r))
    return [[int(v * d) for v in r] for r in G.entries], d


def bareiss_det(M: Sequence[Sequence[int]]) -> int:
    """Fraction-free determinant of an integer matrix."""
    A = [list(r) for r in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def det_exact(G) -> Fraction:
    """Exact determinant of a rational square matrix."""
    G = GramMatrix.of(G)
    M, d = _integer_scaled(G)
    return Fraction(bareiss_det(M), d ** G.n)


def leading_minors(G) -> list[Fraction]:
    G = GramMatrix.of(G)
    return [det_exact([r[:k] for r in G.entries[:k]]) for k in range(1, G.n + 1)]


def is_positive_definite(G) -> bool:
    G = GramMatrix.of(G)
    return G.is_symmetric() and all(m > 0 for m in leading_minors(G))


def fincke_pohst_form(G: GramMatrix) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Rational LDL^T in the form used by Fincke-Pohst.

    Returns ``(d, mu)`` with
    ``x^T G x = sum_i d[i] * (x[i] + sum_{j>i} mu[i][j] * x[j])**2``.
    """
    n = G.n
    Q = G.rows()
    for i in range(n):
        if Q[i][i] <= 0:
            raise NotPositiveDefinite("Gram matrix is not positive definite")
        for j in range(i + 1, n):
            Q[j][i] = Q[i][j]
            Q[i][j] = Q[i][j] / Q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                Q[k][l] -= Q[k][i] * Q[i][l]
    d = [Q[i][i] for i in range(n)]
    mu = [[Q[i][j] if j > i else Fraction(0) for j in range(n)] for i in range(n)]
    return d, mu


def _isqrt_ceil_fraction(s: Fraction) -> int:
    """Some integer r >= sqrt(s); at most 2 above the exact ceiling."""
    if s <= 0:
        return 0
    f = s.numerator // s.denominator + 1
    r = isqrt(f)
    return r + 1


def enumerate_short(G, bound, *, both_signs: bool = False) -> list[tuple[tuple[int, ...], Fraction]]:
    """All nonzero integer x with x^T G x <= bound.

    By default one representative per +-pair is returned (the last nonzero
    coordinate is positive). Output is sorted by norm, then lexicographically.
    """
    G = GramMatrix.of(G)
    n = G.n
    if n > MAX_DIM:
        raise ValueError(f"enumeration supports n <= {MAX_DIM}")
    d, mu = fincke_pohst_form(G)
    bound = Fraction(bound)
    x = [0] * n
    out = []

    def rec(i: int, remaining: Fraction, all_zero: bool):
        c = -sum((mu[i][j] * x[j] for j in range(i + 1, n) if x[j]), Fraction(0))
        r = _isqrt_ceil_fraction(remaining / d[i])
        lo, hi = floor(c) - r, ceil(c) + r
        if all_zero:
            lo = max(lo, 0)
        for v in range(lo, hi + 1):
            t = v - c
            left = remaining - d[i] * t * t
            if left < 0:
                continue
            x[i] = v
            if i == 0:
                if not (all_zero and v == 0):
                    out.append((tuple(x), bound - left))
            else:
                rec(i - 1, left, all_zero and v == 0)
        x[i] = 0

    rec(n - 1, bound, True)
    if both_signs:
        out += [(tuple(-a for a in v), nv) for v, nv in out]
    out.sort(key=lambda p: (p[1], p[0]))
    return out


@dataclass(frozen=True)
class ShortVectorSet:
    gram: GramMatrix
    min_norm: Fraction
    vectors: tuple[tuple[int, ...], ...]

    @property
    def kissing(self) -> int:
        return 2 * len(self.vectors)


def shortest_vectors(G) -> ShortVectorSet:
    """Exact minimum and all minimal vectors (one per +-pair) by enumeration."""
    G = GramMatrix.of(G)
    if not is_positive_definite(G):
        raise NotPositiveDefinite("Gram matrix is not positive definite")
    bound = min(G[i, i] for i in range(G.n))
    vecs = enumerate_short(G, bound)
    m = vecs[0][1]
    return ShortVectorSet(G, m, tuple(v for v, nv in vecs if nv == m))


def lll_reduce(G, delta=Fraction(3, 4)) -> tuple[list[list[int]], GramMatrix]:
    """Exact LLL on a Gram matrix.

    Returns ``(V, R)`` with ``V`` unimodular and ``R = V G V^T`` reduced.
    Only used internally to shorten the isometry search.
    """
    G = GramMatrix.of(G)
    n = G.n
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    A = G.rows()

    def row_op(k, j, c):
        # b_k -= c * b_j, applied to V and to the Gram matrix
        V[k] = [a - c * b for a, b in zip(V[k], V[j])]
        for t in range(n):
            A[k][t] -= c * A[j][t]
        for t in range(n):
            A[t][k] -= c * A[t][j]

    def swap(k):
        V[k], V[k - 1] = V[k - 1], V[k]
        A[k], A[k - 1] = A[k - 1], A[k]
        for row in A:
            row[k], row[k - 1] = row[k - 1], row[k]

    def gso():
        mu = [[Fraction(0)] * n for _ in range(n)]
        B = [Fraction(0)] * n
        for i in range(n):
            for j in range(i):
                mu[i][j] = (A[i][j] - sum(mu[j][t] * mu[i][t] * B[t] for t in range(j))) / B[j]
            B[i] = A[i][i] - sum(mu[i][t] ** 2 * B[t] for t in range(i))
            if B[i] <= 0:
                raise NotPositiveDefinite("Gram matrix is not positive definite")
        return mu, B

    k = 1
    while k < n:
        mu, B = gso()
        for j in range(k - 1, -1, -1):
            c = round(mu[k][j])
            if c:
                row_op(k, j, c)
                mu, B = gso()
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            swap(k)
            k = max(k - 1, 1)
    return V, GramMatrix.of(A)


def _inverse_unimodular(V) -> list[list[int]]:
    n = len(V)
    M = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(V)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [v / piv for v in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    inv = [[M[i][n + j] for j in range(n)] for i in range(n)]
    if any(v.denominator != 1 for row in inv for v in row):
        raise ValueError("matrix is not unimodular")
    return [[int(v) for v in row] for row in inv]


@dataclass(frozen=True)
class IsometryWitness:
    """``target == (1/scale) * U * source * U^T`` with ``|det U| == 1``."""
    U: tuple[tuple[int, ...], ...]
    scale: Fraction

    def check(self, source, target) -> bool:
        source, target = GramMatrix.of(source), GramMatrix.of(target)
        if abs(bareiss_det(self.U)) != 1:
            return False
        return congruence(self.U, source).scaled(1 / self.scale) == target


def _match_basis(S: GramMatrix, want: list[list[Fraction]], max_nodes: int):
    """Backtracking: rows x_i with x_i^T S x_k == want[i][k] for all i, k."""
    n = S.n
    needed = {want[i][i] for i in range(n)}
    Sint, dS = _integer_scaled(S)
    by_norm: dict[Fraction, list] = {nv: [] for nv in needed}
    for v, nv in enumerate_short(S, max(needed), both_signs=True):
        if nv in by_norm:
            Sv = [sum(Sint[a][b] * v[b] for b in range(n)) for a in range(n)]
            by_norm[nv].append((v, Sv))
    for nv in by_norm:
        by_norm[nv].sort(key=lambda p: p[0])
    want_int = [[w * dS for w in row] for row in want]

    chosen: list = []
    nodes = 0

    def rec(i: int) -> bool:
        nonlocal nodes
        if i == n:
            return True
        for v, Sv in by_norm[want[i][i]]:
            nodes += 1
            if nodes > max_nodes:
                raise SearchExhausted(f"isometry search exceeded {max_nodes} nodes")
            if all(sum(a * b for a, b in zip(v, chosen[k][1])) == want_int[i][k]
                   for k in range(i)):
                chosen.append((v, Sv))
                if rec(i + 1):
                    return True
                chosen.pop()
        return False

    found = rec(0)
    log.debug("isometry search visited %d nodes", nodes)
    return [list(v) for v, _ in chosen] if found else None


def find_isometry(source, target, *, max_nodes: int = 2_000_000) -> IsometryWitness:
    """Find unimodular U and rational scale with target = (1/scale) U source U^T.

    The scale is fixed as min(source) / min(target). Both forms are first
    LLL-reduced; the reduced target's basis vectors are then matched one at
    a time to source vectors of the right norm whose inner products with
    the earlier choices agree, trying candidates lexicographically.
    Raises :class:`NotIsometric` once the tree is exhausted and
    :class:`SearchExhausted` if ``max_nodes`` is exceeded first.
    """
    S, T = GramMatrix.of(source), GramMatrix.of(target)
    if S.n != T.n:
        raise DimensionMismatch(f"dimension {S.n} vs {T.n}")
    n = S.n
    ss, st = shortest_vectors(S), shortest_vectors(T)
    scale = ss.min_norm / st.min_norm
    if ss.kissing != st.kissing:
        raise NotIsometric(f"kissing numbers differ ({ss.kissing} vs {st.kissing})")
    if det_exact(S) != scale ** n * det_exact(T):
        raise NotIsometric("determinants differ after rescaling")

    W, Sr = lll_reduce(S)
    V, Tr = lll_reduce(T)
    want = [[Tr[i, k] * scale for k in range(n)] for i in range(n)]
    X = _match_basis(Sr, want, max_nodes)
    if X is None:
        raise NotIsometric("backtracking search exhausted")
    # Tr = (1/scale) X Sr X^T, Sr = W S W^T, Tr = V T V^T
    U = mat_mul(_inverse_unimodular(V), mat_mul(X, W))
    w = IsometryWitness(tuple(tuple(int(a) for a in row) for row in U), scale)
    if not w.check(S, T):
        raise AssertionError("isometry witness failed exact verification")
    return w


def center_density_from_gram(G) -> tuple[Fraction, Fraction]:
    """Center density ``(min/4)^(n/2) / sqrt(det)`` as ``(a, b)`` meaning ``a / sqrt(b)``.

    ``b`` is reduced to 1 when the determinant makes the expression rational.
    """
    G = GramMatrix.of(G)
    m = shortest_vectors(G).min_norm
    n = G.n
    num = (m / 4) ** (n // 2)
    if n % 2:
        raise ValueError("odd dimension not supported")
    det = det_exact(G)
    return reduce_radical(num, det)


def reduce_radical(coef: Fraction, radicand: Fraction) -> tuple[Fraction, Fraction]:
    """Write ``coef / sqrt(radicand)`` with the radicand square-free as far as possible."""
    coef, radicand = Fraction(coef), Fraction(radicand)
    # make the radicand an integer: 1/sqrt(a/b) = sqrt(b)/sqrt(a) = sqrt(a*b)/a
    a, b = radicand.numerator, radicand.denominator
    coef = coef / a
    rad = a * b
    # coef / sqrt(radicand) == coef * sqrt(rad)  (with the division above)
    s = isqrt(rad)
    if s * s == rad:
        return coef * s, Fraction(1)
    # pull out square factors
    f, rest = 1, rad
    p = 2
    while p * p <= rest:
        while rest % (p * p) == 0:
            rest //= p * p
            f *= p
        p += 1
    # value = coef * f * sqrt(rest) = (coef * f * rest) / sqrt(rest)
    return coef * f * rest, Fraction(rest)
