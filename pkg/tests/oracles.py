"""Independent brute-force oracles used by the tests.

None of these call into the enumeration, elimination or CRT code they check.
"""

from fractions import Fraction
from math import isqrt

import numpy as np
import sympy as sp


def brute_sqrt_mod(a, n):
    return [r for r in range(n) if (r * r - a) % n == 0]


def brute_j(q):
    for j in range(q):
        if (j * j + 2) % q == 0:
            return j
    return None


def brute_admissible(q):
    """Admissibility straight from the definition, using sympy for factoring."""
    if q % 8 != 3:
        return False
    f = sp.factorint(q)
    if any(e > 1 for e in f.values()):
        return False
    return all(p % 8 in (1, 3) for p in f)


def sympy_det(M):
    return Fraction(str(sp.Matrix([[sp.Rational(str(v)) for v in r] for r in M]).det()))


def _rows(G):
    return G.entries if hasattr(G, "entries") else G


def certified_bounds(G, R):
    """|x_i| <= sqrt(R * (G^-1)_ii) for every x with x^T G x <= R."""
    M = sp.Matrix([[sp.Rational(str(v)) for v in r] for r in _rows(G)])
    Mi = M.inv()
    out = []
    for i in range(M.rows):
        v = sp.Rational(str(R)) * Mi[i, i]
        out.append(isqrt(int(sp.floor(v))))
    return out


def box_minimal_vectors(G, bounds):
    """Minimum and all minimal vectors (both signs) over a coefficient box.

    ``bounds`` is either an int B (box [-B, B]^n) or a per-coordinate list.
    """
    rows = _rows(G)
    n = len(rows)
    if isinstance(bounds, int):
        bounds = [bounds] * n
    den = 1
    for r in rows:
        for v in r:
            den = np.lcm(den, Fraction(v).denominator)
    Gi = np.array([[int(Fraction(v) * den) for v in r] for r in rows], dtype=np.int64)

    split = 2 if n > 4 else 0
    ranges = [np.arange(-b, b + 1) for b in bounds]
    tail = np.array(np.meshgrid(*ranges[split:], indexing="ij")).reshape(n - split, -1).T
    heads = np.array(np.meshgrid(*ranges[:split], indexing="ij")).reshape(split, -1).T \
        if split else np.zeros((1, 0), dtype=np.int64)

    best, found = None, []
    big = np.iinfo(np.int64).max
    for h in heads:
        X = np.empty((len(tail), n), dtype=np.int64)
        X[:, :split] = h
        X[:, split:] = tail
        N = np.einsum("ij,ij->i", X @ Gi, X)
        N[~X.any(axis=1)] = big
        m = N.min()
        if best is None or m < best:
            best, found = m, [X[N == m]]
        elif m == best:
            found.append(X[N == m])
    vecs = {tuple(int(a) for a in v) for v in np.concatenate(found)}
    return Fraction(int(best), den), vecs


def both_signs(vectors):
    out = set()
    for v in vectors:
        out.add(tuple(v))
        out.add(tuple(-a for a in v))
    return out


def sympy_element(coords, q):
    """A FieldElement's value as a sympy expression."""
    s2, sq, i = sp.sqrt(2), sp.sqrt(q), sp.I
    basis = [1, s2, sq, s2 * sq, i, i * s2, i * sq, i * s2 * sq]
    return sum(sp.Rational(c.numerator, c.denominator) * b for c, b in zip(coords, basis))
