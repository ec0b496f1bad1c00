"""Exact arithmetic in L = Q(sqrt2, sqrtq, i) and its subfield K = Q(sqrt2, sqrt(-q)).

Elements are stored as 8 rational coordinates over the product basis

    index  0   1     2     3       4   5      6      7
           1   √2    √q    √(2q)   i   i√2    i√q    i√(2q)

so bit 0 of the index marks √2, bit 1 marks √q and bit 2 marks i.
K is the span of indices 0, 1, 6, 7.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

NAMES = ("1", "√2", "√q", "√2q", "i", "i√2", "i√q", "i√2q")
K_INDICES = (0, 1, 6, 7)
_NON_K = (2, 3, 4, 5)


class FieldMismatch(ValueError):
    pass


class SubfieldError(ValueError):
    """A degree-4 operation received an element outside K."""


def _basis_product(a: int, b: int, q: int) -> tuple[int, int]:
    c = 1
    if a & b & 1:
        c *= 2
    if a & b & 2:
        c *= q
    if a & b & 4:
        c = -c
    return c, a ^ b


@dataclass(frozen=True)
class FieldElement:
    q: int
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coords) != 8:
            raise ValueError("a FieldElement needs exactly 8 coordinates")
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    @classmethod
    def zero(cls, q: int) -> FieldElement:
        return cls(q, (0,) * 8)

    @classmethod
    def one(cls, q: int) -> FieldElement:
        return cls.basis(q, 0)

    @classmethod
    def basis(cls, q: int, index: int) -> FieldElement:
        c = [0] * 8
        c[index] = 1
        return cls(q, tuple(c))

    @classmethod
    def from_dict(cls, q: int, terms: dict[int, object]) -> FieldElement:
        c = [Fraction(0)] * 8
        for k, v in terms.items():
            c[k] = Fraction(v)
        return cls(q, tuple(c))

    def _check(self, other: FieldElement):
        if self.q != other.q:
            raise FieldMismatch(f"elements of different fields (q={self.q} vs q={other.q})")

    def _coerce(self, other) -> FieldElement | None:
        if isinstance(other, FieldElement):
            self._check(other)
            return other
        if isinstance(other, (int, Rational)):
            return FieldElement(self.q, (other,) + (0,) * 7)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.q, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.q, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, FieldElement):
            f = Fraction(other)
            return FieldElement(self.q, tuple(a * f for a in self.coords))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return mul(self, o)

    __rmul__ = __mul__

    def conj(self) -> FieldElement:
        return conj(self)

    def in_K(self) -> bool:
        return all(self.coords[k] == 0 for k in _NON_K)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self):
        parts = []
        for c, name in zip(self.coords, NAMES):
            if c == 0:
                continue
            parts.append(str(c) if name == "1" else f"{c}*{name}")
        return " + ".join(parts) if parts else "0"


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    a._check(b)
    out = [Fraction(0)] * 8
    for ia, ca in enumerate(a.coords):
        if not ca:
            continue
        for ib, cb in enumerate(b.coords):
            if not cb:
                continue
            s, k = _basis_product(ia, ib, a.q)
            out[k] += s * ca * cb
    return FieldElement(a.q, tuple(out))


def conj(a: FieldElement) -> FieldElement:
    """Complex conjugation: flips the sign of the four ``i`` coordinates."""
    return FieldElement(a.q, tuple(-c if k & 4 else c for k, c in enumerate(a.coords)))


def trace_Q(a: FieldElement, degree: int) -> Fraction:
    """Absolute trace. Every non-identity basis element has trace zero."""
    if degree == 4:
        if not a.in_K():
            raise SubfieldError(f"degree-4 trace of an element outside K: {a}")
    elif degree != 8:
        raise ValueError(f"degree must be 4 or 8, got {degree}")
    return degree * a.coords[0]


def alpha_basis(q: int) -> list[FieldElement]:
    """Integral basis 1, √2, (1+i√q)/2, (√2+i√2q)/2 of the ring of integers of K."""
    if q % 8 != 3:
        raise ValueError(f"integral basis needs q = 3 mod 8, got q={q}")
    h = Fraction(1, 2)
    return [
        FieldElement.from_dict(q, {0: 1}),
        FieldElement.from_dict(q, {1: 1}),
        FieldElement.from_dict(q, {0: h, 6: h}),
        FieldElement.from_dict(q, {1: h, 7: h}),
    ]


def assemble(x: Sequence[int], q: int) -> FieldElement:
    """Element sum(x_i * alpha_i) of K from integral coordinates."""
    if len(x) != 4:
        raise ValueError("integral coordinates have length 4")
    out = FieldElement.zero(q)
    for xi, a in zip(x, alpha_basis(q)):
        out = out + a * xi
    return out


def integral_coords(a: FieldElement) -> tuple[int, int, int, int]:
    """Inverse of :func:`assemble`; raises if ``a`` is not in the ring of integers."""
    if not a.in_K():
        raise SubfieldError(f"{a} is not in K")
    c0, c1, c6, c7 = (a.coords[k] for k in K_INDICES)
    x3, x4 = 2 * c6, 2 * c7
    x1, x2 = c0 - x3 / 2, c1 - x4 / 2
    xs = (x1, x2, x3, x4)
    if any(v.denominator != 1 for v in xs):
        raise ValueError(f"{a} is not in the ring of integers of K")
    return tuple(int(v) for v in xs)


def trace_form(x: Sequence[int], q: int) -> int:
    """Tr_{K/Q}(x * conj(x)) for x given in integral coordinates (closed form)."""
    x1, x2, x3, x4 = x
    return (2 * x1 + x3) ** 2 + 2 * (2 * x2 + x4) ** 2 + q * (x3 * x3 + 2 * x4 * x4)


def _embeddings(degree: int) -> list[tuple[int, int]]:
    # (sign of √2, sign of √q) for the embeddings sending i -> +i; their
    # conjugates complete the set.
    if degree == 4:
        return [(1, 1), (-1, 1)]
    if degree == 8:
        return [(1, 1), (-1, 1), (1, -1), (-1, -1)]
    raise ValueError(f"degree must be 4 or 8, got {degree}")


def complex_embeddings(a: FieldElement, degree: int) -> list[complex]:
    if degree == 4 and not a.in_K():
        raise SubfieldError(f"{a} is not in K")
    r2, rq = math.sqrt(2), math.sqrt(a.q)
    out = []
    for s2, sq in _embeddings(degree):
        z = 0j
        for k, c in enumerate(a.coords):
            if not c:
                continue
            t = complex(float(c))
            if k & 1:
                t *= s2 * r2
            if k & 2:
                t *= sq * rq
            if k & 4:
                t *= 1j
            z += t
        out.append(z)
    return out


def embed_canonical(a: FieldElement, degree: int) -> list[float]:
    """Approximate canonical embedding (Re s1, Im s1, ..., Re sr, Im sr).

    Floating point; never used to certify anything.
    """
    out = []
    for z in complex_embeddings(a, degree):
        out.extend((z.real, z.imag))
    return out


def linear_combination(coeffs: Iterable, elems: Sequence[FieldElement]) -> FieldElement:
    out = None
    for c, e in zip(coeffs, elems):
        term = e * c
        out = term if out is None else out + term
    if out is None:
        raise ValueError("empty combination")
    return out
