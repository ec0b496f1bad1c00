"""Z-modules in K and L: M_{j,q}, the doubled module, Gram matrices and density."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactnum import AdmissibleQ
from .fieldelem import (FieldElement, alpha_basis, conj, integral_coords, mul,
                        trace_Q)
from .latanalysis import GramMatrix, bareiss_det, reduce_radical


class DegenerateInput(ValueError):
    pass


@dataclass(frozen=True)
class ModuleBasis:
    q: int
    degree: int
    elements: tuple[FieldElement, ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if self.degree not in (4, 8):
            raise ValueError(f"degree must be 4 or 8, got {self.degree}")
        if len(self.elements) != self.degree:
            raise ValueError(f"{self.label or 'basis'}: expected {self.degree} elements, "
                             f"got {len(self.elements)}")
        for e in self.elements:
            if e.q != self.q:
                raise ValueError("basis elements belong to a different field")
            if self.degree == 4 and not e.in_K():
                raise ValueError(f"degree-4 basis element {e} lies outside K")

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]


def mjq_basis(aq: AdmissibleQ) -> ModuleBasis:
    """z1 = a1 - 2 a3, z2 = a2 + 2j a3, z3 = q a3, z4 = j a3 + a4."""
    q, j = aq.q, aq.j
    a1, a2, a3, a4 = alpha_basis(q)
    z = (a1 - a3 * 2, a2 + a3 * (2 * j), a3 * q, a3 * j + a4)
    return ModuleBasis(q, 4, z, "M_{j,q}")


def mjq_contains(x: Sequence[int], aq: AdmissibleQ) -> bool:
    x1, x2, x3, x4 = x
    return (x3 - (-2 * x1 + aq.j * (2 * x2 + x4))) % aq.q == 0


def gram(basis: ModuleBasis) -> GramMatrix:
    """Entry (i, k) is half the trace of e_i * conj(e_k)."""
    els = basis.elements
    cj = [conj(e) for e in els]
    n = len(els)
    G = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for k in range(i, n):
            v = trace_Q(mul(els[i], cj[k]), basis.degree) / 2
            G[i][k] = G[k][i] = v
    return GramMatrix.of(G)


def coefficient_matrix(basis: ModuleBasis) -> list[tuple[int, int, int, int]]:
    """Rows are the integral-basis coordinates of each element."""
    if basis.degree != 4:
        raise ValueError("index is only defined for degree-4 bases")
    return [integral_coords(e) for e in basis]


def index_in_ring(basis: ModuleBasis) -> int:
    """[O_K : M] as |det| of the coefficient matrix over the integral basis."""
    d = abs(bareiss_det(coefficient_matrix(basis)))
    if d == 0:
        raise DegenerateInput("basis elements are linearly dependent")
    return d


def doubled_basis(b: ModuleBasis) -> ModuleBasis:
    """{z1..z4, i z1..i z4} viewed inside L."""
    if b.degree != 4:
        raise ValueError("doubled_basis needs a degree-4 basis")
    i = FieldElement.basis(b.q, 4)
    return ModuleBasis(b.q, 8, tuple(b) + tuple(mul(i, z) for z in b), "S")


@dataclass(frozen=True)
class CenterDensity:
    """Exact value ``coef / sqrt(radicand)``; ``radicand == 1`` means rational."""
    coef: Fraction
    radicand: Fraction = Fraction(1)

    @property
    def is_rational(self) -> bool:
        return self.radicand == 1

    @property
    def value(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("center density is irrational")
        return self.coef

    def __float__(self):
        return float(self.coef) / float(self.radicand) ** 0.5

    def __str__(self):
        if self.is_rational:
            return str(self.coef)
        return f"{self.coef}/sqrt({self.radicand})"


def center_density(min_norm, disc: int, index: int, n: int) -> CenterDensity:
    """(min Tr(x conj x))^(n/2) / (2^n * sqrt(|disc|) * index).

    ``min_norm`` is the minimum of the trace form (twice the Gram minimum).
    """
    min_norm = Fraction(min_norm)
    if min_norm <= 0 or disc == 0 or index <= 0:
        raise DegenerateInput("center density needs positive min_norm, disc, index")
    if n not in (4, 8):
        raise ValueError(f"n must be 4 or 8, got {n}")
    coef = min_norm ** (n // 2) / (2 ** n * index)
    c, r = reduce_radical(coef, Fraction(abs(disc)))
    return CenterDensity(c, r)


def discriminant_K(q: int) -> int:
    """Disc of Q(sqrt2, sqrt(-q)) for square-free q = 3 mod 8."""
    return 64 * q * q
