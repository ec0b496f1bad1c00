"""D4, D4+D4, D8 and E8 from M_{j,q} and its triquadratic extensions.

The pipeline is: pick (q, j), build the z-basis of M_{j,q}, change to a
w-basis whose Gram matrix is q*G1, then form the degree-8 bases and compare
their Gram matrices with the classical ones.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Optional

from .exactnum import AdmissibleQ, InvalidQ, NotSquarefree, factor, find_j
from .fieldelem import FieldElement, linear_combination, mul
from .latanalysis import (GramMatrix, IsometryWitness, NotIsometric,
                          SearchExhausted, block_diag,
                          center_density_from_gram, det_exact, find_isometry,
                          shortest_vectors)
from .zmodule import (CenterDensity, ModuleBasis, center_density,
                      discriminant_K, doubled_basis, gram, index_in_ring,
                      mjq_basis)

log = logging.getLogger(__name__)

G1 = GramMatrix.of([
    [2, 0, -1, 0],
    [0, 2, -1, 0],
    [-1, -1, 2, -1],
    [0, 0, -1, 2],
])
G2 = block_diag(G1, G1)
GRAM_D8 = GramMatrix.of([
    [2, 0, -1, 0, 0, 0, 0, 0],
    [0, 2, -1, 0, 0, 0, 0, 0],
    [-1, -1, 2, -1, 0, 0, 0, 0],
    [0, 0, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, -1],
    [0, 0, 0, 0, 0, 0, -1, 2],
])
GRAM_E8 = GramMatrix.of([
    [4, -2, 0, 0, 0, 0, 0, 1],
    [-2, 2, -1, 0, 0, 0, 0, 0],
    [0, -1, 2, -1, 0, 0, 0, 0],
    [0, 0, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, 0],
    [1, 0, 0, 0, 0, 0, 0, 2],
])

TARGETS = {"D4": G1, "D4+D4": G2, "D8": GRAM_D8, "E8": GRAM_E8}
TARGET_ALIASES = {"d4": "D4", "d4d4": "D4+D4", "d8": "D8", "e8": "E8"}
DEGREE = {"D4": 4, "D4+D4": 8, "D8": 8, "E8": 8}


class ScaleMismatch(ValueError):
    def __init__(self, what: str, entry: tuple[int, int], got, expected):
        self.entry = entry
        super().__init__(f"{what}: entry {entry} is {got}, expected {expected}")


class UsageError(ValueError):
    """A parameter combination the pipeline cannot handle."""


def _first_difference(A: GramMatrix, B: GramMatrix):
    for i in range(A.n):
        for k in range(A.n):
            if A[i, k] != B[i, k]:
                return (i, k), A[i, k], B[i, k]
    return None


def _require_equal(what: str, got: GramMatrix, expected: GramMatrix):
    diff = _first_difference(got, expected)
    if diff is not None:
        raise ScaleMismatch(what, *diff)


# -- admissible q ------------------------------------------------------------

def family_scan(q_max: int) -> list[AdmissibleQ]:
    """Every admissible q <= q_max, ascending, each with its canonical j."""
    out = []
    for q in range(3, q_max + 1, 8):
        try:
            out.append(find_j(q))
        except InvalidQ:
            pass
    return out


@dataclass(frozen=True)
class ExplicitFamilyMember:
    k: int
    q: int
    j: int
    U: tuple[tuple[int, ...], ...]

    def admissible(self) -> AdmissibleQ:
        return AdmissibleQ(self.q, self.j, factor(self.q))


def explicit_U(k: int) -> tuple[tuple[int, ...], ...]:
    j = 2 * k + 1
    return (
        (1, 0, 0, 0),
        (j, 1, 0, 0),
        (-k, -k - 1, 1, 0),
        (-1, k, -1, 1),
    )


def explicit_family(k: int) -> ExplicitFamilyMember:
    """q = 4k^2 + 4k + 3, j = 2k + 1 and the matching change of basis U."""
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    q = 4 * k * k + 4 * k + 3
    fac = factor(q)
    if not fac.squarefree:
        raise NotSquarefree(q, f"k={k} gives q = {fac}")
    return ExplicitFamilyMember(k, q, 2 * k + 1, explicit_U(k))


def family_k_for(q: int) -> Optional[int]:
    """k with 4k^2 + 4k + 3 == q, if any."""
    # (2k+1)^2 = q - 2
    s = isqrt(q - 2) if q >= 2 else -1
    if s >= 1 and s * s == q - 2 and s % 2 == 1:
        return (s - 1) // 2
    return None


def gjq_closed_form(q: int, j: int) -> GramMatrix:
    """Gram matrix of the z-basis of M_{j,q}, from its closed form."""
    if (j * j + 2) % q:
        raise ValueError(f"j={j} does not satisfy j^2 = -2 mod {q}")
    F = Fraction
    inner = [
        [F(2), F(-2 * j), F(-q), F(-j)],
        [F(-2 * j), F(2 * j * j * q + 2 * j * j + 4, q), F(j * (q + 1)), F(j * j * q + j * j + 2, q)],
        [F(-q), F(j * (q + 1)), F(q * (q + 1), 2), F(j * (q + 1), 2)],
        [F(-j), F(j * j * q + j * j + 2, q), F(j * (q + 1), 2), F((j * j + 2) * (q + 1), 2 * q)],
    ]
    return GramMatrix.of([[q * v for v in row] for row in inner])


# -- w-basis and the degree-8 bases -------------------------------------------

def _apply_rows(U, elems) -> tuple[FieldElement, ...]:
    return tuple(linear_combination(row, elems) for row in U)


def w_basis(member: ExplicitFamilyMember | AdmissibleQ,
            witness: Optional[IsometryWitness] = None) -> ModuleBasis:
    """w = U z, a basis of M_{j,q} with Gram matrix q * G1.

    Pass an :class:`ExplicitFamilyMember`, or an admissible q together with
    a witness from :func:`find_isometry` (source Gram of the z-basis, target G1).
    """
    if isinstance(member, ExplicitFamilyMember):
        aq, U, scale = member.admissible(), member.U, Fraction(member.q)
    else:
        if witness is None:
            raise UsageError("a general admissible q needs an isometry witness")
        aq, U, scale = member, witness.U, witness.scale
    z = mjq_basis(aq)
    w = ModuleBasis(aq.q, 4, _apply_rows(U, z.elements), "w")
    _require_equal("w-basis Gram / q", gram(w), G1.scaled(aq.q))
    if scale != aq.q:
        raise ScaleMismatch("w-basis scale", (0, 0), scale, aq.q)
    return w


def normalized_gram(basis: ModuleBasis) -> GramMatrix:
    """Degree-8 Gram matrix divided by the fixed scale 2q."""
    return gram(basis).scaled(Fraction(1, 2 * basis.q))


def _v_element(w: ModuleBasis) -> FieldElement:
    q = w.q
    i = FieldElement.basis(q, 4)
    half = Fraction(1, 2)
    return (mul(i - 1, w[0]) * half + mul(-i - 1, w[1]) * half - w[2] - w[3])


def d8_basis(w: ModuleBasis, check: bool = True) -> ModuleBasis:
    """B1 = {w1, w2, w3, w4, v, i w2, i w3, i w4}."""
    i = FieldElement.basis(w.q, 4)
    v = _v_element(w)
    els = (w[0], w[1], w[2], w[3], v, mul(i, w[1]), mul(i, w[2]), mul(i, w[3]))
    b = ModuleBasis(w.q, 8, els, "B1")
    if check:
        _require_equal("B1 Gram / 2q", normalized_gram(b), GRAM_D8)
    return b


def e8_basis(w: ModuleBasis, check: bool = True) -> ModuleBasis:
    """B2 = {v1, w2, w3, w4, v2, i w2, i w3, v3}."""
    i = FieldElement.basis(w.q, 4)
    ip1 = i + 1
    v1 = w[0] - w[1]
    v2 = _v_element(w)
    v3 = mul(ip1, w[0]) + mul(ip1, w[2]) + mul(ip1, w[1] + w[3]) * Fraction(1, 2)
    els = (v1, w[1], w[2], w[3], v2, mul(i, w[1]), mul(i, w[2]), v3)
    b = ModuleBasis(w.q, 8, els, "B2")
    if check:
        _require_equal("B2 Gram / 2q", normalized_gram(b), GRAM_E8)
    return b


# -- verification reports -----------------------------------------------------

@dataclass
class LatticeReport:
    target: str
    q: int
    j: int
    k: Optional[int]
    degree: int
    basis: ModuleBasis
    gram: GramMatrix
    index: Optional[int]
    disc: Optional[int]
    min_norm: Fraction          # minimum of Tr(x conj x), i.e. twice the Gram minimum
    center_density: CenterDensity
    verdict: str
    shortest: tuple[tuple[int, ...], ...]
    kissing: int
    determinant: Fraction
    witness: Optional[IsometryWitness] = None
    normalized_gram: Optional[GramMatrix] = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.verdict == self.target

    @property
    def packing_radius(self) -> float:
        """Half the minimum distance of the embedded lattice (approximate)."""
        return 0.5 * float(self.min_norm / 2) ** 0.5


def _resolve(target: str, q: Optional[int], k: Optional[int],
             search_u: bool) -> tuple[AdmissibleQ, Optional[ExplicitFamilyMember]]:
    if (q is None) == (k is None):
        raise UsageError("give exactly one of q or k")
    if k is not None:
        m = explicit_family(k)
        return m.admissible(), m
    if target in ("D8", "E8"):
        kk = family_k_for(q)
        if kk is not None:
            m = explicit_family(kk)
            return m.admissible(), m
        if not search_u:
            raise UsageError(f"q={q} is outside the explicit family; enable the U search")
    return find_j(q), None


def construct(target: str, q: Optional[int] = None, k: Optional[int] = None,
              search_u: bool = False) -> tuple[ModuleBasis, AdmissibleQ, Optional[ExplicitFamilyMember]]:
    """Build the basis for ``target`` without certifying it."""
    target = TARGET_ALIASES.get(target, target)
    if target not in TARGETS:
        raise UsageError(f"unknown target {target!r}")
    aq, member = _resolve(target, q, k, search_u)
    z = mjq_basis(aq)
    if target == "D4":
        return z, aq, member
    if target == "D4+D4":
        return doubled_basis(z), aq, member
    if member is not None:
        w = w_basis(member)
    else:
        w = w_basis(aq, find_isometry(gram(z), G1))
    b = d8_basis(w, check=False) if target == "D8" else e8_basis(w, check=False)
    return b, aq, member


def verify(target: str, q: Optional[int] = None, k: Optional[int] = None,
           search_u: bool = False, max_nodes: int = 2_000_000) -> LatticeReport:
    """Construct the lattice for ``target`` and certify it from scratch."""
    target = TARGET_ALIASES.get(target, target)
    basis, aq, member = construct(target, q, k, search_u)
    G = gram(basis)
    n = basis.degree
    notes: list[str] = []
    normalized = None
    witness = None
    verdict = "UNKNOWN"

    if target in ("D4", "D4+D4"):
        check = G
        if target == "D4+D4":
            Gp = gram(mjq_basis(aq))
            if G != block_diag(Gp, Gp).scaled(2):
                notes.append("doubled Gram differs from 2*diag(G', G')")
        try:
            witness = find_isometry(G, TARGETS[target], max_nodes=max_nodes)
            expected = aq.q if target == "D4" else 2 * aq.q
            if witness.scale == expected:
                verdict = target
            else:
                notes.append(f"isometric with scale {witness.scale}, expected {expected}")
        except NotIsometric as e:
            notes.append(f"not isometric to {target}: {e.reason}")
        except SearchExhausted as e:
            notes.append(str(e))
    else:
        normalized = G.scaled(Fraction(1, 2 * aq.q))
        check = normalized
        if normalized == TARGETS[target]:
            verdict = target
            witness = IsometryWitness(tuple(tuple(int(a == b) for b in range(n)) for a in range(n)),
                                      Fraction(2 * aq.q))
        else:
            diff = _first_difference(normalized, TARGETS[target])
            notes.append(f"normalized Gram differs at {diff[0]}: {diff[1]} != {diff[2]}")

    sv = shortest_vectors(check)
    det = det_exact(G)
    # minimum of Tr(x conj x) on the unnormalized module
    gram_min = sv.min_norm if check is G else sv.min_norm * 2 * aq.q
    min_tr = 2 * gram_min

    if n == 4:
        index = index_in_ring(basis)
        disc = discriminant_K(aq.q)
        delta = center_density(min_tr, disc, index, 4)
        alt = CenterDensity(*center_density_from_gram(G))
        if alt != delta:
            notes.append(f"Gram-based density {alt} disagrees with {delta}")
    else:
        index = disc = None
        delta = CenterDensity(*center_density_from_gram(check))

    return LatticeReport(
        target=target, q=aq.q, j=aq.j, k=member.k if member else None, degree=n,
        basis=basis, gram=G, index=index, disc=disc, min_norm=min_tr,
        center_density=delta, verdict=verdict, shortest=sv.vectors,
        kissing=sv.kissing, determinant=det, witness=witness,
        normalized_gram=normalized, notes=notes,
    )


def _verify_one(args):
    target, q, search_u, max_nodes = args
    return verify(target, q=q, search_u=search_u, max_nodes=max_nodes)


def verify_many(target: str, q_max: int, search_u: bool = False, jobs: int = 1,
                max_nodes: int = 2_000_000) -> list[LatticeReport]:
    """Verify every admissible q <= q_max; results come back in ascending q."""
    qs = [aq.q for aq in family_scan(q_max)]
    tasks = [(target, q, search_u, max_nodes) for q in qs]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_verify_one, tasks))
    return [_verify_one(t) for t in tasks]
