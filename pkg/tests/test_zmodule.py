import itertools
import random
from fractions import Fraction

import pytest
import sympy as sp

from quadlat.constructions import family_scan
from quadlat.exactnum import find_j
from quadlat.fieldelem import FieldElement, alpha_basis, integral_coords
from quadlat.latanalysis import block_diag, is_positive_definite
from quadlat.zmodule import (CenterDensity, DegenerateInput, ModuleBasis,
                             center_density, discriminant_K, doubled_basis,
                             gram, index_in_ring, mjq_basis, mjq_contains)

G_3_1 = [[6, -6, -9, -3], [-6, 12, 12, 6], [-9, 12, 18, 6], [-3, 6, 6, 6]]


def test_mjq_basis_elements():
    z = mjq_basis(find_j(3))
    assert z[0] == FieldElement.from_dict(3, {6: -1})
    assert z[1] == FieldElement.from_dict(3, {0: 1, 1: 1, 6: 1})
    z3 = mjq_basis(find_j(11))[2]
    assert z3 == FieldElement.from_dict(11, {0: Fraction(11, 2), 6: Fraction(11, 2)})


def test_mjq_contains():
    for q in (3, 11, 51):
        aq = find_j(q)
        assert mjq_contains((0, 0, q, 0), aq)
        assert mjq_contains((1, 0, -2, 0), aq)
    assert not mjq_contains((0, 0, 1, 0), find_j(3))


def test_membership_matches_basis_span():
    for q in (3, 11, 19, 51):
        aq = find_j(q)
        z = mjq_basis(aq)
        C = sp.Matrix([integral_coords(e) for e in z])
        # every combination of the basis satisfies the congruence
        for coeffs in itertools.product(range(-2, 3), repeat=4):
            x = sp.Matrix([coeffs]) * C
            assert mjq_contains(tuple(int(v) for v in x), aq)
        # and a vector is in the span exactly when the congruence holds
        rng = random.Random(q)
        for _ in range(200):
            x = [rng.randint(-30, 30) for _ in range(4)]
            sol = sp.Matrix([x]) * C.inv()
            integral = all(v.is_integer for v in sol)
            assert integral == mjq_contains(x, aq)


def test_gram_q3():
    G = gram(mjq_basis(find_j(3)))
    assert G.rows() == G_3_1


def test_gram_first_row_general():
    for aq in family_scan(300):
        G = gram(mjq_basis(aq))
        assert G[0, 0] == 2 * aq.q
        assert G[0, 1] == -2 * aq.j * aq.q


def test_index():
    assert index_in_ring(mjq_basis(find_j(3))) == 3
    assert index_in_ring(ModuleBasis(3, 4, alpha_basis(3))) == 1
    assert index_in_ring(mjq_basis(find_j(51))) == 51


def test_index_and_disc_for_family():
    for aq in family_scan(500):
        assert index_in_ring(mjq_basis(aq)) == aq.q
        assert discriminant_K(aq.q) == 64 * aq.q ** 2


def test_index_rejects_non_integral():
    h = Fraction(1, 2)
    els = list(alpha_basis(3))
    els[0] = FieldElement.from_dict(3, {0: h})
    with pytest.raises(ValueError):
        index_in_ring(ModuleBasis(3, 4, els))


def test_index_rejects_dependent_basis():
    a = alpha_basis(3)
    with pytest.raises(DegenerateInput):
        index_in_ring(ModuleBasis(3, 4, [a[0], a[1], a[2], a[0] + a[1]]))


def test_basis_validation():
    with pytest.raises(ValueError):
        ModuleBasis(3, 4, alpha_basis(3)[:3])
    with pytest.raises(ValueError):
        ModuleBasis(3, 4, [FieldElement.basis(3, 4)] + alpha_basis(3)[1:])


def test_doubled_gram():
    z = mjq_basis(find_j(3))
    D = gram(doubled_basis(z))
    Gp = gram(z)
    assert D == block_diag(Gp, Gp).scaled(2)
    assert D[0, 4] == 0
    assert D[4, 4] == 2 * Gp[0, 0] == 4 * 3


def test_grams_positive_definite():
    for aq in family_scan(200):
        z = mjq_basis(aq)
        for b in (z, doubled_basis(z)):
            G = gram(b)
            assert G.is_symmetric()
            assert is_positive_definite(G)


def test_center_density():
    for q in (3, 11, 51, 187):
        assert center_density(4 * q, 64 * q * q, q, 4) == CenterDensity(Fraction(1, 8))
    assert center_density(12, 576, 3, 4).value == Fraction(1, 8)
    with pytest.raises(DegenerateInput):
        center_density(0, 576, 3, 4)
    with pytest.raises(DegenerateInput):
        center_density(12, 576, 0, 4)


def test_center_density_irrational_disc():
    # 4^2 / (16 * sqrt(2)) = 1/sqrt(2)
    d = center_density(4, 2, 1, 4)
    assert not d.is_rational
    assert (d.coef, d.radicand) == (Fraction(1), Fraction(2))
    assert abs(float(d) - 2 ** -0.5) < 1e-15
