"""Exact constructions of D4, D4+D4, D8 and E8 from Q(√2, √-q) and Q(√2, √q, i)."""

from .constructions import (GRAM_D8, GRAM_E8, G1, G2, LatticeReport, d8_basis,
                            e8_basis, explicit_family, family_scan,
                            gjq_closed_form, verify, verify_many, w_basis)
from .exactnum import (AdmissibleQ, Factorization, InvalidQ, NoRoot,
                       NotSquarefree, factor, find_j, sqrt_mod_prime)
from .fieldelem import (FieldElement, alpha_basis, conj, embed_canonical, mul,
                        trace_form, trace_Q)
from .latanalysis import (GramMatrix, IsometryWitness, NotIsometric, det_exact,
                          find_isometry, shortest_vectors)
from .zmodule import (ModuleBasis, center_density, doubled_basis, gram,
                      index_in_ring, mjq_basis, mjq_contains)

__version__ = "0.1.0"
