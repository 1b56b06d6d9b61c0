"""Classification and verification of operadic distributive laws.

Exact arithmetic over Q throughout: polynomial rings and Groebner bases
(:mod:`polyring`, :mod:`groebner`), free-operad monomials (:mod:`freeoperad`),
relation matrices (:mod:`relations`), partial Smith forms (:mod:`smithform`)
and the end-to-end pipeline (:mod:`classifier`).
"""

from .classifier import (
    ClassificationReport,
    LawCoefficients,
    SingularSubstitution,
    builtin_laws,
    classify,
    expected_dim,
    iso_orbits,
    opposite_involutions,
    substitute_generator,
    verify_law,
)
from .groebner import Ideal, IrrationalBranch, NotZeroDimensional, buchberger, zero_set
from .polyring import PolyRing, Polynomial
from .relations import CASES, CaseSpec, build_R, build_RR
from .smithform import exact_rank, partial_smith

__version__ = "0.1.0"

__all__ = [
    "CASES",
    "CaseSpec",
    "ClassificationReport",
    "Ideal",
    "IrrationalBranch",
    "LawCoefficients",
    "NotZeroDimensional",
    "PolyRing",
    "Polynomial",
    "SingularSubstitution",
    "buchberger",
    "build_R",
    "build_RR",
    "builtin_laws",
    "classify",
    "exact_rank",
    "expected_dim",
    "iso_orbits",
    "opposite_involutions",
    "partial_smith",
    "substitute_generator",
    "verify_law",
    "zero_set",
]
