"""Rational minimal models of nilmanifolds up to dimension 6: classification, Betti numbers, symplectic forms."""

from .algebra import (
    AlgebraError,
    BadDimension,
    LieAlgebra,
    MinimalAlgebra,
    NotClosed,
    NotNilpotent,
    betti,
    filtration,
    from_lie,
    load_json,
    loads,
    to_lie,
    validate,
)
from .classify import (
    ClassLabel,
    Classification,
    UnreachableSignature,
    canonical_model,
    classify,
    enumerate_classes,
    family_member,
    homotopy_equivalent,
    parse_label,
)
from .field import FieldMode, square_class
from .oracle import enumerate_dim3_f3, fingerprint, scramble
from .symplectic import closed_two_forms, decide_symplectic, is_symplectic_form, pfaffian_cubic

__version__ = "0.1.0"

__all__ = [
    "AlgebraError", "BadDimension", "LieAlgebra", "MinimalAlgebra", "NotClosed", "NotNilpotent",
    "betti", "filtration", "from_lie", "load_json", "loads", "to_lie", "validate",
    "ClassLabel", "Classification", "UnreachableSignature", "canonical_model", "classify",
    "enumerate_classes", "family_member", "homotopy_equivalent", "parse_label",
    "FieldMode", "square_class",
    "enumerate_dim3_f3", "fingerprint", "scramble",
    "closed_two_forms", "decide_symplectic", "is_symplectic_form", "pfaffian_cubic",
]
