"""Black-box algebraic structures and known-plaintext attacks on
deterministic homomorphic encryption of small groups and finite fields."""

from .core import (
    FIELD,
    GROUP,
    BlackBox,
    ElementSet,
    QueryBudgetReport,
    StructureSignature,
    element_order,
    enumerate_closure,
    identity_element,
    power,
)
from .explicit import (
    EncryptionOracle,
    ExplicitStructure,
    FieldSpec,
    encrypt,
    make_field,
    parse_field_spec,
    parse_structure,
)
from .kernels import BACKEND

__all__ = [
    "BACKEND",
    "FIELD",
    "GROUP",
    "BlackBox",
    "ElementSet",
    "EncryptionOracle",
    "ExplicitStructure",
    "FieldSpec",
    "QueryBudgetReport",
    "StructureSignature",
    "element_order",
    "encrypt",
    "enumerate_closure",
    "identity_element",
    "make_field",
    "parse_field_spec",
    "parse_structure",
    "power",
]

__version__ = "0.1.0"
