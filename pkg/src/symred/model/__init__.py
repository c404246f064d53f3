from symred.model.document import dump_model, load_model, load_model_definition, model_to_json
from symred.model.models import (
    CasimirCheck,
    Frame,
    HamiltonianSpec,
    InequalityReport,
    InvarianceReport,
    ModelFormatError,
    ModelReport,
    NamedPolynomial,
    NotClosed,
    RelationReport,
    StructureConstants,
    SymmetryModel,
    UnverifiedModelError,
)
from symred.model.verify import (
    check_inequalities,
    generator_structure_constants,
    verify_invariance,
    verify_model,
    verify_relations,
)

__all__ = [
    "CasimirCheck",
    "Frame",
    "HamiltonianSpec",
    "InequalityReport",
    "InvarianceReport",
    "ModelFormatError",
    "ModelReport",
    "NamedPolynomial",
    "NotClosed",
    "RelationReport",
    "StructureConstants",
    "SymmetryModel",
    "UnverifiedModelError",
    "check_inequalities",
    "dump_model",
    "generator_structure_constants",
    "load_model",
    "load_model_definition",
    "model_to_json",
    "verify_invariance",
    "verify_model",
    "verify_relations",
]
