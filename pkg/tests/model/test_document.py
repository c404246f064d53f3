import json
from pathlib import Path

import pytest

from symred.catalog import catalog_model, list_models
from symred.model import (
    Frame,
    ModelFormatError,
    SymmetryModel,
    dump_model,
    load_model,
    load_model_definition,
    model_to_json,
)
from symred.polycore import CanonicalStructure, poly_parse

KEYS = [descriptor.key for descriptor in list_models()]


def cotangent_document() -> dict:
    return json.loads(model_to_json(catalog_model("so3_cotangent_r6")))


def assert_same_model(left: SymmetryModel, right: SymmetryModel) -> None:
    assert left.name == right.name
    assert left.variables == right.variables
    assert left.structure.entries == right.structure.entries
    assert left.generators == right.generators
    assert left.invariants == right.invariants
    assert left.relations == right.relations
    assert left.inequalities == right.inequalities
    assert left.casimirs == right.casimirs
    assert left.momentum == right.momentum
    assert left.leaf_relations == right.leaf_relations
    assert left.maximal_rank == right.maximal_rank
    assert left.hamiltonian == right.hamiltonian
    assert left.degree_bound == right.degree_bound
    assert dict(left.parameters) == dict(right.parameters)
    assert left.notes == right.notes


@pytest.mark.parametrize("key", KEYS)
def test_dump_then_load_preserves_catalog_models(key: str) -> None:
    model = catalog_model(key)
    loaded = load_model(json.loads(model_to_json(model)))
    assert_same_model(loaded, model)
    assert not loaded.verified


def test_dump_is_stable() -> None:
    model = catalog_model("so3_diag_r9")
    assert model_to_json(model) == model_to_json(load_model(dump_model(model)))


def test_canonical_structure_document() -> None:
    document = cotangent_document()
    assert document["structure"] == {"type": "canonical", "pairs": 3}
    assert load_model(document).structure == CanonicalStructure(3)


def test_unknown_field_rejected() -> None:
    document = cotangent_document()
    document["colour"] = "blue"
    with pytest.raises(ModelFormatError, match="unknown fields"):
        load_model(document)


def test_missing_field_rejected() -> None:
    document = cotangent_document()
    del document["casimirs"]
    with pytest.raises(ModelFormatError, match="missing fields"):
        load_model(document)


def test_polynomial_error_names_the_field() -> None:
    document = cotangent_document()
    document["invariants"][1]["expr"] = "y1^2 +"
    with pytest.raises(ModelFormatError) as excinfo:
        load_model(document)
    assert excinfo.value.field_name == "invariants[1]"


def test_unknown_variable_in_relation() -> None:
    document = cotangent_document()
    document["relations"] = ["d - a*b + e^2"]
    with pytest.raises(ModelFormatError) as excinfo:
        load_model(document)
    assert excinfo.value.field_name == "relations[0]"


def test_canonical_pairs_must_match_variables() -> None:
    document = cotangent_document()
    document["structure"] = {"type": "canonical", "pairs": 2}
    with pytest.raises(ModelFormatError, match="pairs = 3"):
        load_model(document)


def test_duplicate_invariant_names_rejected() -> None:
    document = cotangent_document()
    document["invariants"][1]["name"] = "a"
    with pytest.raises(ModelFormatError, match="duplicate names"):
        load_model(document)


def test_hamiltonian_frames() -> None:
    document = cotangent_document()
    document["hamiltonian"] = {"frame": "invariant", "expr": "a + b"}
    model = load_model(document)
    assert model.hamiltonian is not None
    assert model.hamiltonian.frame is Frame.INVARIANT
    assert model.hamiltonian.expression == poly_parse("a + b", ["a", "b", "c", "d"])

    document["hamiltonian"] = {"frame": "lab", "expr": "a"}
    with pytest.raises(ModelFormatError, match="unknown frame"):
        load_model(document)


def test_load_model_definition_reports_invalid_json(tmp_path: Path) -> None:
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ModelFormatError, match="invalid JSON"):
        load_model_definition(path)


def test_load_model_definition_reads_file(tmp_path: Path) -> None:
    path = tmp_path / "so3_r3.json"
    path.write_text(model_to_json(catalog_model("so3_r3")), encoding="utf-8")
    model = load_model_definition(path)
    assert model.name == "so3_r3"
    assert model.invariant_names == ("rho",)
