from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from symred.catalog import (
    CatalogParameterError,
    UnknownModelError,
    catalog_model,
    catalog_report,
    export_catalog,
    get_descriptor,
    list_models,
    oscillator_hamiltonian,
    parse_catalog_source,
)
from symred.model import Frame, model_to_json
from symred.polycore import compile_polynomials, poly_parse

KEYS = [
    "so3_r3",
    "so3_cotangent_r6",
    "so3_diag_r6",
    "so3_diag_r9",
    "so3_diag_r9_scaled",
    "kl_resonance",
    "oscillator_r8",
    "kepler_ks_r8",
]


def test_list_models_is_ordered() -> None:
    assert [descriptor.key for descriptor in list_models()] == KEYS


def test_descriptor_parameters() -> None:
    descriptor = get_descriptor("kl_resonance")
    assert [spec.name for spec in descriptor.parameters] == ["k", "l"]
    assert descriptor.resolve({"l": "3"}) == {"k": Fraction(1), "l": Fraction(3)}
    assert descriptor.to_dict()["key"] == "kl_resonance"


def test_parse_catalog_source() -> None:
    assert parse_catalog_source("catalog:so3_r3") == ("so3_r3", {})
    assert parse_catalog_source("catalog:kl_resonance?k=2&l=-3") == (
        "kl_resonance",
        {"k": "2", "l": "-3"},
    )
    with pytest.raises(UnknownModelError):
        parse_catalog_source("models/so3_r3.json")


def test_unknown_model() -> None:
    with pytest.raises(UnknownModelError, match="so4_r4"):
        catalog_model("so4_r4")


def test_unknown_parameter_rejected() -> None:
    with pytest.raises(CatalogParameterError, match="unknown parameters"):
        catalog_model("so3_r3", {"k": "1"})


@pytest.mark.parametrize(
    ("params", "message"),
    [
        ({"l": "0"}, "non-zero"),
        ({"k": "2", "l": "2"}, "excluded"),
        ({"k": "2", "l": "-2"}, "excluded"),
        ({"k": "2", "l": "4"}, "coprime"),
        ({"k": "2", "l": "-4"}, r"\(x1 \+ i\*y1\)\^2 \* \(x2 -\+ i\*y2\)\^1 and not form"),
        ({"k": "3/2"}, "must be an integer"),
        ({"k": "two"}, "invalid value"),
        ({"k": "0", "l": "1"}, ">= 1"),
    ],
)
def test_kl_resonance_parameter_validation(params: dict, message: str) -> None:
    with pytest.raises(CatalogParameterError, match=message):
        catalog_model("kl_resonance", params)


@pytest.mark.parametrize(("k", "ell"), [(1, 2), (1, -2), (2, 1), (1, 3)])
def test_kl_resonance_variants_verify(k: int, ell: int) -> None:
    report = catalog_report("kl_resonance", {"k": k, "l": ell})
    assert report.passed
    model = report.model
    assert dict(model.parameters) == {"k": str(k), "l": str(ell)}
    assert model.degree_bound == max(3, k + abs(ell) - 1)


def test_kl_relation_constant() -> None:
    model = catalog_model("kl_resonance", {"k": 1, "l": 2})
    expected = poly_parse("R1^2 + R2^2 - 1/2*(I1 + I2)^2*(I1 - I2)", model.invariant_names)
    assert model.relations[0] == expected


@pytest.mark.parametrize("value", ["0", "-1"])
def test_scaled_radii_must_be_positive(value: str) -> None:
    with pytest.raises(CatalogParameterError, match="must be positive"):
        catalog_model("so3_diag_r9_scaled", {"cy": value})


def test_catalog_instances_are_cached() -> None:
    assert catalog_model("so3_diag_r6") is catalog_model("so3_diag_r6")
    assert catalog_model("kl_resonance", {"k": "1"}) is catalog_model("kl_resonance")


def test_oscillator_quartic_holds_numerically() -> None:
    model = catalog_model("oscillator_r8")
    rng = np.random.default_rng(11)
    points = rng.standard_normal((1000, 8))
    images = compile_polynomials(model.invariant_polys, 8)(points)
    residual = compile_polynomials(model.relations, 6)(images)[:, 0]
    scale = images[:, 0] ** 4
    assert np.max(np.abs(residual) / scale) <= 1e-10


def test_scaled_elliptope_holds_for_unit_triples() -> None:
    model = catalog_model("so3_diag_r9_scaled")
    rng = np.random.default_rng(17)
    samples = rng.standard_normal((3, 1000, 3))
    x, y, z = samples / np.linalg.norm(samples, axis=2, keepdims=True)
    images = np.column_stack(
        [
            np.einsum("ij,ij->i", x, y),
            np.einsum("ij,ij->i", x, z),
            np.einsum("ij,ij->i", y, z),
            np.einsum("ij,ij->i", np.cross(y, x), z),
        ]
    )
    residual = compile_polynomials(model.leaf_relations, 4)(images)[:, 0]
    assert np.max(np.abs(residual)) <= 1e-12
    assert np.all(compile_polynomials(model.inequalities, 4)(images) >= -1e-12)


def test_oscillator_hamiltonian_family() -> None:
    spec = oscillator_hamiltonian(1)
    assert spec.frame is Frame.INVARIANT
    names = ("H2", "Xi", "L1", "N", "K", "S")
    expected = poly_parse(
        "H2 + 3/4*K^2*H2 + 3/2*N*H2 + 7/4*H2^3 - 3/4*H2*(L1^2 + Xi^2)", names
    )
    assert spec.expression == expected
    assert oscillator_hamiltonian(0).expression != expected
    model = catalog_model("oscillator_r8", {"beta": "1"})
    assert model.hamiltonian == spec


def test_export_catalog_writes_every_document(tmp_path: Path) -> None:
    written = export_catalog(tmp_path / "out")
    assert [path.stem for path in written] == KEYS
    for path in written:
        assert path.read_text(encoding="utf-8") == model_to_json(catalog_model(path.stem))
