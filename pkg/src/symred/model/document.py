from __future__ import annotations

import json
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any

from loguru import logger

from symred.model.models import (
    Frame,
    HamiltonianSpec,
    ModelFormatError,
    NamedPolynomial,
    SymmetryModel,
)
from symred.polycore import (
    CanonicalStructure,
    MatrixStructure,
    PoissonStructure,
    Polynomial,
    PolynomialSyntaxError,
    poly_format,
    poly_parse,
)

REQUIRED_FIELDS = (
    "name",
    "variables",
    "structure",
    "generators",
    "invariants",
    "relations",
    "inequalities",
    "casimirs",
)
OPTIONAL_FIELDS = (
    "degree_bound",
    "momentum",
    "leaf_relations",
    "maximal_rank",
    "hamiltonian",
    "parameters",
    "notes",
)


def _parse(text: Any, names: Sequence[str], field_name: str) -> Polynomial:
    if not isinstance(text, str):
        raise ModelFormatError(f"expected a polynomial string, got {text!r}", field_name)
    try:
        return poly_parse(text, names)
    except PolynomialSyntaxError as err:
        raise ModelFormatError(f"{err} in {text!r}", field_name) from err


def _parse_list(
    payload: Mapping[str, Any], key: str, names: Sequence[str]
) -> tuple[Polynomial, ...]:
    items = payload.get(key, [])
    if not isinstance(items, list):
        raise ModelFormatError("expected an array", key)
    return tuple(_parse(item, names, f"{key}[{i}]") for i, item in enumerate(items))


def _parse_named(
    payload: Mapping[str, Any], key: str, names: Sequence[str]
) -> tuple[NamedPolynomial, ...]:
    items = payload.get(key, [])
    if not isinstance(items, list):
        raise ModelFormatError("expected an array", key)
    result = []
    for i, item in enumerate(items):
        if not isinstance(item, Mapping) or set(item) != {"name", "expr"}:
            raise ModelFormatError("entries need exactly 'name' and 'expr'", f"{key}[{i}]")
        poly = _parse(item["expr"], names, f"{key}[{i}]")
        result.append(NamedPolynomial(str(item["name"]), poly))
    seen = [item.name for item in result]
    if len(set(seen)) != len(seen):
        raise ModelFormatError(f"duplicate names {seen}", key)
    return tuple(result)


def _parse_structure(payload: Any, variables: Sequence[str]) -> PoissonStructure:
    if not isinstance(payload, Mapping):
        raise ModelFormatError("expected an object", "structure")
    kind = payload.get("type")
    if kind == "canonical":
        pairs = payload.get("pairs")
        if not isinstance(pairs, int) or 2 * pairs != len(variables):
            raise ModelFormatError(
                f"canonical structure needs pairs = {len(variables) // 2}, got {pairs!r}",
                "structure",
            )
        return CanonicalStructure(pairs)
    if kind == "matrix":
        rows = payload.get("entries")
        if not isinstance(rows, list):
            raise ModelFormatError("matrix structure needs 'entries'", "structure")
        return MatrixStructure(
            tuple(
                tuple(
                    _parse(entry, variables, f"structure[{i}][{j}]") for j, entry in enumerate(row)
                )
                for i, row in enumerate(rows)
            )
        )
    raise ModelFormatError(f"unknown structure type {kind!r}", "structure")


def load_model(document: Mapping[str, Any]) -> SymmetryModel:
    """Build a model from a parsed model document."""
    unknown = set(document) - set(REQUIRED_FIELDS) - set(OPTIONAL_FIELDS)
    if unknown:
        raise ModelFormatError(f"unknown fields {sorted(unknown)}")
    missing = [key for key in REQUIRED_FIELDS if key not in document]
    if missing:
        raise ModelFormatError(f"missing fields {missing}")

    variables = document["variables"]
    if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
        raise ModelFormatError("expected an array of names", "variables")
    if len(set(variables)) != len(variables):
        raise ModelFormatError("duplicate variable names", "variables")

    structure = _parse_structure(document["structure"], variables)
    generators = _parse_named(document, "generators", variables)
    invariants = _parse_named(document, "invariants", variables)
    invariant_names = [item.name for item in invariants]
    generator_names = [item.name for item in generators]

    hamiltonian = None
    if "hamiltonian" in document:
        ham = document["hamiltonian"]
        if not isinstance(ham, Mapping) or set(ham) != {"frame", "expr"}:
            raise ModelFormatError("expected {frame, expr}", "hamiltonian")
        try:
            frame = Frame(ham["frame"])
        except ValueError as err:
            raise ModelFormatError(f"unknown frame {ham['frame']!r}", "hamiltonian") from err
        names = variables if frame is Frame.FULL else invariant_names
        hamiltonian = HamiltonianSpec(_parse(ham["expr"], names, "hamiltonian"), frame)

    degree_bound = document.get("degree_bound", 2)
    maximal_rank = document.get("maximal_rank")
    if not isinstance(degree_bound, int) or degree_bound < 1:
        raise ModelFormatError("expected a positive integer", "degree_bound")
    if maximal_rank is not None and (not isinstance(maximal_rank, int) or maximal_rank < 0):
        raise ModelFormatError("expected a non-negative integer", "maximal_rank")
    parameters = document.get("parameters", {})
    if not isinstance(parameters, Mapping):
        raise ModelFormatError("expected an object", "parameters")

    model = SymmetryModel(
        name=str(document["name"]),
        variables=tuple(variables),
        structure=structure,
        generators=generators,
        invariants=invariants,
        relations=_parse_list(document, "relations", invariant_names),
        inequalities=_parse_list(document, "inequalities", invariant_names),
        casimirs=_parse_list(document, "casimirs", invariant_names),
        degree_bound=degree_bound,
        momentum=_parse_named(document, "momentum", generator_names),
        leaf_relations=_parse_list(document, "leaf_relations", invariant_names),
        maximal_rank=maximal_rank,
        hamiltonian=hamiltonian,
        parameters={str(k): str(v) for k, v in parameters.items()},
        notes=str(document.get("notes", "")),
    )
    logger.debug(
        "Loaded model {} ({} variables, {} invariants)",
        model.name,
        model.dimension,
        len(invariants),
    )
    return model


def load_model_definition(path: Path) -> SymmetryModel:
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise ModelFormatError(f"invalid JSON in {path}: {err.msg} (line {err.lineno})") from err
    if not isinstance(payload, Mapping):
        raise ModelFormatError(f"{path} does not hold a model object")
    return load_model(payload)


def dump_model(model: SymmetryModel) -> dict[str, Any]:
    variables = model.variables
    invariant_names = model.invariant_names

    def fmt_invariant(poly: Polynomial) -> str:
        return poly_format(poly, invariant_names)

    if isinstance(model.structure, CanonicalStructure):
        structure: dict[str, Any] = {"type": "canonical", "pairs": model.structure.pairs}
    else:
        structure = {
            "type": "matrix",
            "entries": [
                [poly_format(e, variables) for e in row] for row in model.structure.entries
            ],
        }

    def named(items: tuple[NamedPolynomial, ...]) -> list[dict[str, str]]:
        return [{"name": item.name, "expr": poly_format(item.poly, variables)} for item in items]

    document: dict[str, Any] = {
        "name": model.name,
        "variables": list(variables),
        "structure": structure,
        "generators": named(model.generators),
        "invariants": named(model.invariants),
        "relations": [fmt_invariant(p) for p in model.relations],
        "inequalities": [fmt_invariant(p) for p in model.inequalities],
        "casimirs": [fmt_invariant(p) for p in model.casimirs],
        "degree_bound": model.degree_bound,
    }
    if model.momentum:
        document["momentum"] = [
            {"name": item.name, "expr": poly_format(item.poly, model.generator_names)}
            for item in model.momentum
        ]
    if model.leaf_relations:
        document["leaf_relations"] = [fmt_invariant(p) for p in model.leaf_relations]
    if model.maximal_rank is not None:
        document["maximal_rank"] = model.maximal_rank
    if model.hamiltonian is not None:
        names = variables if model.hamiltonian.frame is Frame.FULL else invariant_names
        document["hamiltonian"] = {
            "frame": model.hamiltonian.frame.value,
            "expr": poly_format(model.hamiltonian.expression, names),
        }
    if model.parameters:
        document["parameters"] = dict(sorted(model.parameters.items()))
    if model.notes:
        document["notes"] = model.notes
    return document


def model_to_json(model: SymmetryModel) -> str:
    return json.dumps(dump_model(model), indent=2, ensure_ascii=False) + "\n"
