from __future__ import annotations

from collections.abc import Mapping
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from urllib.parse import parse_qsl

from loguru import logger

from symred.catalog import builders
from symred.catalog.models import (
    CatalogParameterError,
    ModelDescriptor,
    ParameterSpec,
    UnknownModelError,
)
from symred.model import (
    ModelReport,
    SymmetryModel,
    UnverifiedModelError,
    model_to_json,
    verify_model,
)

CATALOG_PREFIX = "catalog:"

_DESCRIPTORS: tuple[ModelDescriptor, ...] = (
    ModelDescriptor(
        key="so3_r3",
        summary="Rotations of R^3 with the Lie-Poisson structure A_x; orbit space a half-line.",
        builder=builders.so3_r3,
        documentation={"casimir": "rho = |x|^2"},
    ),
    ModelDescriptor(
        key="so3_cotangent_r6",
        summary="Cotangent lift of SO(3) on R^6 with canonical structure; J = x cross y.",
        builder=builders.so3_cotangent_r6,
        documentation={
            "relation": "Lagrange identity d = a*b - c^2",
            "reduced_space": "one sheet of a two sheeted hyperboloid for |J| > 0, a cone at 0",
        },
    ),
    ModelDescriptor(
        key="so3_diag_r6",
        summary="Diagonal SO(3) on two angular momenta; induced structure vanishes.",
        builder=builders.so3_diag_r6,
        documentation={"reduced_space": "cone section a + 2*c + b = const, a parabolic disk"},
    ),
    ModelDescriptor(
        key="so3_diag_r9",
        summary="Diagonal SO(3) on three angular momenta; Gram relation for the triple product.",
        builder=builders.so3_diag_r9,
    ),
    ModelDescriptor(
        key="so3_diag_r9_scaled",
        summary="Orbit-space model of three unit angular momenta with structure W(v).",
        builder=builders.so3_diag_r9_scaled,
        parameters=(
            ParameterSpec("cx", "rational", Fraction(1), "radius of the first sphere"),
            ParameterSpec("cy", "rational", Fraction(1), "radius of the second sphere"),
            ParameterSpec("cz", "rational", Fraction(1), "radius of the third sphere"),
        ),
        documentation={"leaf": "elliptope v4^2 = 1 + 2*v1*v2*v3 - v1^2 - v2^2 - v3^2"},
    ),
    ModelDescriptor(
        key="kl_resonance",
        summary="k:l resonance on R^4 reduced by the S^1 action generated by I1.",
        builder=builders.kl_resonance,
        parameters=(
            ParameterSpec("k", "int", Fraction(1), "first frequency, k >= 1"),
            ParameterSpec("l", "int", Fraction(2), "second frequency, non-zero, |l| != k"),
        ),
        documentation={
            "printed_relation": (
                "the closed forms {R1,R2} = -2*(I1^2 - I2^2) + (I1 + I2)^2 and "
                "R1^2 + R2^2 = 1/2*(I1 + I2)^2*(I1 - I2) only match k + |l| = 3; "
                "constants are derived from the exact rewrite"
            )
        },
    ),
    ModelDescriptor(
        key="oscillator_r8",
        summary="Perturbed 4-DOF oscillator with T^3 symmetry (H2, Xi, L1).",
        builder=builders.oscillator_r8,
        parameters=(
            ParameterSpec("beta", "rational", Fraction(1), "perturbation parameter"),
        ),
        documentation={"K3": "-(Q1*Q3 + q1*q3) - (Q2*Q4 + q2*q4)"},
    ),
    ModelDescriptor(
        key="kepler_ks_r8",
        summary="Regularised Kepler problem on R^8; sigma = L + K and rho = L - K.",
        builder=builders.kepler_ks_r8,
    ),
)

DESCRIPTORS: dict[str, ModelDescriptor] = {d.key: d for d in _DESCRIPTORS}


def list_models() -> list[ModelDescriptor]:
    return list(_DESCRIPTORS)


def get_descriptor(key: str) -> ModelDescriptor:
    try:
        return DESCRIPTORS[key]
    except KeyError as err:
        raise UnknownModelError(key) from err


@lru_cache(maxsize=32)
def _verified_report(key: str, params: tuple[tuple[str, Fraction], ...]) -> ModelReport:
    descriptor = get_descriptor(key)
    model = descriptor.builder(dict(params))
    report = verify_model(model)
    if not report.model.verified:
        logger.error("Catalog model {} failed verification", key)
        raise UnverifiedModelError(model.name)
    logger.info("Catalog model {} ready ({} invariants)", key, len(model.invariants))
    return report


def catalog_report(key: str, params: Mapping[str, object] | None = None) -> ModelReport:
    """Verification report of a catalog model; instances are cached per parameter set."""
    resolved = get_descriptor(key).resolve(params)
    return _verified_report(key, tuple(sorted(resolved.items())))


def catalog_model(key: str, params: Mapping[str, object] | None = None) -> SymmetryModel:
    return catalog_report(key, params).model


def parse_catalog_source(source: str) -> tuple[str, dict[str, str]]:
    """Split ``catalog:key?name=value&...`` into the key and raw parameters."""
    if not source.startswith(CATALOG_PREFIX):
        raise UnknownModelError(source)
    body = source[len(CATALOG_PREFIX) :]
    key, _, query = body.partition("?")
    try:
        pairs = parse_qsl(query, keep_blank_values=True, strict_parsing=bool(query))
    except ValueError as err:
        raise CatalogParameterError(key, f"malformed parameters '{query}'") from err
    return key, dict(pairs)


def export_catalog(directory: str | Path) -> list[Path]:
    """Write the document of every catalog model at default parameters."""
    target = Path(directory)
    target.mkdir(parents=True, exist_ok=True)
    written = []
    for descriptor in _DESCRIPTORS:
        path = target / f"{descriptor.key}.json"
        path.write_text(model_to_json(catalog_model(descriptor.key)), encoding="utf-8")
        written.append(path)
        logger.info("Exported {}", path)
    return written
