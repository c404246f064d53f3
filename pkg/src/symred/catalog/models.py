from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType

from symred.errors import SymredError
from symred.model.models import SymmetryModel


class UnknownModelError(SymredError, KeyError):
    def __init__(self, key: str) -> None:
        super().__init__(f"Unknown catalog model '{key}'")
        self.key = key

    def __str__(self) -> str:
        return str(self.args[0])


class CatalogParameterError(SymredError, ValueError):
    def __init__(self, key: str, message: str) -> None:
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass(frozen=True)
class ParameterSpec:
    name: str
    kind: str  # "int" | "rational"
    default: Fraction
    description: str = ""

    def coerce(self, key: str, raw: object) -> Fraction:
        try:
            value = Fraction(str(raw))
        except (ValueError, ZeroDivisionError) as err:
            raise CatalogParameterError(key, f"invalid value {raw!r} for {self.name}") from err
        if self.kind == "int" and value.denominator != 1:
            raise CatalogParameterError(key, f"{self.name} must be an integer, got {raw!r}")
        return value


Builder = Callable[[Mapping[str, Fraction]], SymmetryModel]


@dataclass(frozen=True)
class ModelDescriptor:
    key: str
    summary: str
    builder: Builder
    parameters: tuple[ParameterSpec, ...] = ()
    documentation: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "documentation", MappingProxyType(dict(self.documentation)))

    def resolve(self, params: Mapping[str, object] | None) -> dict[str, Fraction]:
        given = dict(params or {})
        known = {spec.name for spec in self.parameters}
        unknown = sorted(set(given) - known)
        if unknown:
            raise CatalogParameterError(self.key, f"unknown parameters {unknown}")
        resolved = {}
        for spec in self.parameters:
            raw = given.get(spec.name)
            resolved[spec.name] = spec.default if raw is None else spec.coerce(self.key, raw)
        return resolved

    def to_dict(self) -> dict[str, object]:
        return {
            "key": self.key,
            "summary": self.summary,
            "parameters": [
                {
                    "name": spec.name,
                    "kind": spec.kind,
                    "default": str(spec.default),
                    "description": spec.description,
                }
                for spec in self.parameters
            ],
        }
