from symred.catalog.builders import oscillator_hamiltonian
from symred.catalog.models import (
    CatalogParameterError,
    ModelDescriptor,
    ParameterSpec,
    UnknownModelError,
)
from symred.catalog.service import (
    CATALOG_PREFIX,
    catalog_model,
    catalog_report,
    export_catalog,
    get_descriptor,
    list_models,
    parse_catalog_source,
)

__all__ = [
    "CATALOG_PREFIX",
    "CatalogParameterError",
    "ModelDescriptor",
    "ParameterSpec",
    "UnknownModelError",
    "catalog_model",
    "catalog_report",
    "export_catalog",
    "get_descriptor",
    "list_models",
    "oscillator_hamiltonian",
    "parse_catalog_source",
]
