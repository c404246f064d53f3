"""
Command-line front end.

Usage:
    symred list
    symred verify catalog:so3_diag_r6
    symred reduce catalog:so3_cotangent_r6 --mu 0,0,1
    symred strata catalog:so3_r3 --random 10000 --seed 7
    symred sample catalog:so3_diag_r9_scaled --mu 0 --chart "1,2->4" --window=-1:1,-1:1 --grid 40
    symred releq catalog:so3_cotangent_r6 --ham "x1^2+x2^2+x3^2+y1^2+y2^2+y3^2" --mu 0,0,1
    symred export --out-dir models
"""

from __future__ import annotations

import argparse
import json
import os
from collections.abc import Callable, Sequence
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np
from loguru import logger

from symred import __version__
from symred.catalog import (
    CATALOG_PREFIX,
    CatalogParameterError,
    UnknownModelError,
    catalog_report,
    export_catalog,
    get_descriptor,
    list_models,
    parse_catalog_source,
)
from symred.config import load_app_config
from symred.errors import ArityMismatchError, SymredError
from symred.log import configure_logging
from symred.model import (
    Frame,
    HamiltonianSpec,
    ModelFormatError,
    ModelReport,
    SymmetryModel,
    UnverifiedModelError,
    load_model_definition,
    verify_model,
)
from symred.orbitmap import (
    RewriteBoundExceededError,
    induced_structure,
    induced_structure_document,
    reduce_hamiltonian,
)
from symred.polycore import PolynomialSyntaxError, UnknownVariableError, poly_format, poly_parse
from symred.releq import (
    NonConvergenceError,
    NotAnEquilibriumError,
    classify_equilibria,
    find_reduced_stationary,
    find_relative_equilibria,
    leaf_extremum_check,
)
from symred.semialg import (
    CasimirIndexError,
    Chart,
    ChartError,
    MaximalRankUnavailableError,
    MissingMomentumError,
    NotInSetError,
    PointClass,
    SemiAlgebraicSet,
    classify_point,
    estimate_maximal_rank,
    mesh_document,
    orbit_space,
    reduced_space,
    sample_surface,
)
from symred.strata import (
    StructurePreconditionError,
    kernel_span_check,
    principal_stratum_estimate,
    rank_defect_report,
    rank_report,
    signature_census,
)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_NO_SOLUTION = 3

INPUT_ERRORS = (
    ArityMismatchError,
    CasimirIndexError,
    CatalogParameterError,
    ChartError,
    MissingMomentumError,
    ModelFormatError,
    NotInSetError,
    PolynomialSyntaxError,
    RewriteBoundExceededError,
    StructurePreconditionError,
    UnknownModelError,
)
SOLVER_ERRORS = (MaximalRankUnavailableError, NonConvergenceError, NotAnEquilibriumError)


class CliInputError(SymredError, ValueError):
    pass


@dataclass(frozen=True)
class LoadedModel:
    report: ModelReport
    source: str
    catalog_key: str | None

    @property
    def model(self) -> SymmetryModel:
        return self.report.model


# -- argument parsing ------------------------------------------------------------------


def parse_values(text: str, what: str = "--mu") -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(part.strip()) for part in text.split(","))
    except (ValueError, ZeroDivisionError) as err:
        raise CliInputError(f"{what} expects comma-separated rationals, got '{text}'") from err


def parse_point(text: str, what: str = "--point") -> tuple[float, ...]:
    return tuple(float(value) for value in parse_values(text, what))


def parse_window(text: str) -> tuple[tuple[float, float], tuple[float, float]]:
    """``a:b,c:d`` -> ((a, b), (c, d))."""
    try:
        first, second = text.split(",")
        a, b = (float(Fraction(part)) for part in first.split(":"))
        c, d = (float(Fraction(part)) for part in second.split(":"))
    except (ValueError, ZeroDivisionError) as err:
        raise CliInputError(f"--window expects 'a:b,c:d', got '{text}'") from err
    if not (a < b and c < d):
        raise CliInputError(f"--window {text} is not well ordered")
    return (a, b), (c, d)


def parse_casimirs(items: Sequence[str] | None) -> dict[int, Fraction]:
    """Repeated ``--casimir i=value`` with 1-based Casimir indices."""
    levels: dict[int, Fraction] = {}
    for item in items or ():
        index, sep, value = item.partition("=")
        if not sep:
            raise CliInputError(f"--casimir expects 'i=value', got '{item}'")
        try:
            levels[int(index) - 1] = Fraction(value)
        except (ValueError, ZeroDivisionError) as err:
            raise CliInputError(f"--casimir expects 'i=value', got '{item}'") from err
    return levels


def _positive_int(raw: str) -> int:
    value = int(raw)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {raw}")
    return value


def _non_negative_int(raw: str) -> int:
    value = int(raw)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {raw}")
    return value


def _positive_float(raw: str) -> float:
    value = float(raw)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {raw}")
    return value


# -- model sources ---------------------------------------------------------------------


def load_source(source: str, degree_bound: int | None = None) -> LoadedModel:
    """Resolve ``catalog:key?params`` or a model document path and verify it."""
    if source.startswith(CATALOG_PREFIX):
        key, params = parse_catalog_source(source)
        report = catalog_report(key, params)
        if degree_bound is not None and degree_bound != report.degree_bound:
            report = verify_model(report.model, degree_bound)
        return LoadedModel(report, source, key)
    path = Path(source)
    if not path.is_file():
        raise CliInputError(f"model document {source} does not exist")
    model = load_model_definition(path)
    return LoadedModel(verify_model(model, degree_bound), source, None)


def provenance(loaded: LoadedModel, options: dict[str, Any]) -> dict[str, object]:
    return {
        "model": loaded.model.name,
        "source": loaded.source,
        "parameters": dict(loaded.model.parameters),
        "version": __version__,
        "options": {key: _plain(value) for key, value in sorted(options.items())},
    }


def _plain(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, tuple | list):
        return [_plain(item) for item in value]
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    return value


def read_hamiltonian(model: SymmetryModel, text: str | None, frame: str | None) -> HamiltonianSpec:
    """Parse ``--ham`` (an expression or a file holding one) in the requested frame.

    Without ``--frame`` the phase-space variables are tried first, then the invariants.
    """
    if text is None:
        if model.hamiltonian is None:
            raise CliInputError(f"model {model.name} has no Hamiltonian; pass --ham")
        return model.hamiltonian
    path = Path(text)
    if path.is_file():
        text = path.read_text(encoding="utf-8").strip()
    frames = [Frame(frame)] if frame else [Frame.FULL, Frame.INVARIANT]
    for candidate in frames[:-1]:
        try:
            return HamiltonianSpec(poly_parse(text, _frame_names(model, candidate)), candidate)
        except UnknownVariableError as err:
            logger.debug("Hamiltonian is not in the {} frame: {}", candidate, err)
    last = frames[-1]
    return HamiltonianSpec(poly_parse(text, _frame_names(model, last)), last)


def _frame_names(model: SymmetryModel, frame: Frame) -> tuple[str, ...]:
    return model.variables if frame is Frame.FULL else model.invariant_names


# -- output ----------------------------------------------------------------------------


def emit(document: dict[str, object], out: str | None) -> None:
    text = json.dumps(document, indent=2, ensure_ascii=False) + "\n"
    if out is None:
        print(text, end="")
        return
    target = Path(out)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")
    logger.info("Wrote {}", target)


def format_table(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    cells = [[str(value) for value in header]] + [[str(value) for value in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = [
        "  ".join(value.ljust(width) for value, width in zip(row, widths, strict=True)).rstrip()
        for row in cells
    ]
    lines.insert(1, "  ".join("-" * width for width in widths))
    return "\n".join(lines)


# -- subcommands -----------------------------------------------------------------------


def cmd_list(args: argparse.Namespace) -> int:
    rows = []
    for descriptor in list_models():
        params = ", ".join(f"{spec.name}={spec.default}" for spec in descriptor.parameters)
        rows.append((descriptor.key, params or "-", descriptor.summary))
    print(format_table(("model", "parameters", "summary"), rows))
    if args.out:
        emit({"version": __version__, "models": [d.to_dict() for d in list_models()]}, args.out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    loaded = load_source(args.model, args.degree_bound)
    report = loaded.report
    document: dict[str, object] = {
        "provenance": provenance(loaded, {"degree_bound": report.degree_bound}),
        "report": report.to_dict(),
    }
    if report.model.verified:
        structure = induced_structure(report.model, args.degree_bound)
        document["induced_structure"] = induced_structure_document(structure)
        document["induced_structure_is_zero"] = structure.is_zero
    if loaded.catalog_key:
        document["documentation"] = dict(get_descriptor(loaded.catalog_key).documentation)
    emit(document, args.out)
    if not report.passed:
        logger.error("Model {} failed verification", report.model.name)
        return EXIT_VERIFICATION_FAILED
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace) -> int:
    loaded = load_source(args.model, args.degree_bound)
    model = loaded.model.require_verified()
    mu = parse_values(args.mu)
    casimirs = parse_casimirs(args.casimir)
    rs = reduced_space(model, mu, args.degree_bound, casimirs)
    structure = induced_structure(model, args.degree_bound)
    options = {"mu": mu, "casimir": casimirs, "degree_bound": structure.degree_bound}
    emit(
        {
            "provenance": provenance(loaded, options),
            "reduced_space": rs.to_dict(),
            "induced_structure": induced_structure_document(structure),
        },
        args.out,
    )
    return EXIT_OK


def _target_set(model: SymmetryModel, args: argparse.Namespace) -> SemiAlgebraicSet:
    if args.mu is None:
        return orbit_space(model)
    mu = parse_values(args.mu)
    return reduced_space(model, mu, args.degree_bound, parse_casimirs(args.casimir)).as_set()


def cmd_classify(args: argparse.Namespace) -> int:
    loaded = load_source(args.model, args.degree_bound)
    space = _target_set(loaded.model.require_verified(), args)
    point = parse_point(args.point)
    result = classify_point(space, point, args.tol)
    print(
        format_table(
            ("point", "verdict", "rank", "maximal_rank"),
            [(args.point, result.verdict, result.rank, result.maximal_rank)],
        )
    )
    if args.out:
        options = {"mu": args.mu, "point": point, "tol": args.tol}
        emit(
            {
                "provenance": provenance(loaded, options),
                "coordinates": list(space.names),
                "verdict": str(result.verdict),
                "rank": result.rank,
                "maximal_rank": result.maximal_rank,
            },
            args.out,
        )
    return EXIT_OK


def cmd_strata(args: argparse.Namespace) -> int:
    loaded = load_source(args.model)
    model = loaded.model.require_verified()
    options: dict[str, Any] = {"tol": args.tol}
    document: dict[str, object] = {}
    if args.point is not None:
        point = parse_point(args.point)
        options["point"] = point
        report = rank_report(model, point, args.tol)
        defect = rank_defect_report(model, point, args.tol)
        header = ("quantity", "value")
        rows: list[tuple[object, object]] = [
            ("signature", f"({report.rank_drho},{report.rank_orbit_span})"),
            ("rank d(rho)", report.rank_drho),
            ("rank dJ", report.rank_dJ),
            ("rank X_J span", report.rank_orbit_span),
            ("rank X_rho span", report.rank_invariant_span),
            ("rank induced", report.rank_induced),
            ("span/kernel overlap", report.span_kernel_overlap),
            ("rank defect", defect.defect),
            ("casimir rank", defect.casimir_rank),
        ]
        document["rank_report"] = report.to_dict()
        document["rank_defect"] = defect.to_dict()
        if model.structure.is_canonical:
            span = kernel_span_check(model, point, args.tol)
            rows.append(("kernel span check", span.to_dict()["status"]))
            document["kernel_span"] = span.to_dict()
        print(format_table(header, rows))
    else:
        options.update({"random": args.random, "seed": args.seed})
        census = signature_census(model, args.random, args.seed, args.tol)
        estimate = principal_stratum_estimate(model, args.random, args.seed, args.tol)
        table = [
            (str(sig), count, f"{census.frequency(sig):.6f}")
            for sig, count in sorted(census.counts.items(), reverse=True)
        ]
        print(format_table(("signature", "count", "frequency"), table))
        print(f"principal: {estimate.max_signature} at frequency {estimate.frequency:.6f}")
        document["census"] = census.to_dict()
        document["principal"] = estimate.to_dict()
    if args.out:
        emit({"provenance": provenance(loaded, options), **document}, args.out)
    return EXIT_OK


def cmd_sample(args: argparse.Namespace) -> int:
    loaded = load_source(args.model, args.degree_bound)
    space = _target_set(loaded.model.require_verified(), args)
    chart = Chart.parse(args.chart)
    window = parse_window(args.window)
    mesh = sample_surface(space, chart, window, args.grid)
    options: dict[str, Any] = {
        "mu": args.mu,
        "casimir": args.casimir or [],
        "chart": chart.to_text(),
        "window": [list(window[0]), list(window[1])],
        "grid": args.grid,
    }
    document = mesh_document(mesh, provenance(loaded, options))
    document["coordinates"] = list(space.names)
    if args.classify and not mesh.is_empty:
        if space.maximal_rank is None:
            maximal = estimate_maximal_rank(space, tol=args.tol)
            space = replace(space, maximal_rank=maximal)
        document["maximal_rank"] = space.maximal_rank
        singular = [
            index
            for index, vertex in enumerate(mesh.vertices)
            if classify_point(space, vertex, args.tol).verdict is PointClass.SINGULAR
        ]
        document["singular_vertices"] = singular
        logger.info("{} singular vertices out of {}", len(singular), len(mesh.vertices))
    emit(document, args.out)
    return EXIT_OK


def cmd_releq(args: argparse.Namespace) -> int:
    loaded = load_source(args.model, args.degree_bound)
    model = loaded.model.require_verified()
    spec = read_hamiltonian(model, args.ham, args.frame)
    mu = parse_values(args.mu)
    options: dict[str, Any] = {
        "mu": mu,
        "reduced": args.reduced,
        "seeds": args.seeds,
        "tol": args.tol,
        "seed": args.seed,
        "max_iter": args.max_iter,
    }
    names = _frame_names(model, spec.frame)
    document: dict[str, object] = {
        "hamiltonian": {"frame": str(spec.frame), "expr": poly_format(spec.expression, names)}
    }
    if args.reduced:
        hred = reduce_hamiltonian(model, spec, args.degree_bound).expression
        rs = reduced_space(model, mu, args.degree_bound, parse_casimirs(args.casimir))
        search = find_reduced_stationary(
            model, hred, rs, args.seeds, args.tol, args.seed, args.max_iter, args.degree_bound
        )
        document["reduced_hamiltonian"] = model.format_invariant_poly(hred)
        document["reduced_space"] = rs.to_dict()
        if args.leaf_check:
            checks = [
                leaf_extremum_check(model, hred, rs, result.point) for result in search.results
            ]
            document["leaf_checks"] = [
                {
                    "local_min": check.is_local_min,
                    "local_max": check.is_local_max,
                    "samples": check.samples_used,
                    "radius": check.radius,
                }
                for check in checks
            ]
    else:
        search = find_relative_equilibria(
            model, spec, mu, args.seeds, args.tol, args.seed, args.max_iter
        )
        search = classify_equilibria(model, spec, search)
    document["search"] = search.to_dict()
    emit({"provenance": provenance(loaded, options), **document}, args.out)
    search.require_results()
    for result in search.results:
        logger.info("Equilibrium at image {} ({})", np.round(result.image, 9), result.stability)
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    for path in export_catalog(args.out_dir):
        print(f"[OK] Exported {path}")
    return EXIT_OK


# -- entry point -----------------------------------------------------------------------


def _add_model(parser: argparse.ArgumentParser, degree_bound: bool = True) -> None:
    parser.add_argument("model", help="Model document path or catalog:key?name=value.")
    if degree_bound:
        parser.add_argument("--degree-bound", type=_positive_int, default=None)
    parser.add_argument("--out", default=None, help="Write the JSON document to this file.")


def _add_level(parser: argparse.ArgumentParser, required: bool) -> None:
    parser.add_argument("--mu", required=required, help="Momentum value, comma separated.")
    parser.add_argument(
        "--casimir", action="append", help="Fix a Casimir level, i=value (1-based, repeatable)."
    )


def build_parser() -> argparse.ArgumentParser:
    runtime = load_app_config().runtime
    parser = argparse.ArgumentParser(
        prog="symred", description="Reduction by invariants for symmetric Hamiltonian systems."
    )
    parser.add_argument("--log-level", default=runtime.log_level)
    parser.add_argument("--threads", type=_positive_int, default=None)
    parser.add_argument("--version", action="version", version=f"symred {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    list_cmd = commands.add_parser("list", help="Catalog models and their parameters.")
    list_cmd.add_argument("--out", default=None)
    list_cmd.set_defaults(handler=cmd_list)

    verify = commands.add_parser("verify", help="Invariance, relation and Casimir checks.")
    _add_model(verify)
    verify.set_defaults(handler=cmd_verify)

    reduce = commands.add_parser("reduce", help="Reduced space and induced structure.")
    _add_model(reduce)
    _add_level(reduce, required=True)
    reduce.set_defaults(handler=cmd_reduce)

    classify = commands.add_parser("classify", help="Singular or nonsingular point test.")
    _add_model(classify)
    _add_level(classify, required=False)
    classify.add_argument("--point", required=True, help="Point in invariant coordinates.")
    classify.add_argument("--tol", type=_positive_float, default=None)
    classify.set_defaults(handler=cmd_classify)

    strata = commands.add_parser("strata", help="Rank reports and principal stratum.")
    _add_model(strata, degree_bound=False)
    where = strata.add_mutually_exclusive_group(required=True)
    where.add_argument("--point", help="Phase-space point, comma separated.")
    where.add_argument("--random", type=_positive_int, help="Number of random samples.")
    strata.add_argument("--seed", type=_non_negative_int, default=0)
    strata.add_argument("--tol", type=_positive_float, default=None)
    strata.set_defaults(handler=cmd_strata)

    sample = commands.add_parser("sample", help="Surface mesh of a two-dimensional set.")
    _add_model(sample)
    _add_level(sample, required=False)
    sample.add_argument("--chart", required=True, help="Chart i,j->k (1-based).")
    sample.add_argument("--window", required=True, help="Window a:b,c:d.")
    sample.add_argument("--grid", type=_positive_int, default=40)
    sample.add_argument("--classify", action="store_true", help="List singular vertices.")
    sample.add_argument("--tol", type=_positive_float, default=None)
    sample.set_defaults(handler=cmd_sample)

    releq = commands.add_parser("releq", help="Relative equilibria and their stability.")
    _add_model(releq)
    _add_level(releq, required=True)
    releq.add_argument("--ham", default=None, help="Hamiltonian expression or file.")
    releq.add_argument("--frame", choices=[str(f) for f in Frame], default=None)
    releq.add_argument("--reduced", action="store_true", help="Solve on the reduced space.")
    releq.add_argument("--leaf-check", action="store_true", help="Sample leaves near results.")
    releq.add_argument("--seeds", type=_positive_int, default=None)
    releq.add_argument("--seed", type=_non_negative_int, default=None)
    releq.add_argument("--tol", type=_positive_float, default=None)
    releq.add_argument("--max-iter", type=_positive_int, default=None)
    releq.set_defaults(handler=cmd_releq)

    export = commands.add_parser("export", help="Write catalog model documents.")
    export.add_argument(
        "--out-dir",
        default=str(runtime.models_dir),
        help="Target directory (default: SYMRED_MODELS_DIR or models/).",
    )
    export.set_defaults(handler=cmd_export)
    return parser


def _run(handler: Callable[[argparse.Namespace], int], args: argparse.Namespace) -> int:
    try:
        return handler(args)
    except UnverifiedModelError as err:
        logger.error("{}", err)
        return EXIT_VERIFICATION_FAILED
    except (*INPUT_ERRORS, CliInputError) as err:
        logger.error("{}", err)
        return EXIT_INPUT_ERROR
    except SOLVER_ERRORS as err:
        logger.error("{}", err)
        return EXIT_NO_SOLUTION


def main(argv: Sequence[str] | None = None) -> int:
    try:
        parser = build_parser()
    except RuntimeError as err:
        configure_logging()
        logger.error("{}", err)
        return EXIT_INPUT_ERROR
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    if args.threads is not None:
        os.environ["SYMRED_THREADS"] = str(args.threads)
    return _run(args.handler, args)


if __name__ == "__main__":
    raise SystemExit(main())
