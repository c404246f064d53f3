from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()


@dataclass(frozen=True)
class RankSettings:
    tol: float
    maximal_rank_samples: int


@dataclass(frozen=True)
class SolverSettings:
    tol: float
    max_iter: int
    seeds: int
    seed: int


@dataclass(frozen=True)
class RuntimeSettings:
    threads: int
    log_level: str
    models_dir: Path


@dataclass(frozen=True)
class AppConfig:
    rank: RankSettings
    solver: SolverSettings
    runtime: RuntimeSettings


def _parse_float(name: str, default: str) -> float:
    raw = os.getenv(name, default)
    try:
        value = float(raw)
    except ValueError as err:
        raise RuntimeError(f"Invalid float in {name}: {raw}") from err
    if value <= 0:
        raise RuntimeError(f"{name} must be positive, got {raw}")
    return value


def _parse_int(name: str, default: str, *, minimum: int = 1) -> int:
    raw = os.getenv(name, default)
    try:
        value = int(raw)
    except ValueError as err:
        raise RuntimeError(f"Invalid integer in {name}: {raw}") from err
    if value < minimum:
        raise RuntimeError(f"{name} must be >= {minimum}, got {raw}")
    return value


def get_thread_count() -> int:
    return _parse_int("SYMRED_THREADS", str(os.cpu_count() or 1))


def get_rank_settings() -> RankSettings:
    return RankSettings(
        tol=_parse_float("SYMRED_RANK_TOL", "1e-9"),
        maximal_rank_samples=_parse_int("SYMRED_MAXRANK_SAMPLES", "256"),
    )


def get_solver_settings() -> SolverSettings:
    return SolverSettings(
        tol=_parse_float("SYMRED_SOLVER_TOL", "1e-10"),
        max_iter=_parse_int("SYMRED_SOLVER_MAX_ITER", "100"),
        seeds=_parse_int("SYMRED_SOLVER_SEEDS", "64"),
        seed=_parse_int("SYMRED_SEED", "0", minimum=0),
    )


def load_app_config() -> AppConfig:
    runtime = RuntimeSettings(
        threads=get_thread_count(),
        log_level=os.getenv("SYMRED_LOG_LEVEL", "INFO").upper(),
        models_dir=Path(os.getenv("SYMRED_MODELS_DIR", "models")).expanduser(),
    )
    return AppConfig(
        rank=get_rank_settings(),
        solver=get_solver_settings(),
        runtime=runtime,
    )
