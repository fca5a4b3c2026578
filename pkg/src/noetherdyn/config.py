"""Run configurations shared by the CLI and the scripts."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .noether import DEFAULT_HORIZON


@dataclass(frozen=True)
class AnalysisConfig:
    horizon: int = DEFAULT_HORIZON
    digits: int = 30
    sampling: bool = True
    seed: int = 0
    samples: int = 20_000
    n_max: int = 12
    N_max: int = 1000

    def as_kwargs(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class GridRunConfig:
    d_max: int = 6
    n_max: int = 4
    orbit_depth: int = 50


@dataclass(frozen=True)
class CesaroConfig:
    N_max: int = 1000
    schedule: tuple = (10, 20, 50, 100, 200, 500, 1000)


@dataclass(frozen=True)
class SamplingConfig:
    samples: int = 100_000
    n_max: int = 12
    seed: int = 0
    workers: int = 1
