"""Experiment configuration, loadable from a single JSON document."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from ..data_io import DatasetSpec
from ..prox import RootPolicy
from ..solver import SHRINK_SCALINGS

ALGORITHMS = ("IHT", "IST", "ICT")


def default_lambda_grid() -> list[float]:
    """16 log-spaced values from 1e-4 to 10."""
    return [float(v) for v in np.logspace(-4, 1, 16)]


@dataclass
class ExperimentConfig:
    datasets: list[DatasetSpec]
    algorithms: list[str] = field(default_factory=lambda: list(ALGORITHMS))
    lambda_grid: list[float] = field(default_factory=default_lambda_grid)
    gamma: float = 0.1
    eta: float = 0.005
    iterations: int = 200
    stride: int = 1
    epsilon_zero: float = 1e-6
    root_policy: RootPolicy = RootPolicy.OBJECTIVE_MIN
    shrink_scaling: str = "literal"
    patch_edge: int = 8
    atoms_per_axis: int = 12
    chunk_size: int = 1024
    threads: int = 1
    output_dir: str = "bench_out"
    plots: bool = True

    def __post_init__(self):
        self.datasets = [d if isinstance(d, DatasetSpec) else DatasetSpec(**d)
                         for d in self.datasets]
        self.root_policy = RootPolicy.parse(self.root_policy)
        self.algorithms = [a.upper() for a in self.algorithms]
        self.lambda_grid = [float(v) for v in self.lambda_grid]
        self.validate()

    def validate(self) -> None:
        if not self.datasets:
            raise ValueError("at least one dataset is required")
        if not self.algorithms:
            raise ValueError("at least one algorithm is required")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms: {sorted(unknown)}")
        if not self.lambda_grid:
            raise ValueError("lambda_grid must not be empty")
        if any(not v > 0 for v in self.lambda_grid):
            raise ValueError("lambda_grid values must be positive")
        names = [d.name for d in self.datasets]
        if len(set(names)) != len(names):
            raise ValueError(f"dataset names must be unique: {names}")
        for name in ("gamma", "eta"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        for name in ("iterations", "stride", "patch_edge", "atoms_per_axis",
                     "chunk_size", "threads"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.epsilon_zero < 0:
            raise ValueError("epsilon_zero must be >= 0")
        if self.shrink_scaling not in SHRINK_SCALINGS:
            raise ValueError(f"shrink_scaling must be one of {SHRINK_SCALINGS}")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        data = dict(data)
        if data.get("lambda_grid") is None:
            data.pop("lambda_grid", None)
        return cls(**data)

    @classmethod
    def from_json(cls, path: str | Path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def with_overrides(self, **overrides) -> "ExperimentConfig":
        overrides = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **overrides)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["root_policy"] = self.root_policy.value
        out["datasets"] = [{**asdict(d), "kind": d.kind.value} for d in self.datasets]
        return out
