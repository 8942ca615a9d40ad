"""Proximal-gradient sparse coding (IHT / IST / ICT) and cost evaluation.

Each iteration takes an exact gradient step on ``||y - A x||**2`` and then
shrinks the coefficients entrywise::

    x <- shrink(x - eta * 2 * A.T (A x - y))

By default the shrink uses the penalty parameters as given. With
``shrink_scaling="proximal"`` the penalty weight is multiplied by ``2*eta``,
which makes the update the exact proximal-gradient step for :func:`cost`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .dictionary import Dictionary
from .metrics import percent_nonzero, psnr_from_mse
from .prox import RootPolicy, cauchy_shrink_array, hard_threshold, soft_threshold

SHRINK_SCALINGS = ("literal", "proximal")


class DivergenceError(ArithmeticError):
    """Iterates became non-finite; usually the step size is too large."""

    def __init__(self, iteration: int):
        super().__init__(f"non-finite coefficients at iteration {iteration}; "
                         "reduce the step size")
        self.iteration = iteration


@dataclass(frozen=True)
class Hard:
    """l0 penalty; ``tau`` is the hard threshold, cost weight ``tau**2``."""

    tau: float
    algorithm = "IHT"

    def __post_init__(self):
        if not self.tau >= 0:
            raise ValueError(f"tau must be >= 0, got {self.tau}")

    @property
    def lam(self) -> float:
        return self.tau

    def scaled(self, factor: float) -> "Hard":
        return Hard(self.tau * math.sqrt(factor))

    def shrink(self, v):
        return hard_threshold(v, self.tau)

    def penalty(self, x) -> float:
        return self.tau ** 2 * float(np.count_nonzero(x))


@dataclass(frozen=True)
class Soft:
    """l1 penalty; ``tau`` is the soft threshold, cost weight ``2*tau``."""

    tau: float
    algorithm = "IST"

    def __post_init__(self):
        if not self.tau >= 0:
            raise ValueError(f"tau must be >= 0, got {self.tau}")

    @property
    def lam(self) -> float:
        return self.tau

    def scaled(self, factor: float) -> "Soft":
        return Soft(self.tau * factor)

    def shrink(self, v):
        return soft_threshold(v, self.tau)

    def penalty(self, x) -> float:
        return 2.0 * self.tau * float(np.sum(np.abs(x)))


@dataclass(frozen=True)
class Cauchy:
    """Negative log Cauchy penalty with weight ``lam`` and scale ``gamma``."""

    lam: float
    gamma: float
    policy: RootPolicy = RootPolicy.OBJECTIVE_MIN
    algorithm = "ICT"

    def __post_init__(self):
        if not self.lam >= 0:
            raise ValueError(f"lam must be >= 0, got {self.lam}")
        if not self.gamma >= 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        object.__setattr__(self, "policy", RootPolicy.parse(self.policy))

    def scaled(self, factor: float) -> "Cauchy":
        return Cauchy(self.lam * factor, self.gamma, self.policy)

    def shrink(self, v):
        return cauchy_shrink_array(v, self.lam, self.gamma, self.policy)

    def penalty(self, x) -> float:
        if self.gamma <= 0:
            raise ValueError("Cauchy cost is undefined for gamma == 0")
        g = self.gamma
        x = np.asarray(x, dtype=float)
        return -self.lam * float(np.sum(np.log(g / (np.pi * (g * g + x * x)))))


Penalty = Union[Hard, Soft, Cauchy]


def shrink_vector(v, penalty: Penalty):
    """Apply the penalty's scalar shrinkage to every entry of ``v``."""
    return penalty.shrink(v)


@dataclass(frozen=True)
class SolverConfig:
    step_size: float = 0.005
    max_iterations: int = 200
    cost_tolerance: float = 0.0
    record_trace: bool = False
    shrink_scaling: str = "literal"
    epsilon_zero: float = 1e-6

    def __post_init__(self):
        if not self.step_size > 0:
            raise ValueError(f"step_size must be > 0, got {self.step_size}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not self.cost_tolerance >= 0:
            raise ValueError("cost_tolerance must be >= 0")
        if self.shrink_scaling not in SHRINK_SCALINGS:
            raise ValueError(f"shrink_scaling must be one of {SHRINK_SCALINGS}")


@dataclass(frozen=True)
class TraceEntry:
    cost: float
    percent_nonzero: float
    psnr_db: float | None = None


@dataclass
class CodingResult:
    coefficients: np.ndarray
    iterations_run: int
    trace: list[TraceEntry] = field(default_factory=list)


def gradient_step(x, dictionary: Dictionary, y, eta: float):
    """``x - eta * 2 * A.T (A x - y)``."""
    with np.errstate(over="ignore", invalid="ignore"):
        residual = dictionary.apply(x) - np.asarray(y, dtype=float)
        return x - eta * 2.0 * dictionary.adjoint(residual)


def cost(x, y, dictionary: Dictionary, penalty: Penalty) -> float:
    """Squared reconstruction error plus the weighted penalty.

    Hard: ``tau**2 * ||x||_0``; Soft: ``2*tau * ||x||_1``;
    Cauchy: ``-lam * sum(log(gamma / (pi*(gamma**2 + x**2))))``.
    """
    residual = np.asarray(y, dtype=float) - dictionary.apply(x)
    return float(np.sum(residual * residual)) + penalty.penalty(x)


def _effective(penalty: Penalty, config: SolverConfig) -> Penalty:
    if config.shrink_scaling == "proximal":
        return penalty.scaled(2.0 * config.step_size)
    return penalty


def sparse_code(y, dictionary: Dictionary, penalty: Penalty,
                config: SolverConfig = SolverConfig(),
                reference=None) -> CodingResult:
    """Code ``y`` (an M-vector, or M x T columns coded independently).

    ``reference``, if given, is the clean signal against which the trace
    reports PSNR (peak 1) of ``A x``.
    """
    y = np.asarray(y, dtype=float)
    if y.shape[0] != dictionary.n_features:
        raise ValueError(f"signal length {y.shape[0]} does not match "
                         f"dictionary with {dictionary.n_features} rows")
    shrinker = _effective(penalty, config)
    eta = config.step_size
    track_cost = config.record_trace or config.cost_tolerance > 0
    if track_cost and isinstance(penalty, Cauchy) and penalty.gamma <= 0:
        raise ValueError("cost tracking needs gamma > 0 for the Cauchy penalty")

    x = np.zeros((dictionary.n_atoms,) + y.shape[1:])
    trace: list[TraceEntry] = []
    prev = cost(x, y, dictionary, penalty) if track_cost else None
    it = 0
    for it in range(1, config.max_iterations + 1):
        x = gradient_step(x, dictionary, y, eta)
        if not np.all(np.isfinite(x)):
            raise DivergenceError(it)
        x = shrinker.shrink(x)
        if not track_cost:
            continue
        current = cost(x, y, dictionary, penalty)
        if config.record_trace:
            p = None
            if reference is not None:
                err = float(np.mean((dictionary.apply(x) - reference) ** 2))
                p = psnr_from_mse(err)
            trace.append(TraceEntry(current, percent_nonzero(x, config.epsilon_zero), p))
        if config.cost_tolerance > 0:
            if abs(prev - current) / max(1.0, abs(current)) < config.cost_tolerance:
                break
        prev = current
    return CodingResult(coefficients=x, iterations_run=it, trace=trace)
