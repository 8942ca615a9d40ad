"""Shrinkage operators: hard, soft and Cauchy thresholding.

The Cauchy operator is the proximal map of the negative log Cauchy density
(location 0, scale ``gamma``)::

    prox(x) = argmin_z (z - x)**2 - lam * log(gamma / (pi * (gamma**2 + z**2)))

Its stationary points are the real roots of

    z**3 - x*z**2 + (gamma**2 + lam)*z - gamma**2*x = 0

solved in closed form through the depressed cubic ``z = x/3 + t``: Cardano
when the discriminant is positive, Viete's trigonometric form otherwise.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numba
import numpy as np

__all__ = [
    "CauchyPenalty",
    "CubicRealRoots",
    "RootPolicy",
    "hard_threshold",
    "soft_threshold",
    "solve_prox_cubic",
    "prox_objective",
    "cauchy_shrink",
    "cauchy_shrink_gamma_zero",
    "cauchy_shrink_array",
    "policy_disagreements",
]

# Discriminants with |disc| below this fraction of max(1, q**2, |p|**3) are
# treated as zero (repeated root).
DEGENERATE_TOL = 1e-14


class RootPolicy(enum.Enum):
    """How to pick among three real stationary points."""

    PAPER_LARGEST_ABS = "largest-abs"
    OBJECTIVE_MIN = "objective-min"

    @classmethod
    def parse(cls, value: "RootPolicy | str") -> "RootPolicy":
        if isinstance(value, cls):
            return value
        for member in cls:
            if value in (member.value, member.name, member.name.lower()):
                return member
        raise ValueError(f"unknown root policy {value!r}")


@dataclass(frozen=True)
class CauchyPenalty:
    lam: float
    gamma: float
    delta: float = 0.0

    def __post_init__(self):
        if not (self.lam >= 0.0):
            raise ValueError(f"lam must be >= 0, got {self.lam}")
        if not (self.gamma >= 0.0):
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.delta != 0.0:
            raise ValueError("only a zero location (delta=0) is supported")


@dataclass(frozen=True)
class CubicRealRoots:
    roots: tuple[float, ...]
    discriminant: float


def hard_threshold(x, tau):
    """Keep entries with ``|x| > tau``, zero the rest."""
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    if np.ndim(x) == 0:
        return x if abs(x) > tau else 0.0 * x
    x = np.asarray(x, dtype=float)
    return np.where(np.abs(x) > tau, x, 0.0)


def soft_threshold(x, tau):
    """Shrink toward zero by ``tau``; the dead zone is ``|x| <= tau``."""
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    if np.ndim(x) == 0:
        if x > tau:
            return x - tau
        if x < -tau:
            return x + tau
        return 0.0 * x
    x = np.asarray(x, dtype=float)
    return np.where(x > tau, x - tau, np.where(x < -tau, x + tau, 0.0))


@numba.njit(cache=True, nogil=True)
def _cubic(z, x, lam, g2):
    return ((z - x) * z + (g2 + lam)) * z - g2 * x


@numba.njit(cache=True, nogil=True)
def _polish(z, x, lam, g2):
    # Single Newton step, kept only if it lowers the residual.
    f = _cubic(z, x, lam, g2)
    df = (3.0 * z - 2.0 * x) * z + (g2 + lam)
    if df == 0.0:
        return z
    z_new = z - f / df
    if abs(_cubic(z_new, x, lam, g2)) < abs(f):
        return z_new
    return z


@numba.njit(cache=True, nogil=True)
def _real_roots(x, lam, gamma, out):
    """Fill ``out`` with the real roots (unsorted); return (count, disc)."""
    g2 = gamma * gamma
    p = lam + g2 - x * x / 3.0
    q = -(2.0 / 27.0) * x * x * x + (lam - 2.0 * g2) * x / 3.0
    disc = q * q / 4.0 + p * p * p / 27.0
    scale = max(1.0, q * q, abs(p) ** 3)
    shift = x / 3.0
    if disc > DEGENERATE_TOL * scale:
        # Cube-root argument chosen to avoid cancellation; partner term from
        # u*v = -p/3.
        s = math.sqrt(disc)
        a = -q / 2.0 - math.copysign(s, q)
        u = np.cbrt(a)
        v = -p / (3.0 * u) if u != 0.0 else 0.0
        out[0] = _polish(u + v + shift, x, lam, g2)
        return 1, disc
    if p >= 0.0:
        # p == 0 forces q == 0 here: triple root at t = 0.
        out[0] = _polish(shift, x, lam, g2)
        return 1, disc
    m = 2.0 * math.sqrt(-p / 3.0)
    arg = (1.5 * q / p) * math.sqrt(-3.0 / p)
    arg = min(1.0, max(-1.0, arg))
    theta = math.acos(arg) / 3.0
    for k in range(3):
        t = m * math.cos(theta - 2.0 * math.pi * k / 3.0)
        out[k] = _polish(t + shift, x, lam, g2)
    return 3, disc


@numba.njit(cache=True, nogil=True)
def _shrink_magnitude(ax, lam, gamma, largest, buf):
    """Selected root for a non-negative input ``ax``; also flags disagreement."""
    n, _ = _real_roots(ax, lam, gamma, buf)
    if n == 1:
        return min(max(buf[0], 0.0), ax), False
    g2 = gamma * gamma
    best_obj = 0.0
    best = 0.0
    big = 0.0
    for i in range(n):
        z = min(max(buf[i], 0.0), ax)
        obj = (z - ax) * (z - ax) + lam * math.log(g2 + z * z)
        if i == 0 or obj < best_obj:
            best_obj = obj
            best = z
        if z > big:
            big = z
    chosen = big if largest else best
    return chosen, big != best


@numba.njit(cache=True, nogil=True)
def _shrink_kernel(xs, lam, gamma, largest, out):
    buf = np.empty(3)
    disagree = 0
    for i in range(xs.size):
        x = xs[i]
        ax = abs(x)
        if ax == 0.0:
            out[i] = 0.0 * x
            continue
        mag, differ = _shrink_magnitude(ax, lam, gamma, largest, buf)
        if differ:
            disagree += 1
        out[i] = math.copysign(mag, x)
    return disagree


def solve_prox_cubic(x: float, penalty: CauchyPenalty) -> CubicRealRoots:
    """All real roots of the Cauchy stationarity cubic, sorted ascending.

    A repeated root at a vanishing discriminant is reported once.
    """
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x}")
    buf = np.empty(3)
    n, disc = _real_roots(float(x), float(penalty.lam), float(penalty.gamma), buf)
    unique: list[float] = []
    for r in sorted(float(v) for v in buf[:n]):
        if not unique or abs(r - unique[-1]) > 1e-12 * max(1.0, abs(r)):
            unique.append(r)
    return CubicRealRoots(roots=tuple(unique), discriminant=float(disc))


def prox_objective(z, x, penalty: CauchyPenalty):
    """``(z - x)**2 - lam*log(gamma / (pi*(gamma**2 + z**2)))``."""
    if penalty.gamma <= 0.0:
        raise ValueError("prox_objective needs gamma > 0; use the gamma=0 operator")
    g = penalty.gamma
    return (z - x) ** 2 - penalty.lam * np.log(g / (np.pi * (g * g + z * z)))


def cauchy_shrink_gamma_zero(x, lam):
    """Limit of the Cauchy operator as ``gamma -> 0``.

    Nonzero branch ``x/2 +- sqrt(x**2 - 4*lam)/2`` for ``|x| >= 2*lam``.
    For ``lam < 1`` the square root has no real value on
    ``2*lam <= |x| < 2*sqrt(lam)``; those inputs map to 0.
    """
    if not lam > 0:
        raise ValueError(f"lam must be > 0, got {lam}")
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    rad = ax * ax - 4.0 * lam
    live = (ax >= 2.0 * lam) & (rad >= 0.0)
    mag = np.where(live, ax / 2.0 + np.sqrt(np.where(live, rad, 0.0)) / 2.0, 0.0)
    out = np.where(live, np.copysign(mag, x), 0.0)
    return float(out) if scalar else out


def _shrink_with_count(x, lam, gamma, policy):
    policy = RootPolicy.parse(policy)
    x = np.asarray(x, dtype=float)
    flat = np.ascontiguousarray(x).ravel()
    finite = np.isfinite(flat)
    if not finite.all():
        bad = int(np.flatnonzero(~finite)[0])
        raise ValueError(f"non-finite input at flat index {bad}: {flat[bad]}")
    if lam == 0.0:
        return x.copy(), 0
    if gamma == 0.0:
        return cauchy_shrink_gamma_zero(x, lam), 0
    out = np.empty_like(flat)
    n = _shrink_kernel(flat, float(lam), float(gamma),
                       policy is RootPolicy.PAPER_LARGEST_ABS, out)
    return out.reshape(x.shape), int(n)


def cauchy_shrink_array(x, lam, gamma, policy=RootPolicy.OBJECTIVE_MIN):
    """Entrywise Cauchy shrinkage of an array of any shape."""
    return _shrink_with_count(x, lam, gamma, policy)[0]


def policy_disagreements(x, lam, gamma) -> int:
    """Number of entries where the largest-|z| root is not the objective minimizer."""
    return _shrink_with_count(x, lam, gamma, RootPolicy.OBJECTIVE_MIN)[1]


def cauchy_shrink(x: float, penalty: CauchyPenalty,
                  policy: RootPolicy | str = RootPolicy.OBJECTIVE_MIN) -> float:
    """Scalar Cauchy proximal operator.

    ``lam == 0`` returns ``x`` untouched and ``gamma == 0`` defers to
    :func:`cauchy_shrink_gamma_zero`.
    """
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x}")
    return float(cauchy_shrink_array(np.array([float(x)]), penalty.lam,
                                     penalty.gamma, policy)[0])
