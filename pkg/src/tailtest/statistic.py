"""The tail-sensitive statistic A and its binned variant.

Right test: A = -(a/n) sum_i ln(1 - F(x_i)^a); the left test applies the
same sum to 1 - F. Larger a weights the relevant tail more strongly. A
transformed value of exactly 1 makes the log diverge: by default this is
reported as an infinite statistic (maximal evidence against the null, the
p-value is 0); an optional clamp epsilon replaces such values by 1 - eps
instead and counts them.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidModelError
from .kernels import stat_sum

_BOUNDARY_SNAP = 1e-12


@dataclass(frozen=True)
class Sample:
    """An unordered collection of real observations."""

    values: np.ndarray

    def __init__(self, values):
        arr = np.asarray(values, dtype=float).ravel()
        if arr.size < 1:
            raise ValueError("a sample needs at least one observation")
        if not np.all(np.isfinite(arr)):
            raise ValueError("sample values must be finite")
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class BinnedSample:
    """Coarse-grained observations: bin positions with occupation counts."""

    positions: np.ndarray
    counts: np.ndarray

    def __init__(self, positions, counts):
        pos = np.asarray(positions, dtype=float).ravel()
        cnt = np.asarray(counts).ravel()
        if pos.size != cnt.size or pos.size < 1:
            raise ValueError("positions and counts must have equal, nonzero length")
        if not np.all(np.isfinite(pos)):
            raise ValueError("bin positions must be finite")
        if np.any(np.diff(pos) <= 0.0):
            raise ValueError("bin positions must be strictly increasing")
        if np.any(cnt <= 0) or np.any(cnt != np.floor(cnt)):
            raise ValueError("bin counts must be positive integers")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "counts", cnt.astype(np.int64))

    @property
    def total(self) -> int:
        return int(self.counts.sum())


class TailSide(enum.Enum):
    RIGHT = "right"
    LEFT = "left"


@dataclass(frozen=True)
class StatisticResult:
    value: float
    side: TailSide
    a: float
    n: int
    clamped_count: int = 0

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)


def probability_transform(sample: Sample, model) -> np.ndarray:
    """F(x_i) in input order, validated against [0, 1].

    Values outside [0, 1] by more than 1e-12 raise InvalidModelError (a
    broken user model); smaller excursions are snapped to the boundary to
    tolerate rounding in table-backed CDFs.
    """
    f = np.asarray(model.evaluate(sample.values), dtype=float)
    return validate_unit_interval(f)


def validate_unit_interval(f: np.ndarray) -> np.ndarray:
    bad = (f < -_BOUNDARY_SNAP) | (f > 1.0 + _BOUNDARY_SNAP) | ~np.isfinite(f)
    if bad.any():
        i = int(np.argmax(bad))
        raise InvalidModelError(
            f"model CDF returned {f[i]!r} outside [0, 1] (index {i})")
    return np.clip(f, 0.0, 1.0)


def _aggregate(u, weights, total, a, clamp_eps):
    """Shared accumulation: u are side-transformed values in [0, 1]."""
    clamped = 0
    if clamp_eps is not None:
        if not (0.0 < clamp_eps < 1.0):
            raise ValueError("clamp epsilon must lie in (0, 1)")
        over = u > 1.0 - clamp_eps
        clamped = int(np.sum(weights[over])) if over.any() else 0
        u = np.minimum(u, 1.0 - clamp_eps)
    if np.any(u >= 1.0):
        return math.inf, clamped
    # ascending order fixes the summation order across platforms
    order = np.argsort(u, kind="stable")
    total_sum = stat_sum(np.ascontiguousarray(u[order]),
                         np.ascontiguousarray(weights[order], dtype=np.float64), a)
    return -(a / total) * total_sum, clamped


def a_statistic(sample: Sample, model, a: float, side: TailSide,
                clamp_eps: float | None = None) -> StatisticResult:
    """Tail statistic of a sample against a theoretical CDF.

    Parameters
    ----------
    sample : Sample
    model : object with ``evaluate(x) -> F in [0, 1]``
    a : positive tail exponent
    side : TailSide.RIGHT emphasizes F near 1, TailSide.LEFT near 0
    clamp_eps : optional; replace transformed values above 1 - eps instead
        of flagging the statistic infinite
    """
    if not a > 0.0:
        raise ValueError(f"tail exponent a must be positive, got {a}")
    u = probability_transform(sample, model)
    if side is TailSide.LEFT:
        u = 1.0 - u
    value, clamped = _aggregate(u, np.ones_like(u), sample.n, a, clamp_eps)
    return StatisticResult(value=value, side=side, a=a, n=sample.n,
                           clamped_count=clamped)


def a_statistic_binned(binned: BinnedSample, model, a: float, side: TailSide,
                       clamp_eps: float | None = None) -> StatisticResult:
    """Binned form -(a/N) sum_i d_i ln(1 - F(x_i)^a); equals the plain
    statistic on the sample with each position repeated d_i times."""
    if not a > 0.0:
        raise ValueError(f"tail exponent a must be positive, got {a}")
    f = np.asarray(model.evaluate(binned.positions), dtype=float)
    u = validate_unit_interval(f)
    if side is TailSide.LEFT:
        u = 1.0 - u
    weights = binned.counts.astype(np.float64)
    value, clamped = _aggregate(u, weights, binned.total, a, clamp_eps)
    return StatisticResult(value=value, side=side, a=a, n=binned.total,
                           clamped_count=clamped)
