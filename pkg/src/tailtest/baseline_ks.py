"""Kolmogorov/Smirnov baseline for side-by-side comparison.

Two-sample statistic: D = sup_x |F_A(x) - F_B(x)|, reported with the
weighted value lambda = D / sqrt(1/N_A + 1/N_B); the one-sample limit
(N_B -> infinity) is the classical test with lambda = sqrt(n) D. The
asymptotic law

    P(D > lambda) = 2 sum (-1)^(m-1) e^(-2 m^2 lambda^2)
                  = 1 - (sqrt(2 pi)/lambda) sum e^(-(2m-1)^2 pi^2/(8 lambda^2))

is applied for all n; results with n < 20 carry an accuracy warning.
"""

import math
from dataclasses import dataclass

import numpy as np

from .statistic import Sample, validate_unit_interval as _unit

_SMALL_N = 20
_SERIES_SWITCH = 1.0


@dataclass
class KsResult:
    D: float
    lam: float
    p: float | None
    n_a: int
    n_b: int | None  # None marks the one-sample (infinite reference) case
    small_sample_warning: bool = False

    def with_p(self) -> "KsResult":
        self.p = ks_p(self.lam)
        return self


def smirnov_statistic(sample_a: Sample, sample_b: Sample) -> KsResult:
    """Weighted sup-distance between two ECDFs (p left unset)."""
    a = np.sort(sample_a.values)
    b = np.sort(sample_b.values)
    merged = np.concatenate([a, b])
    # both ECDFs are right-continuous steps, so the sup over x is attained
    # at a merged breakpoint evaluated from the right
    fa = np.searchsorted(a, merged, side="right") / a.size
    fb = np.searchsorted(b, merged, side="right") / b.size
    d = float(np.max(np.abs(fa - fb)))
    lam = d / math.sqrt(1.0 / a.size + 1.0 / b.size)
    return KsResult(D=d, lam=lam, p=None, n_a=a.size, n_b=b.size,
                    small_sample_warning=min(a.size, b.size) < _SMALL_N)


def kolmogorov_statistic(sample: Sample, model) -> KsResult:
    """One-sample sup-distance against a theoretical CDF (p left unset).

    The sup of a step-vs-model difference occurs at one-sided limits, so
    both gaps enter: F_n(x_i) - F(x_i) from the right of each jump and
    F(x_i^-) - F_n(x_i^-) from the left (the left limit of the model is
    taken at the adjacent float, which also makes a step model identical
    to the ECDF measure as distance 0).
    """
    x = np.sort(sample.values)
    f_hi = _unit(model.evaluate(x))
    f_lo = _unit(model.evaluate(np.nextafter(x, -np.inf)))
    n = x.size
    steps_hi = np.arange(1, n + 1) / n
    steps_lo = np.arange(0, n) / n
    d = float(max(np.max(steps_hi - f_hi), np.max(f_lo - steps_lo)))
    d = max(d, 0.0)
    lam = math.sqrt(n) * d
    return KsResult(D=d, lam=lam, p=None, n_a=n, n_b=None,
                    small_sample_warning=n < _SMALL_N)


def ks_p(lam: float) -> float:
    """P(D > lambda) under the asymptotic law.

    The alternating series converges fast for lambda >= 1; below that the
    theta-dual form is used. Both agree to ~1e-12 at the switch point.
    """
    if lam < 0.0:
        raise ValueError(f"lambda must be nonnegative, got {lam}")
    if lam < 0.04:
        return 1.0  # dual-series terms underflow; the probability is 1
    if lam >= _SERIES_SWITCH:
        total, sign = 0.0, 1.0
        for m in range(1, 200):
            term = math.exp(-2.0 * m * m * lam * lam)
            total += sign * term
            if term < 1e-18:
                break
            sign = -sign
        return min(1.0, max(0.0, 2.0 * total))
    total = 0.0
    c = math.pi * math.pi / (8.0 * lam * lam)
    for m in range(1, 200):
        term = math.exp(-((2 * m - 1) ** 2) * c)
        total += term
        if term < 1e-18 * max(total, 1e-30):
            break
    return min(1.0, max(0.0, 1.0 - math.sqrt(2.0 * math.pi) / lam * total))
