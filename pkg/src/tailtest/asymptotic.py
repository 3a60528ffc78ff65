"""Limiting distribution for a, n -> infinity with alpha = a/n fixed.

The characteristic function degenerates to

    phi(t) = exp(-gamma/alpha - psi(1 - i t alpha)/alpha),

with cumulants sigma_k = k! zeta(k+1) alpha^(k-1). The CDF G_inf comes from
the shared inversion engine; for large alpha the two-term series

    G_inf(alpha; sigma) = (1 - e^-y)^(1/alpha) (1 + f2(y)/alpha^2 + ...),
    y = sigma/alpha,   f2(y) = (y/2) ln(1 - e^-y) - (1/2) sum_l e^(-ly)/l^2,

is available as a cheap evaluator (f1 vanishes identically).
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .inversion import CharFn, InversionSettings, invert_cdf, invert_pdf
from .specfun import EULER_GAMMA, digamma_array, dilog_exp

__all__ = ["LimitSpec", "SeriesTerms", "g_inf", "G_inf", "G_inf_grid",
           "g_inf_grid", "f2", "G_inf_series"]

_PI2_12 = math.pi * math.pi / 12.0


@dataclass(frozen=True)
class LimitSpec:
    """The limit law is indexed by alpha = a/n alone."""

    alpha: float

    def __post_init__(self):
        if not (self.alpha > 0.0 and math.isfinite(self.alpha)):
            raise ValueError(f"alpha must be positive and finite, got {self.alpha}")


@dataclass(frozen=True)
class SeriesTerms:
    """Pieces of the large-alpha series, truncated after f2."""

    y: float
    leading: float
    f2_correction: float  # f2(y)/alpha^2, the applied correction
    k_max: int
    alpha: float

    @property
    def value(self) -> float:
        return self.leading * (1.0 + self.f2_correction)

    @property
    def error_indicator(self) -> float:
        """Next-order heuristic |f2(y)|/alpha^3."""
        return abs(self.f2_correction) / self.alpha


def _limit_char_fn(spec: LimitSpec) -> CharFn:
    # exp(-psi(w)/alpha) = w^(-1/alpha) exp(h), h = 1/(2 alpha w)
    # + 1/(12 alpha w^2) + O(w^-4); expand exp(h) through w^-3
    alpha = spec.alpha
    amplitude = math.exp(-EULER_GAMMA / alpha)
    a1 = 1.0 / (2.0 * alpha)
    a2 = 1.0 / (12.0 * alpha)
    coeffs = (1.0,
              a1,
              a2 + a1 * a1 / 2.0,
              a1 * a2 + a1 ** 3 / 6.0)

    def phi(t):
        w = 1.0 - 1j * t * alpha
        return np.exp(-EULER_GAMMA / alpha - digamma_array(w) / alpha)

    return CharFn(phi=phi, amplitude=amplitude, kappa=1.0 / alpha,
                  coeffs=coeffs, scale=alpha)


def G_inf_grid(sigmas, spec: LimitSpec, settings: InversionSettings | None = None):
    """Limiting CDF on a grid; returns (values, inversion report)."""
    settings = settings or InversionSettings()
    return invert_cdf(sigmas, _limit_char_fn(spec), settings)


def G_inf(sigma: float, spec: LimitSpec,
          settings: InversionSettings | None = None) -> float:
    """Limiting CDF at sigma (0 for sigma <= 0)."""
    vals, _ = G_inf_grid(np.array([float(sigma)]), spec, settings)
    return float(vals[0])


def g_inf_grid(points, spec: LimitSpec, settings: InversionSettings | None = None):
    """Limiting density on a grid; returns (values, inversion report)."""
    settings = settings or InversionSettings()
    return invert_pdf(points, _limit_char_fn(spec), settings)


def g_inf(s: float, spec: LimitSpec,
          settings: InversionSettings | None = None) -> float:
    """Limiting density at s (0 for s < 0; diverges at 0+ when alpha > 1)."""
    vals, _ = g_inf_grid(np.array([float(s)]), spec, settings)
    return float(vals[0])


def f2(y: float) -> float:
    """Second series coefficient; monotone from -pi^2/12 at y=0 to 0 at infinity."""
    if y < 0.0:
        raise ValueError(f"f2 requires y >= 0, got {y}")
    if y == 0.0:
        return -_PI2_12
    if math.isinf(y):
        return 0.0
    # ln(1 - e^-y) via expm1 keeps small y accurate
    return 0.5 * y * math.log(-math.expm1(-y)) - 0.5 * dilog_exp(y)


def G_inf_series(sigma: float, spec: LimitSpec,
                 warn_threshold: float = 5.0) -> SeriesTerms:
    """Large-alpha series value of G_inf, truncated after the f2 term.

    Returns the pieces (leading factor, applied correction); the combined
    value and the |f2|/alpha^3 error indicator are exposed as properties.
    """
    if sigma <= 0.0:
        raise ValueError(f"series evaluation requires sigma > 0, got {sigma}")
    alpha = spec.alpha
    if alpha < 1.0:
        raise ValueError(f"the series requires alpha >= 1, got {alpha}")
    if alpha < warn_threshold:
        warnings.warn(f"series truncated at f2 is inaccurate for alpha < "
                      f"{warn_threshold} (got {alpha})")
    y = sigma / alpha
    leading = math.exp(math.log(-math.expm1(-y)) / alpha)
    correction = f2(y) / (alpha * alpha)
    return SeriesTerms(y=y, leading=leading, f2_correction=correction,
                       k_max=2, alpha=alpha)
