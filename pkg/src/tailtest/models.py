"""Theoretical CDF models and the distribution-spec mini-language.

A model is anything with ``evaluate(x) -> F`` (vectorized, monotone, into
[0, 1]); the built-ins also support ``sample(rng, size)`` so the power
study can draw from them. Specs accepted by :func:`parse_distribution`:

    uniform(lo,hi)   normal(mu,sigma)   exponential(rate)
    table:<csv path>           piecewise-linear CDF through (x, F) knots
    ecdf:<path>[,<path>...]    averaged empirical CDF of one or more samples
"""

import math
import re
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .errors import InputError

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class UniformCdf:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)
                and self.lo < self.hi):
            raise InputError(f"uniform needs lo < hi, got ({self.lo}, {self.hi})")

    @property
    def label(self) -> str:
        return f"uniform({self.lo:g},{self.hi:g})"

    def evaluate(self, x):
        return np.clip((np.asarray(x, dtype=float) - self.lo)
                       / (self.hi - self.lo), 0.0, 1.0)

    def sample(self, rng, size):
        return rng.uniform(self.lo, self.hi, size)


@dataclass(frozen=True)
class NormalCdf:
    mu: float
    sigma: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and self.sigma > 0.0
                and math.isfinite(self.sigma)):
            raise InputError(f"normal needs sigma > 0, got ({self.mu}, {self.sigma})")

    @property
    def label(self) -> str:
        return f"normal({self.mu:g},{self.sigma:g})"

    def evaluate(self, x):
        z = (np.asarray(x, dtype=float) - self.mu) / (self.sigma * _SQRT2)
        return 0.5 * (1.0 + erf(z))

    def sample(self, rng, size):
        return rng.normal(self.mu, self.sigma, size)


@dataclass(frozen=True)
class ExponentialCdf:
    rate: float

    def __post_init__(self):
        if not (self.rate > 0.0 and math.isfinite(self.rate)):
            raise InputError(f"exponential needs rate > 0, got {self.rate}")

    @property
    def label(self) -> str:
        return f"exponential({self.rate:g})"

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x <= 0.0, 0.0, -np.expm1(-self.rate * x))

    def sample(self, rng, size):
        return rng.exponential(1.0 / self.rate, size)


class TableCdf:
    """Piecewise-linear CDF through supplied (x, F) knots.

    Constant outside the knot range: 0 below, 1 above. Inputs must have
    strictly increasing x and nondecreasing F within [0, 1].
    """

    def __init__(self, x, f):
        x = np.asarray(x, dtype=float).ravel()
        f = np.asarray(f, dtype=float).ravel()
        if x.size != f.size or x.size < 2:
            raise InputError("table CDF needs >= 2 (x, F) rows of equal length")
        if np.any(np.diff(x) <= 0.0):
            raise InputError("table CDF x column must be strictly increasing")
        if np.any(np.diff(f) < 0.0) or f[0] < -1e-12 or f[-1] > 1.0 + 1e-12:
            raise InputError("table CDF F column must be nondecreasing in [0, 1]")
        self.x = x
        self.f = np.clip(f, 0.0, 1.0)

    @property
    def label(self) -> str:
        return f"table[{self.x.size} knots]"

    def evaluate(self, x):
        return np.interp(np.asarray(x, dtype=float), self.x, self.f,
                         left=0.0, right=1.0)

    def sample(self, rng, size):
        # inverse transform through the linear interpolant; knots with zero
        # F-increment contribute no mass, matching evaluate()
        u = rng.uniform(0.0, 1.0, size)
        lo, hi = self.f[0], self.f[-1]
        u = lo + u * (hi - lo) if (lo > 0.0 or hi < 1.0) else u
        return np.interp(u, self.f, self.x)


_DIST_RE = re.compile(r"^(uniform|normal|exponential)\(([^,()]+)(?:,([^,()]+))?\)$")


def parse_distribution(spec: str):
    """Parse a distribution spec string into a CDF model."""
    spec = spec.strip()
    if spec.startswith("table:"):
        from .cli import load_table_cdf

        return load_table_cdf(spec[len("table:"):])
    if spec.startswith("ecdf:"):
        from .cli import load_averaged_ecdf

        return load_averaged_ecdf(spec[len("ecdf:"):].split(","))
    m = _DIST_RE.match(spec)
    if not m:
        raise InputError(
            f"cannot parse distribution spec {spec!r}; expected uniform(lo,hi), "
            "normal(mu,sigma), exponential(rate), table:<path>, or ecdf:<paths>")
    name, p1, p2 = m.group(1), m.group(2), m.group(3)
    try:
        v1 = float(p1)
        v2 = float(p2) if p2 is not None else None
    except ValueError as exc:
        raise InputError(f"bad numeric parameter in {spec!r}") from exc
    if name == "uniform":
        if v2 is None:
            raise InputError("uniform(lo,hi) needs two parameters")
        return UniformCdf(v1, v2)
    if name == "normal":
        if v2 is None:
            raise InputError("normal(mu,sigma) needs two parameters")
        return NormalCdf(v1, v2)
    if v2 is not None:
        raise InputError("exponential(rate) takes one parameter")
    return ExponentialCdf(v1)
