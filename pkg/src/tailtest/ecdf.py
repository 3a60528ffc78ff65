"""Averaged empirical CDFs and their pointwise sampling laws.

Given k measured samples of n entries each, the averaged experimental CDF
mu(x) is the mean of the k individual ECDFs, a right-continuous step
function taking values on the lattice {0, 1/(kn), ..., 1}. At a point
where the true CDF is F, the measured lattice value follows the binomial
law P(mu) = C(kn, kn*mu) F^(kn mu) (1-F)^(kn(1-mu)), which for large kn
approaches a Gaussian with dispersion sqrt(F(1-F)/(kn)).
"""

import math
from dataclasses import dataclass

import numpy as np

from .specfun import ln_gamma
from .statistic import Sample

_MU_TOL = 1e-9


@dataclass(frozen=True)
class AveragedEcdf:
    """Mean of k ECDFs; usable directly as a CdfModel."""

    k: int
    n: int
    breakpoints: np.ndarray  # sorted unique jump locations
    mu_values: np.ndarray    # value on [breakpoints[i], breakpoints[i+1])

    @property
    def label(self) -> str:
        return f"ecdf[k={self.k},n={self.n}]"

    def evaluate(self, x):
        idx = np.searchsorted(self.breakpoints, np.asarray(x, dtype=float),
                              side="right")
        padded = np.concatenate(([0.0], self.mu_values))
        return padded[idx]

    def sample(self, rng, size):
        jumps = np.diff(np.concatenate(([0.0], self.mu_values)))
        idx = rng.choice(self.breakpoints.size, size=size, p=jumps / jumps.sum())
        return self.breakpoints[idx]


def average_ecdfs(samples: list[Sample]) -> AveragedEcdf:
    """Average the ECDFs of k samples that share a common size n.

    The average of the k step functions equals the pooled ECDF of all kn
    points, so the merged breakpoint grid represents it exactly.
    """
    if len(samples) < 1:
        raise ValueError("need at least one sample")
    n = samples[0].n
    for i, s in enumerate(samples):
        if s.n != n:
            raise ValueError(
                f"all samples must have the same size; sample 0 has {n}, "
                f"sample {i} has {s.n}")
    k = len(samples)
    pooled = np.sort(np.concatenate([s.values for s in samples]))
    breakpoints, counts = np.unique(pooled, return_counts=True)
    mu = np.cumsum(counts) / float(k * n)
    mu[-1] = 1.0
    return AveragedEcdf(k=k, n=n, breakpoints=breakpoints, mu_values=mu)


def point_probability(mu: float, f: float, k: int, n: int) -> float:
    """Probability of measuring lattice value mu when the true CDF is f.

    kn*mu must be an integer (within 1e-9). Evaluated exactly through
    integer binomials for kn <= 100, in log space via ln_gamma above that.
    """
    kn = k * n
    m_real = kn * mu
    m = round(m_real)
    if abs(m_real - m) > _MU_TOL * max(1.0, kn):
        raise ValueError(f"kn*mu = {m_real} is not an integer")
    if m < 0 or m > kn:
        raise ValueError(f"mu = {mu} outside the lattice [0, 1]")
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"F must lie in [0, 1], got {f}")
    if f == 0.0:
        return 1.0 if m == 0 else 0.0
    if f == 1.0:
        return 1.0 if m == kn else 0.0
    if kn <= 100:
        return math.comb(kn, m) * f ** m * (1.0 - f) ** (kn - m)
    log_comb = (ln_gamma(complex(kn + 1)).real - ln_gamma(complex(m + 1)).real
                - ln_gamma(complex(kn - m + 1)).real)
    return math.exp(log_comb + m * math.log(f) + (kn - m) * math.log1p(-f))


def gaussian_point_probability(mu: float, f: float, k: int, n: int) -> float:
    """Large-kn Gaussian density for the averaged-CDF value at a point."""
    if not 0.0 < f < 1.0:
        raise ValueError(f"Gaussian approximation needs F in (0, 1), got {f}")
    kn = k * n
    var = f * (1.0 - f) / kn
    return math.exp(-(mu - f) ** 2 / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)


def dispersion(f: float, k: int, n: int) -> float:
    """sqrt(F(1-F)/(kn)), the spread of mu around F."""
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"F must lie in [0, 1], got {f}")
    return math.sqrt(f * (1.0 - f) / (k * n))
