"""Monte Carlo sampler of the null distribution.

Under the null the transformed values are iid uniform(0, 1), so the
statistic is simulated directly as A = -(a/n) sum ln(1 - U_i^a). Draws are
produced in fixed-size chunks, each from its own counter-derived Philox
stream, so results are bit-identical for a given (seed, chunk_size,
replicates) no matter how many workers generate them.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import backend
from .kernels import mc_transform
from .null_dist import Method, NullSpec, PValueReport


@dataclass(frozen=True)
class McSettings:
    replicates: int
    seed: int
    chunk_size: int = 65536

    def __post_init__(self):
        if self.replicates < 100:
            raise ValueError("need at least 100 replicates")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def _chunk_samples(spec: NullSpec, settings: McSettings, index: int, count: int):
    rng = np.random.Generator(np.random.Philox(
        np.random.SeedSequence(settings.seed, spawn_key=(index,))))
    # random() draws from [0, 1), so ln(1 - U^a) never hits ln(0)
    u = rng.random((count, spec.n))
    return mc_transform(u, spec.a, spec.n)


def sample_null(spec: NullSpec, settings: McSettings) -> np.ndarray:
    """Replicated draws of the null statistic, in deterministic chunk order."""
    sizes = []
    remaining = settings.replicates
    while remaining > 0:
        take = min(settings.chunk_size, remaining)
        sizes.append(take)
        remaining -= take
    workers = backend.max_threads()
    if workers <= 1 or len(sizes) == 1:
        parts = [_chunk_samples(spec, settings, i, c) for i, c in enumerate(sizes)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda ic: _chunk_samples(spec, settings, *ic),
                                  enumerate(sizes)))
    return np.concatenate(parts)


def mc_p_value(value: float, spec: NullSpec, settings: McSettings) -> PValueReport:
    """Add-one estimator p = (1 + #{A_i >= value}) / (replicates + 1).

    Never exactly 0; error_estimate is the binomial standard error.
    """
    if not value >= 0.0:
        raise ValueError(f"statistic value must be nonnegative, got {value}")
    draws = sample_null(spec, settings)
    exceed = int(np.sum(draws >= value))
    p = (1.0 + exceed) / (settings.replicates + 1.0)
    se = math.sqrt(p * (1.0 - p) / settings.replicates)
    return PValueReport(p=p, method=Method.MONTE_CARLO, error_estimate=se)
