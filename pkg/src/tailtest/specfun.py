"""Complex-argument special functions used by the distribution machinery.

Covers exactly what the rest of the library needs: principal-branch
log-gamma and digamma on the open right half-plane, the Riemann zeta
function at integer arguments, and the exponential dilogarithm sum
``sum_l e^(-l y) / l^2``.
"""

import math

import numpy as np

from .kernels import digamma_arr, lgamma_arr

EULER_GAMMA = 0.5772156649015329

_ZETA2 = math.pi * math.pi / 6.0
_LN2 = math.log(2.0)


def _check_right_half_plane(z: complex) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("argument must have finite components")
    if z.real <= 0.0:
        raise ValueError(f"argument must satisfy Re(z) > 0, got {z}")
    return z


def ln_gamma(z: complex) -> complex:
    """Principal-branch log of the gamma function, Re(z) > 0."""
    z = _check_right_half_plane(z)
    return complex(lgamma_arr(np.array([z], dtype=np.complex128))[0])


def digamma(z: complex) -> complex:
    """Logarithmic derivative of the gamma function, Re(z) > 0."""
    z = _check_right_half_plane(z)
    return complex(digamma_arr(np.array([z], dtype=np.complex128))[0])


def ln_gamma_array(z: np.ndarray) -> np.ndarray:
    """Vectorized ln_gamma without domain checks (internal hot path)."""
    return lgamma_arr(np.ascontiguousarray(z, dtype=np.complex128))


def digamma_array(z: np.ndarray) -> np.ndarray:
    """Vectorized digamma without domain checks (internal hot path)."""
    return digamma_arr(np.ascontiguousarray(z, dtype=np.complex128))


def _zeta_em(k: int, cut: int = 24, corrections: int = 6) -> float:
    # direct sum to `cut`, then Euler-Maclaurin tail for x^(-k)
    partial = sum(l ** (-float(k)) for l in range(1, cut))
    tail = cut ** (1.0 - k) / (k - 1.0) + 0.5 * cut ** (-float(k))
    # derivative corrections: B_2j/(2j)! * f^(2j-1)(cut), f = x^-k
    fact = 1.0
    coeff = float(k)
    bern = (1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730)
    for j in range(1, corrections + 1):
        fact *= (2.0 * j) * (2.0 * j - 1.0)
        tail += bern[j - 1] / fact * coeff * cut ** (-(k + 2.0 * j - 1.0))
        coeff *= (k + 2.0 * j - 1.0) * (k + 2.0 * j)
    return partial + tail


_ZETA_TABLE = {k: _zeta_em(k) for k in range(2, 65)}


def zeta_int(k: int) -> float:
    """Riemann zeta at an integer argument k >= 2."""
    if k != int(k) or k < 2:
        raise ValueError(f"zeta_int requires an integer k >= 2, got {k}")
    k = int(k)
    if k <= 64:
        return _ZETA_TABLE[k]
    if k > 1075:  # 2^-k underflows; zeta(k) = 1 to full precision
        return 1.0
    return _zeta_em(k)


def dilog_exp(y: float) -> float:
    """sum_{l>=1} e^(-l y) / l^2  (equals Li2(e^-y)) for y >= 0."""
    if not y >= 0.0:
        raise ValueError(f"dilog_exp requires y >= 0, got {y}")
    if y == 0.0:
        return _ZETA2
    if math.isinf(y):
        return 0.0
    if y >= _LN2:
        # direct series, ratio e^-y <= 1/2
        q = math.exp(-y)
        total, p = 0.0, 1.0
        for l in range(1, 51):
            p *= q
            term = p / (l * l)
            total += term
            if term < 1e-18 * max(total, 1e-30):
                break
        return total
    # near y = 0 the series needs O(1/y) terms; use
    # Li2(z) + Li2(1-z) = zeta(2) - ln(z) ln(1-z) with z = e^-y,
    # where 1 - z = -expm1(-y) <= 1/2 keeps the series short
    one_minus_z = -math.expm1(-y)
    total, p = 0.0, 1.0
    for l in range(1, 51):
        p *= one_minus_z
        term = p / (l * l)
        total += term
        if term < 1e-18:
            break
    return _ZETA2 + y * math.log(one_minus_z) - total
