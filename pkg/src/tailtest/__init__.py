"""Tail-sensitive goodness-of-fit testing.

A goodness-of-fit statistic that weights the tails of the hypothesized
distribution (right or left, tunable via an exponent a), with exact,
asymptotic, and Monte Carlo evaluation of its null law, plus a
Kolmogorov/Smirnov baseline.
"""

__version__ = "0.1.0"

from .asymptotic import G_inf, G_inf_series, LimitSpec, SeriesTerms, f2, g_inf
from .baseline_ks import KsResult, kolmogorov_statistic, ks_p, smirnov_statistic
from .ecdf import (AveragedEcdf, average_ecdfs, dispersion,
                   gaussian_point_probability, point_probability)
from .errors import (ConvergenceError, InputError, InvalidModelError,
                     TailTestError)
from .inversion import InversionSettings
from .mc_oracle import McSettings, mc_p_value, sample_null
from .models import (ExponentialCdf, NormalCdf, TableCdf, UniformCdf,
                     parse_distribution)
from .null_dist import (Method, NullSpec, PValuePolicy, PValueReport, char_fn,
                        cumulant, gamma_closed_form_cdf, gamma_closed_form_pdf,
                        null_cdf, null_pdf, p_value)
from .specfun import EULER_GAMMA, digamma, dilog_exp, ln_gamma, zeta_int
from .statistic import (BinnedSample, Sample, StatisticResult, TailSide,
                        a_statistic, a_statistic_binned, probability_transform)

__all__ = [
    "__version__",
    "AveragedEcdf", "BinnedSample", "ConvergenceError", "EULER_GAMMA",
    "ExponentialCdf", "G_inf", "G_inf_series", "InputError",
    "InvalidModelError", "InversionSettings", "KsResult", "LimitSpec",
    "McSettings", "Method", "NormalCdf", "NullSpec", "PValuePolicy",
    "PValueReport", "Sample", "SeriesTerms", "StatisticResult", "TableCdf",
    "TailTestError", "TailSide", "UniformCdf", "a_statistic",
    "a_statistic_binned", "average_ecdfs", "char_fn", "cumulant", "digamma",
    "dilog_exp", "dispersion", "f2", "g_inf", "gamma_closed_form_cdf",
    "gamma_closed_form_pdf", "gaussian_point_probability",
    "kolmogorov_statistic", "ks_p", "ln_gamma", "mc_p_value", "null_cdf",
    "null_pdf", "p_value", "parse_distribution", "point_probability",
    "probability_transform", "sample_null", "smirnov_statistic", "zeta_int",
]
