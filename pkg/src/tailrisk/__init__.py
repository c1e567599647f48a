"""Tail-risk measurement toolkit.

Distortion (Choquet) risk measures, scoring functions and elicitability
checks, VaR/score backtests, scenario aggregation with Basel-style
charges, and IGARCH tail-risk forecasting.
"""
from .dist import (
    DiscreteDistribution,
    EmpiricalDistribution,
    Exponential,
    Mixture,
    Normal,
    StudentT,
    TailDistribution,
    TranslatedExpMixture,
    Uniform,
    Weibull,
    cdf,
    mixture,
    parse_distribution,
    point_mass,
    quantile_left,
    quantile_right,
    sample,
    tail_distribution,
)
from .errors import (
    BracketError,
    ConfigError,
    FitError,
    InfiniteQuantileError,
    NonIntegrableError,
    TailRiskError,
)
from .measures import (
    DistortionFunction,
    RiskMeasureSpec,
    choquet,
    endpoint_mix,
    es,
    gen_spectral,
    mean,
    ms,
    parse_measure,
    quantile_mix,
    var,
)

__version__ = "0.1.0"
