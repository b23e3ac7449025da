"""Extreme multivariate expectile estimation under functional covariates.

Thin wrapper around the compiled extension; see the C++ headers for the
full API surface.
"""

try:
    from ._mee import (
        EstimationError,
        direct_expectile,
        estimate,
        lambda_oracle,
        rate_plan,
        simulate,
        theta_star,
    )
except ImportError:  # build-tree layout: extension sits on PYTHONPATH
    from _mee import (
        EstimationError,
        direct_expectile,
        estimate,
        lambda_oracle,
        rate_plan,
        simulate,
        theta_star,
    )

__all__ = [
    "EstimationError",
    "direct_expectile",
    "estimate",
    "lambda_oracle",
    "rate_plan",
    "simulate",
    "theta_star",
]
