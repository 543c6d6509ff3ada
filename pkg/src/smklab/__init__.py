"""Numerical lab for base-a Szasz-Mirakjan-Kantorovich summation-integral operators."""

from .errors import (
    DegenerateGrid,
    LipschitzHintViolated,
    NonFiniteFunction,
    SmkError,
    TruncationFailure,
)
from .kernels import BACKEND, available_backends, use_backend
from .operators import (
    BivariateFunction,
    BivariateParams,
    OperatorParams,
    QuadratureRule,
    ScalarFunction,
    TruncationPolicy,
    apply,
    apply_bivariate,
    apply_kantorovich,
    mean_parameter,
    weight,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "available_backends", "use_backend",
    "BivariateFunction", "BivariateParams", "OperatorParams", "QuadratureRule",
    "ScalarFunction", "TruncationPolicy",
    "apply", "apply_bivariate", "apply_kantorovich", "mean_parameter", "weight",
    "DegenerateGrid", "LipschitzHintViolated", "NonFiniteFunction", "SmkError", "TruncationFailure",
]
