"""siltlab: fractional Brownian motion and self-intersection local times.

Exact-covariance fBm synthesis, pathwise estimators for the
self-intersection local time and its spatial derivative, closed-form
expectation oracles with small-offset regime constants, occupation-time
identity checks, structure-function Holder estimation, and the
arc-diagram combinatorics behind the moment bounds.
"""

__version__ = "0.1.0"

from .estimators import (
    SiltEstimate,
    alpha_eps,
    alpha_prime_eps,
    alpha_tilde_prime_eps,
    alpha_via_local_time,
    dyadic_square,
    epsilon_extrapolate,
    full_triangle,
    local_time,
    offset_triangle,
)
from .expectation import (
    asymptotic_constant,
    mean_alpha_prime,
    mean_alpha_prime_eps,
    regime_classify,
)
from .fbm import FbmPath, SynthesisError, covariance, generate_path, lnd_ratio
from .mollifier import Mollifier

__all__ = [
    "FbmPath",
    "Mollifier",
    "SiltEstimate",
    "SynthesisError",
    "alpha_eps",
    "alpha_prime_eps",
    "alpha_tilde_prime_eps",
    "alpha_via_local_time",
    "asymptotic_constant",
    "covariance",
    "dyadic_square",
    "epsilon_extrapolate",
    "full_triangle",
    "generate_path",
    "lnd_ratio",
    "local_time",
    "mean_alpha_prime",
    "mean_alpha_prime_eps",
    "offset_triangle",
    "regime_classify",
    "__version__",
]
