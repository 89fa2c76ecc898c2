"""Shannon entropy, exactly on explicit vectors and via moment plug-ins.

The one-parameter families

    T_alpha = (1 - F_alpha / F_1^alpha) / (alpha - 1)      (Tsallis)
    H_alpha = log(F_alpha / F_1^alpha) / (1 - alpha)       (Renyi)

both converge to the Shannon entropy H as alpha -> 1, so an estimate of
F_alpha at alpha near 1, combined with the exactly-known running sum F_1,
yields a Shannon estimate.  Natural logarithms throughout; zero entries
contribute 0 (the 0 log 0 = 0 convention).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .estimators import ESTIMATORS
from .sketch import Sketch

__all__ = [
    "EntropyEstimate",
    "shannon_exact",
    "tsallis_from_moments",
    "renyi_from_moments",
    "estimate_shannon",
    "ENTROPY_ROUTES",
]

ENTROPY_ROUTES = ("tsallis", "renyi")


@dataclass(frozen=True)
class EntropyEstimate:
    """Shannon-entropy estimate with the plug-in ingredients that made it."""

    shannon_estimate: float
    alpha_used: float
    route: str
    moment_estimate: float
    f1: float


def shannon_exact(a) -> float:
    """Shannon entropy of the distribution proportional to vector a."""
    a = np.asarray(a, dtype=np.float64)
    if np.any(a < 0.0):
        raise DomainError("entropy requires entrywise non-negative input")
    total = float(np.sum(a))
    if not (total > 0.0):
        raise DomainError("entropy of an all-zero vector is undefined")
    p = a[a > 0.0] / total
    return float(-np.sum(p * np.log(p)))


def _check_moments(f_alpha: float, f1: float, alpha: float) -> None:
    if not (f_alpha > 0.0 and math.isfinite(f_alpha)):
        raise DomainError(f"F_alpha must be positive, got {f_alpha}")
    if not (f1 > 0.0 and math.isfinite(f1)):
        raise DomainError(f"F_1 must be positive, got {f1}")
    if float(alpha) == 1.0:
        raise DomainError("alpha == 1 is the Shannon limit itself; use shannon_exact")


def tsallis_from_moments(f_alpha: float, f1: float, alpha: float) -> float:
    """T_alpha from the frequency moments."""
    _check_moments(f_alpha, f1, alpha)
    return (1.0 - f_alpha / f1**alpha) / (alpha - 1.0)


def renyi_from_moments(f_alpha: float, f1: float, alpha: float) -> float:
    """H_alpha from the frequency moments."""
    _check_moments(f_alpha, f1, alpha)
    return math.log(f_alpha / f1**alpha) / (1.0 - alpha)


def estimate_shannon(sketch: Sketch, estimator_kind: str, route: str = "tsallis") -> EntropyEstimate:
    """Shannon estimate: F_alpha from the chosen estimator, F_1 from the
    exact counter, combined through the chosen plug-in route."""
    if route not in ENTROPY_ROUTES:
        raise DomainError(f"unknown route {route!r}; expected one of {ENTROPY_ROUTES}")
    if estimator_kind not in ESTIMATORS:
        raise DomainError(
            f"unknown estimator {estimator_kind!r}; expected one of {tuple(ESTIMATORS)}"
        )
    f1 = sketch.f1
    if f1 <= 0.0:
        raise DomainError(f"estimation requires F_1 > 0, got {f1}")
    alpha = sketch.config.alpha
    moment = ESTIMATORS[estimator_kind](sketch).value
    plug_in = tsallis_from_moments if route == "tsallis" else renyi_from_moments
    return EntropyEstimate(
        shannon_estimate=plug_in(moment, f1, alpha),
        alpha_used=alpha,
        route=route,
        moment_estimate=moment,
        f1=f1,
    )
