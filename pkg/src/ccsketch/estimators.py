"""Scale estimators: recover F from the k sketch coordinates.

Four estimators, all scale-equivariant (estimate(c x) = c^alpha
estimate(x)) and all computed in the log domain so that neither the
product |x_1 ... x_k|^(alpha/k) nor power sums with exponents like
lam alpha ~ -10^4 (which arise as alpha -> 1) can overflow or underflow:

* geometric mean, unbiased:
      prod |x_j|^(alpha/k) / D,   D = G^k(alpha/k) / cos(kappa pi/2)
* harmonic mean (alpha < 1), asymptotically unbiased:
      k cos(alpha pi/2) / Gamma(1+alpha) / sum |x_j|^-alpha
      times the O(1/k) correction 1 - (2 Gamma^2(1+alpha)/Gamma(1+2alpha) - 1)/k
* optimal power: the lam-power-sum family member at lam = lam*(alpha),
  with its O(1/k) multiplicative bias correction
* the exact maximum-likelihood estimator at alpha = 0.5:
      (1 - 3/(4k)) sqrt(k / sum 1/x_j)

The harmonic-mean estimator is exactly the lam = -1 member of the power
family, and at alpha = 0.5 the optimal power lam* = -2 reproduces the MLE.

A coordinate that is exactly zero has probability zero under the model,
so it raises DegenerateSketchError instead of being skipped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import DegenerateSketchError, DomainError
from .optpower import _check_lambda, _g_raw, optimal_lambda, predicted_variance
from .sketch import Sketch
from .stable import _cos_kappa_half_pi, log_g_moment_factor

__all__ = [
    "Estimate",
    "estimate_gm",
    "estimate_hm",
    "estimate_op",
    "estimate_mle_half",
    "ESTIMATORS",
]


@dataclass(frozen=True)
class Estimate:
    """Point estimate of F with its predicted asymptotic standard error."""

    value: float
    kind: str
    predicted_se: float
    lambda_used: float | None = None


def _coords(sketch: Sketch, require_positive: bool = False) -> np.ndarray:
    x = sketch.x
    if np.any(x == 0.0):
        raise DegenerateSketchError(
            "a sketch coordinate is exactly zero; the sketch is unused or corrupt"
        )
    if require_positive and np.any(x < 0.0):
        raise DegenerateSketchError(
            "negative coordinate where the support is the positive half-line"
        )
    return x


def estimate_gm(sketch: Sketch) -> Estimate:
    """Unbiased geometric-mean estimate of F."""
    alpha, k = sketch.config.alpha, sketch.config.k
    x = _coords(sketch)
    log_d = k * log_g_moment_factor(alpha / k, alpha) - math.log(_cos_kappa_half_pi(alpha))
    value = math.exp((alpha / k) * float(np.sum(np.log(np.abs(x)))) - log_d)
    se = math.sqrt(predicted_variance("gm", alpha, value, k))
    return Estimate(value=value, kind="gm", predicted_se=se)


def estimate_hm(sketch: Sketch) -> Estimate:
    """Asymptotically unbiased harmonic-mean estimate of F (alpha < 1)."""
    alpha, k = sketch.config.alpha, sketch.config.k
    if alpha >= 1.0:
        raise DomainError("the harmonic-mean estimator requires alpha < 1")
    x = _coords(sketch)
    log_base = (
        math.log(k)
        + math.log(_cos_kappa_half_pi(alpha))
        - gammaln(1.0 + alpha)
        - logsumexp(-alpha * np.log(np.abs(x)))
    )
    correction = 1.0 - (
        2.0 * math.exp(2.0 * gammaln(1.0 + alpha) - gammaln(1.0 + 2.0 * alpha)) - 1.0
    ) / k
    value = math.exp(log_base) * correction
    se = math.sqrt(predicted_variance("hm", alpha, value, k))
    return Estimate(value=value, kind="hm", predicted_se=se)


def estimate_op(sketch: Sketch, lambda_override: float | None = None) -> Estimate:
    """Bias-corrected optimal-power estimate of F.

    `lambda_override` evaluates an arbitrary admissible member of the
    power family (useful for studying the family itself); production use
    leaves it unset so lam = lam*(alpha).
    """
    alpha, k = sketch.config.alpha, sketch.config.k
    if lambda_override is None:
        lam = optimal_lambda(alpha).lambda_star
    else:
        lam = _check_lambda(lambda_override, alpha)
    x = _coords(sketch)
    log_ck = math.log(_cos_kappa_half_pi(alpha))
    log_r = (
        lam * log_ck
        + logsumexp(lam * alpha * np.log(np.abs(x)))
        - math.log(k)
        - log_g_moment_factor(alpha * lam, alpha)
    )
    # G(2 alpha lam)/G^2(alpha lam) - 1 == lam^2 g(lam; alpha)
    spread = lam * lam * _g_raw(lam, alpha)
    correction = 1.0 - spread * (1.0 / (2.0 * lam)) * (1.0 / lam - 1.0) / k
    value = math.exp(log_r / lam) * correction
    if value <= 0.0:
        raise DomainError(
            f"bias correction produced a non-positive estimate (lam={lam}, k={k}); "
            "the requested power is too extreme for this sample size"
        )
    se = value * math.sqrt(_g_raw(lam, alpha) / k)
    return Estimate(value=value, kind="op", predicted_se=se, lambda_used=lam)


def estimate_mle_half(sketch: Sketch) -> Estimate:
    """Bias-corrected maximum-likelihood estimate of F at alpha = 0.5."""
    alpha, k = sketch.config.alpha, sketch.config.k
    if alpha != 0.5:
        raise DomainError(f"the closed-form MLE exists only at alpha = 0.5, got {alpha}")
    x = _coords(sketch, require_positive=True)
    value = (1.0 - 3.0 / (4.0 * k)) * math.sqrt(k / float(np.sum(1.0 / x)))
    se = math.sqrt(predicted_variance("mle", alpha, value, k))
    return Estimate(value=value, kind="mle", predicted_se=se)


ESTIMATORS = {
    "gm": estimate_gm,
    "hm": estimate_hm,
    "op": estimate_op,
    "mle": estimate_mle_half,
}
