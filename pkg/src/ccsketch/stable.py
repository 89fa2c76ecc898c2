"""Numerics for maximally-skewed stable distributions S(alpha, beta=1, F).

The distribution is parameterized by its characteristic function

    E exp(i Z t) = exp(-F |t|^alpha (1 - i sign(t) tan(pi alpha / 2))),

with 0 < alpha <= 2 and scale F > 0.  For alpha < 1 the support is the
positive half-line; at alpha = 0.5 the law is the Levy distribution with
the closed form Z = F^2 / N^2, N standard normal.

The moment constant G carries all the special-function work:

    G(lam) = (2/pi) cos((kappa(alpha)/alpha) lam pi/2) sin(pi lam/2)
             Gamma(1 - lam/alpha) Gamma(lam),

which for alpha < 1 collapses, via Euler's reflection formula, to

    G(lam) = Gamma(1 - lam/alpha) / Gamma(1 - lam).

Absolute moments follow as

    E|Z|^lam = F^(lam/alpha) G(lam) / cos^(lam/alpha)(kappa(alpha) pi/2),

finite for lam < alpha (alpha < 1) and -1 < lam < alpha (alpha > 1).

All Gamma factors are evaluated through log-Gamma; G values overflow a
float for large |lam| at small alpha, so callers that need extreme powers
use :func:`log_g_moment_factor` directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc, gammaln, gammasgn

from .errors import DivergentMomentError, DomainError

__all__ = [
    "StableParams",
    "kappa",
    "g_moment_factor",
    "log_g_moment_factor",
    "absolute_moment",
    "sample_skewed_stable",
    "levy_pdf",
    "levy_cdf",
]

_TWO_OVER_PI = 2.0 / math.pi
_U53 = 2.0**-53


def _check_alpha(alpha: float, *, allow_two: bool = True) -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise DomainError(f"alpha must be finite, got {alpha!r}")
    hi_ok = alpha <= 2.0 if allow_two else alpha < 2.0
    if not (0.0 < alpha and hi_ok):
        raise DomainError(f"alpha must lie in (0, 2{']' if allow_two else ')'}, got {alpha}")
    if alpha == 1.0:
        raise DomainError("alpha == 1 is not supported; the first moment is an exact counter")
    return alpha


def kappa(alpha: float) -> float:
    """Return kappa(alpha): alpha for alpha < 1, and 2 - alpha for alpha > 1."""
    alpha = _check_alpha(alpha)
    return alpha if alpha < 1.0 else 2.0 - alpha


def _cos_kappa_half_pi(alpha: float) -> float:
    # cos(kappa(alpha) pi/2) == sin(pi |1 - alpha| / 2), which keeps full
    # precision as alpha -> 1 where the cosine itself vanishes.
    return math.sin(math.pi * abs(1.0 - alpha) / 2.0)


def _log_g_gamma_ratio(lam: float, alpha: float) -> float:
    # alpha < 1 closed form: log Gamma(1 - lam/alpha) - log Gamma(1 - lam)
    return float(gammaln(1.0 - lam / alpha) - gammaln(1.0 - lam))


def _log_g_trig(lam: float, alpha: float) -> float:
    # Direct four-factor product in log-absolute form.  On the domain where
    # the moment exists the product is positive; the sign bookkeeping below
    # asserts that rather than assuming it.
    kap = alpha if alpha < 1.0 else 2.0 - alpha
    c = math.cos((kap / alpha) * lam * math.pi / 2.0)
    s = math.sin(math.pi * lam / 2.0)
    if c == 0.0 or s == 0.0:
        raise DomainError(
            f"trigonometric factor vanishes at lam={lam}; the product form is "
            "indeterminate there (its limit is finite, use the Gamma-ratio form)"
        )
    sign = math.copysign(1.0, c) * math.copysign(1.0, s)
    sign *= float(gammasgn(lam)) * float(gammasgn(1.0 - lam / alpha))
    if sign <= 0.0:
        raise DomainError(f"G({lam}) is not positive at alpha={alpha}; moment undefined")
    return float(
        math.log(_TWO_OVER_PI)
        + math.log(abs(c))
        + math.log(abs(s))
        + gammaln(1.0 - lam / alpha)
        + gammaln(lam)
    )


def log_g_moment_factor(lam: float, alpha: float) -> float:
    """log G(lam) for S(alpha, 1, F); see the module docstring for G.

    Valid for lam < alpha when alpha < 1 and -1 < lam < alpha when
    alpha > 1; lam = 0 is rejected (the limit there is G = 1).
    """
    alpha = _check_alpha(alpha)
    lam = float(lam)
    if lam == 0.0:
        raise DomainError("lam == 0 is a removable singularity with limit G = 1; "
                          "callers needing that value should use 1 directly")
    if lam >= alpha:
        raise DivergentMomentError(f"G({lam}) diverges for lam >= alpha (alpha={alpha})")
    if alpha < 1.0:
        return _log_g_gamma_ratio(lam, alpha)
    if lam <= -1.0:
        raise DivergentMomentError(f"G({lam}) diverges for lam <= -1 when alpha > 1")
    return _log_g_trig(lam, alpha)


def g_moment_factor(lam: float, alpha: float) -> float:
    """G(lam) itself; overflows for very large |lam| at small alpha."""
    return math.exp(log_g_moment_factor(lam, alpha))


@dataclass(frozen=True)
class StableParams:
    """Parameters (alpha, beta=1, scale) of a maximally-skewed stable law."""

    alpha: float
    scale: float = 1.0
    beta: int = 1

    def __post_init__(self) -> None:
        if self.beta != 1:
            raise DomainError("only the maximally-skewed case beta == 1 is supported")
        alpha = float(self.alpha)
        if not (math.isfinite(alpha) and 0.0 < alpha <= 2.0):
            raise DomainError(f"alpha must lie in (0, 2], got {self.alpha}")
        if not (math.isfinite(self.scale) and self.scale > 0.0):
            raise DomainError(f"scale must be positive, got {self.scale}")


def absolute_moment(lam: float, params: StableParams) -> float:
    """E|Z|^lam for Z ~ S(alpha, 1, F).

    Computed as exp((lam/alpha)(log F - log cos(kappa pi/2)) + log G(lam)).
    Raises :class:`DivergentMomentError` when the moment is infinite
    (lam >= alpha, or lam <= -1 with alpha > 1).
    """
    alpha = _check_alpha(params.alpha)
    log_g = log_g_moment_factor(lam, alpha)
    log_ck = math.log(_cos_kappa_half_pi(alpha))
    return math.exp((lam / alpha) * (math.log(params.scale) - log_ck) + log_g)


def _bits_to_open_uniform(bits: np.ndarray) -> np.ndarray:
    # 53-bit words -> uniforms on the open interval (0, 1); the half-unit
    # offset keeps both endpoints strictly excluded.
    return (bits.astype(np.float64) + 0.5) * _U53


def _stable_from_uniforms(alpha: float, u1: np.ndarray, u2: np.ndarray,
                          beta: int = 1) -> np.ndarray:
    """Chambers-Mallows-Stuck transform of uniform pairs to S(alpha, beta, 1).

    u1, u2 must lie strictly inside (0, 1).  beta is 1 (maximally skewed)
    or 0 (symmetric, used only as a benchmark baseline).
    """
    v = math.pi * (u1 - 0.5)
    w = -np.log(u2)
    if beta == 0:
        b = 0.0
        scale = 1.0
    else:
        # arctan(tan(pi alpha/2))/alpha on the principal branch
        b = math.pi / 2.0 if alpha < 1.0 else math.pi / 2.0 - math.pi / alpha
        # (1 + tan^2(pi alpha/2))^(1/(2 alpha)) = cos(kappa pi/2)^(-1/alpha)
        scale = _cos_kappa_half_pi(alpha) ** (-1.0 / alpha)
    avb = alpha * (v + b)
    out = np.sin(avb) / np.cos(v) ** (1.0 / alpha)
    out *= (np.cos(v - avb) / w) ** ((1.0 - alpha) / alpha)
    return scale * out


def sample_skewed_stable(alpha: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n independent samples from S(alpha, beta=1, F=1).

    Scaling to general F is the caller's responsibility (multiply by
    F^(1/alpha)).  For alpha < 1 every sample is strictly positive.
    """
    alpha = _check_alpha(alpha, allow_two=False)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    u1 = _bits_to_open_uniform(rng.integers(0, 1 << 53, size=n, dtype=np.int64))
    u2 = _bits_to_open_uniform(rng.integers(0, 1 << 53, size=n, dtype=np.int64))
    return _stable_from_uniforms(alpha, u1, u2)


def _check_levy_args(z, scale: float):
    z = np.asarray(z, dtype=np.float64)
    if not (math.isfinite(scale) and scale > 0.0):
        raise DomainError(f"scale must be positive, got {scale}")
    if np.any(z <= 0.0):
        raise DomainError("z must be positive (the support is (0, inf))")
    return z


def levy_pdf(z, scale: float):
    """Density of the Levy law: (F/sqrt(2 pi)) exp(-F^2/(2z)) z^(-3/2)."""
    z = _check_levy_args(z, scale)
    out = scale / math.sqrt(2.0 * math.pi) * np.exp(-scale * scale / (2.0 * z)) * z**-1.5
    return float(out) if out.ndim == 0 else out


def levy_cdf(z, scale: float):
    """CDF of the Levy law: erfc(F / sqrt(2 z)) = 2 (1 - Phi(F/sqrt(z)))."""
    z = _check_levy_args(z, scale)
    out = erfc(scale / np.sqrt(2.0 * z))
    return float(out) if np.ndim(out) == 0 else out
