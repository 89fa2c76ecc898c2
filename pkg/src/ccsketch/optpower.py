"""Asymptotic variance coefficient g(lam; alpha) and its minimizer.

Estimating the scale F of S(alpha, 1, F) from k samples through the power
statistic (sum |x_j|^(lam alpha))^(1/lam) has leading-order variance
F^2 g(lam; alpha) / k with

    g(lam; alpha) = (1/lam^2) [G(2 alpha lam) / G^2(alpha lam) - 1].

g is convex in lam for alpha < 1 and its minimizer lam*(alpha) is negative
there; lam* -> -1 as alpha -> 0 and lam*(0.5) = -2 exactly.  As alpha
rises toward 1 the minimizer runs off to -infinity roughly like
-1.15/(1 - alpha), so the search brackets exponentially before a
golden-section refinement.  For alpha > 1 bounded variance confines lam to
(-1/(2 alpha), 1/2) and the search runs over that interval directly.

The lam -> 0 limit of g is the geometric-mean estimator's variance
coefficient, (pi^2/6)(1 - alpha^2) for alpha < 1 and
(pi^2/6)(alpha - 1)(5 - alpha) for alpha > 1; the harmonic-mean estimator
is the lam = -1 member of the family, g(-1; alpha) =
2 Gamma^2(1+alpha)/Gamma(1+2 alpha) - 1.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

from scipy.special import gammaln

from .errors import DomainError, SolverError
from .stable import _check_alpha, _log_g_trig

__all__ = [
    "VarianceCoeffQuery",
    "OptimalLambda",
    "variance_coeff",
    "optimal_lambda",
    "predicted_variance",
    "admissible_lambda_range",
    "gm_variance_coeff",
    "hm_variance_coeff",
    "ESTIMATOR_KINDS",
]

ESTIMATOR_KINDS = ("gm", "hm", "op", "mle")

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_DEFAULT_TOL = 1e-9
_BRACKET_LIMIT = 64


def admissible_lambda_range(alpha: float) -> tuple[float, float]:
    """Open interval of lam values with finite estimator variance."""
    alpha = _check_alpha(alpha)
    if alpha < 1.0:
        return (-math.inf, 0.5)
    return (-1.0 / (2.0 * alpha), 0.5)


def _check_lambda(lam: float, alpha: float) -> float:
    lam = float(lam)
    if lam == 0.0:
        raise DomainError("lam == 0 is excluded (geometric-mean limit)")
    lo, hi = admissible_lambda_range(alpha)
    if not (lo < lam < hi):
        raise DomainError(
            f"lam={lam} outside the admissible open interval ({lo}, {hi}) for alpha={alpha}"
        )
    return lam


@dataclass(frozen=True)
class VarianceCoeffQuery:
    """A validated (alpha, lam) pair for :func:`variance_coeff`."""

    alpha: float
    lam: float

    def __post_init__(self) -> None:
        _check_lambda(self.lam, _check_alpha(self.alpha))


@dataclass(frozen=True)
class OptimalLambda:
    """Minimizer of g(.; alpha) with the minimized coefficient."""

    alpha: float
    lambda_star: float
    g_at_star: float
    at_boundary: bool = False


def _g_raw(lam: float, alpha: float) -> float:
    # No validation; callers guarantee lam is admissible and nonzero.
    if alpha < 1.0:
        # Gamma-ratio simplification; all four arguments are positive here.
        s = (
            gammaln(1.0 - 2.0 * lam)
            + 2.0 * gammaln(1.0 - lam * alpha)
            - gammaln(1.0 - 2.0 * lam * alpha)
            - 2.0 * gammaln(1.0 - lam)
        )
    else:
        s = _log_g_trig(2.0 * alpha * lam, alpha) - 2.0 * _log_g_trig(alpha * lam, alpha)
    return math.expm1(s) / (lam * lam)


def variance_coeff(query: VarianceCoeffQuery) -> float:
    """Evaluate g(lam; alpha) for an admissible query."""
    return _g_raw(query.lam, query.alpha)


def _golden_section(f, lo: float, hi: float, tol: float) -> float:
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    while (hi - lo) > tol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = f(d)
    return 0.5 * (lo + hi)


def _bracket_below_one(f, start: float = -0.5) -> tuple[float, float]:
    """Bracket the minimum of a convex f on (-inf, 0) around `start`.

    Walks a geometric ladder start * 2^j (downward) or start / 2^j (toward
    zero) until f turns back up; convexity then pins the minimum inside the
    last three ladder points.
    """
    f0 = f(start)
    if f(2.0 * start) < f0:
        prev_x, prev_f = 2.0 * start, f(2.0 * start)
        for j in range(2, _BRACKET_LIMIT + 1):
            x = start * 2.0**j
            fx = f(x)
            if fx > prev_f:
                return (x, prev_x / 2.0)
            prev_x, prev_f = x, fx
        raise SolverError(
            f"no interior minimum found while expanding down to lam={start * 2.0**_BRACKET_LIMIT}"
        )
    if f(start / 2.0) < f0:
        prev_x, prev_f = start / 2.0, f(start / 2.0)
        for j in range(2, _BRACKET_LIMIT + 1):
            x = start / 2.0**j
            fx = f(x)
            if fx > prev_f:
                return (prev_x * 2.0, x)
            prev_x, prev_f = x, fx
        raise SolverError(
            f"no interior minimum found while shrinking up to lam={start / 2.0**_BRACKET_LIMIT}"
        )
    return (2.0 * start, start / 2.0)


_lambda_cache: dict[tuple[float, float], OptimalLambda] = {}
_lambda_cache_lock = threading.Lock()


def _solve_lambda_star(alpha: float, tolerance: float) -> OptimalLambda:
    def f(lam: float) -> float:
        return _g_raw(lam, alpha)

    if alpha < 1.0:
        lo, hi = _bracket_below_one(f)
        star = _golden_section(f, lo, hi, tolerance)
        return OptimalLambda(alpha, star, f(star))
    lo, hi = admissible_lambda_range(alpha)
    margin = 1e-9
    lo_m = lo * (1.0 - margin)
    hi_m = hi * (1.0 - margin)
    star = _golden_section(f, lo_m, hi_m, tolerance)
    boundary = (star - lo_m) < 10.0 * tolerance or (hi_m - star) < 10.0 * tolerance
    return OptimalLambda(alpha, star, f(star), at_boundary=boundary)


def optimal_lambda(alpha: float, tolerance: float = _DEFAULT_TOL) -> OptimalLambda:
    """Locate lam*(alpha) = argmin g(lam; alpha) to the given interval width.

    Deterministic for fixed inputs; results are memoized per process.  At
    alpha = 0.5 the closed-form anchor lam* = -2 is returned exactly (it is
    the one alpha with a known closed form, where the estimator coincides
    with the Levy maximum-likelihood estimator).
    """
    alpha = _check_alpha(alpha, allow_two=False)
    if not (tolerance > 0.0):
        raise DomainError(f"tolerance must be positive, got {tolerance}")
    key = (alpha, tolerance)
    with _lambda_cache_lock:
        hit = _lambda_cache.get(key)
    if hit is not None:
        return hit
    if alpha == 0.5:
        result = OptimalLambda(0.5, -2.0, _g_raw(-2.0, 0.5))
    else:
        result = _solve_lambda_star(alpha, tolerance)
    with _lambda_cache_lock:
        _lambda_cache[key] = result
    return result


def gm_variance_coeff(alpha: float) -> float:
    """Leading variance coefficient of the geometric-mean estimator."""
    alpha = _check_alpha(alpha)
    if alpha < 1.0:
        return math.pi**2 / 6.0 * (1.0 - alpha * alpha)
    return math.pi**2 / 6.0 * (alpha - 1.0) * (5.0 - alpha)


def hm_variance_coeff(alpha: float) -> float:
    """Leading variance coefficient of the harmonic-mean estimator (alpha < 1)."""
    alpha = _check_alpha(alpha)
    if alpha >= 1.0:
        raise DomainError("the harmonic-mean estimator requires alpha < 1")
    return 2.0 * math.exp(2.0 * gammaln(1.0 + alpha) - gammaln(1.0 + 2.0 * alpha)) - 1.0


def predicted_variance(kind: str, alpha: float, scale: float, k: int) -> float:
    """Leading-order asymptotic variance of the chosen estimator of F.

    gm:  F^2 (pi^2/6)(1 - alpha^2)/k        (alpha < 1)
         F^2 (pi^2/6)(alpha-1)(5-alpha)/k   (alpha > 1)
    hm:  F^2 (2 Gamma^2(1+alpha)/Gamma(1+2 alpha) - 1)/k
    op:  F^2 g(lam*; alpha)/k
    mle: F^2/(2k) + (9/8) F^2/k^2           (alpha = 0.5 only)
    """
    if kind not in ESTIMATOR_KINDS:
        raise DomainError(f"unknown estimator kind {kind!r}; expected one of {ESTIMATOR_KINDS}")
    if not (isinstance(k, int) and k >= 2):
        raise DomainError(f"k must be an integer >= 2, got {k!r}")
    if not (math.isfinite(scale) and scale > 0.0):
        raise DomainError(f"scale must be positive, got {scale}")
    f2 = scale * scale
    if kind == "gm":
        return f2 * gm_variance_coeff(alpha) / k
    if kind == "hm":
        return f2 * hm_variance_coeff(alpha) / k
    if kind == "op":
        return f2 * optimal_lambda(alpha).g_at_star / k
    if float(alpha) != 0.5:
        raise DomainError("the closed-form MLE exists only at alpha = 0.5")
    return f2 / (2.0 * k) + 1.125 * f2 / (k * k)
