"""Tilted proportional-hazards lifetime family and its baselines.

A marginal is a triple (alpha, lam, baseline): the baseline survival is
raised to the power ``lam`` and then passed through the Marshall-Olkin
tilt with parameter ``alpha``.  All evaluations go through the baseline's
log-survival so that extreme times degrade to exact 0/1 limits instead of
NaN.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar, Union

import numpy as np

__all__ = [
    "Weibull",
    "Exponential",
    "Baseline",
    "MphrMarginal",
    "mphr_cdf",
    "mphr_sf",
    "mphr_hazard",
    "mphr_quantile",
    "distortion_h",
    "tilt_cdf",
    "dual_tilt_cdf",
]


def _as_time(x):
    """Validate nonnegative time input; scalars stay scalar."""
    x = np.asarray(x, dtype=float)
    if np.any(np.isnan(x)) or np.any(x < 0.0):
        raise ValueError("time values must be nonnegative and finite")
    return x[()] if x.ndim == 0 else x


def _as_prob(u, *, upper_open: bool = False, name: str = "probability"):
    u = np.asarray(u, dtype=float)
    hi_bad = (u >= 1.0) if upper_open else (u > 1.0)
    if np.any(np.isnan(u)) or np.any(u < 0.0) or np.any(hi_bad):
        hi = "1)" if upper_open else "1]"
        raise ValueError(f"{name} must lie in [0, {hi}")
    return u[()] if u.ndim == 0 else u


@dataclass(frozen=True)
class Weibull:
    """Baseline with survival exp(-(a*x)**b); ``a`` is an inverse scale."""

    a: float
    b: float

    family: ClassVar[str] = "weibull"

    def __post_init__(self):
        if not (self.a > 0.0 and self.b > 0.0):
            raise ValueError(f"Weibull needs a > 0 and b > 0, got a={self.a}, b={self.b}")

    def log_sf(self, x):
        return -np.power(self.a * _as_time(x), self.b)

    def sf(self, x):
        return np.exp(self.log_sf(x))

    def hazard(self, x):
        # diverges at x=0 for b < 1; the inf sentinel is intentional
        with np.errstate(divide="ignore"):
            return self.a * self.b * np.power(self.a * _as_time(x), self.b - 1.0)

    def quantile(self, v):
        """Inverse of the survival function on (0, 1]."""
        v = np.asarray(v, dtype=float)
        if np.any(v <= 0.0) or np.any(v > 1.0):
            raise ValueError("survival level must lie in (0, 1]")
        out = np.power(-np.log(v), 1.0 / self.b) / self.a
        return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class Exponential:
    """Constant-hazard baseline, the b=1 Weibull."""

    rate: float

    family: ClassVar[str] = "exponential"

    def __post_init__(self):
        if not self.rate > 0.0:
            raise ValueError(f"Exponential needs rate > 0, got {self.rate}")

    def log_sf(self, x):
        return -self.rate * _as_time(x)

    def sf(self, x):
        return np.exp(self.log_sf(x))

    def hazard(self, x):
        return self.rate + 0.0 * _as_time(x)

    def quantile(self, v):
        v = np.asarray(v, dtype=float)
        if np.any(v <= 0.0) or np.any(v > 1.0):
            raise ValueError("survival level must lie in (0, 1]")
        out = -np.log(v) / self.rate
        return out[()] if out.ndim == 0 else out


Baseline = Union[Weibull, Exponential]


@dataclass(frozen=True)
class MphrMarginal:
    """One observation: tilt ``alpha``, hazard multiplier ``lam``, shared baseline.

    alpha = 1 collapses the tilt (plain proportional hazards); lam = 1
    collapses the power (plain tilt family).  alpha > 1 is accepted by the
    data model; theorem validators restrict to (0, 1] where required.
    """

    alpha: float
    lam: float
    baseline: Baseline

    def __post_init__(self):
        if not self.alpha > 0.0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not self.lam > 0.0:
            raise ValueError(f"lam must be positive, got {self.lam}")


def _tilt_denominator(alpha: float, z):
    """1 - (1-alpha) exp(z) written as alpha - (1-alpha) expm1(z).

    The rewrite keeps full precision when the denominator is near alpha
    (z near 0) and makes the origin values exact.
    """
    return alpha - (1.0 - alpha) * np.expm1(z)


def mphr_cdf(m: MphrMarginal, x):
    """(1 - Fbar^lam) / (1 - (1-alpha) * Fbar^lam)."""
    z = m.lam * m.baseline.log_sf(x)
    return -np.expm1(z) / _tilt_denominator(m.alpha, z)


def mphr_sf(m: MphrMarginal, x):
    """alpha * Fbar^lam / (1 - (1-alpha) * Fbar^lam)."""
    z = m.lam * m.baseline.log_sf(x)
    return m.alpha * np.exp(z) / _tilt_denominator(m.alpha, z)


def mphr_hazard(m: MphrMarginal, x):
    """lam * r(x) / (1 - (1-alpha) * Fbar^lam), r the baseline hazard."""
    z = m.lam * m.baseline.log_sf(x)
    return m.lam * m.baseline.hazard(x) / _tilt_denominator(m.alpha, z)


def mphr_quantile(m: MphrMarginal, u):
    """Inverse of mphr_cdf on [0, 1)."""
    u = _as_prob(u, upper_open=True)
    s = (1.0 - u) / (1.0 - (1.0 - m.alpha) * u)
    # s <= 1 analytically; clip roundoff overshoot before the root
    s = np.minimum(s, 1.0)
    return m.baseline.quantile(np.power(s, 1.0 / m.lam))


def distortion_h(u, alpha: float, lam: float):
    """Distortion mapping a baseline survival value to the family's cdf.

    distortion_h(Fbar(x), alpha, lam) equals mphr_cdf at x.
    """
    if not alpha > 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if not lam > 0.0:
        raise ValueError(f"lam must be positive, got {lam}")
    u = _as_prob(u, name="survival value")
    with np.errstate(divide="ignore"):
        z = lam * np.log(u)
    return -np.expm1(z) / _tilt_denominator(alpha, z)


def tilt_cdf(x, alpha: float, baseline: Baseline):
    """Tilt family written on the survival side: F / (1 - (1-alpha) * Fbar)."""
    if not alpha > 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    ls = baseline.log_sf(x)
    return -np.expm1(ls) / _tilt_denominator(alpha, ls)


def dual_tilt_cdf(x, alpha: float, baseline: Baseline):
    """Dual tilt family written on the cdf side: alpha * F / (1 - (1-alpha) * F).

    Evaluating ``tilt_cdf`` at tilt 1/alpha gives the same distribution.
    """
    if not alpha > 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    F = -np.expm1(baseline.log_sf(x))
    return alpha * F / (1.0 - (1.0 - alpha) * F)
