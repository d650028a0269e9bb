"""Vector pre-orders, discrete stochastic order, and Schur-condition probes.

All order checks work on sorted copies, report the worst slack across the
defining partial-sum inequalities, and treat anything within 1e-12 of zero
as satisfied (inputs here are order-one model parameters).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "OrderVerdict",
    "majorize_check",
    "weak_supermajorize_check",
    "weak_submajorize_check",
    "cone_membership",
    "st_order_discrete",
    "generate_majorized_pair",
    "SchurReport",
    "schur_condition_check",
    "lemma_T_monotone",
]

TOL = 1e-12


@dataclass(frozen=True)
class OrderVerdict:
    holds: bool
    first_violated_index: int | None
    margin: float


def _verdict(margins: np.ndarray) -> OrderVerdict:
    worst = float(np.min(margins))
    if worst >= -TOL:
        return OrderVerdict(True, None, worst)
    first = int(np.argmax(margins < -TOL)) + 1
    return OrderVerdict(False, first, worst)


def _pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size == 0:
        raise ValueError("vectors must be non-empty and of equal length")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("vectors must be finite")
    return x, y


def majorize_check(x, y) -> OrderVerdict:
    """x majorizes y: ascending prefix sums of x below y's, totals equal."""
    x, y = _pair(x, y)
    cx = np.cumsum(np.sort(x))
    cy = np.cumsum(np.sort(y))
    margins = cy - cx
    margins[-1] = -abs(cx[-1] - cy[-1])
    return _verdict(margins)


def weak_supermajorize_check(x, y) -> OrderVerdict:
    """x weakly supermajorizes y: every ascending prefix sum of x below y's."""
    x, y = _pair(x, y)
    return _verdict(np.cumsum(np.sort(y)) - np.cumsum(np.sort(x)))


def weak_submajorize_check(x, y) -> OrderVerdict:
    """x weakly submajorizes y: every descending prefix sum of x above y's."""
    x, y = _pair(x, y)
    cx = np.cumsum(np.sort(x)[::-1])
    cy = np.cumsum(np.sort(y)[::-1])
    return _verdict(cx - cy)


def cone_membership(x) -> str:
    """Classify a vector against the nonnegative monotone cones.

    "D+" decreasing, "I+" increasing, "both" for constants, else "neither".
    """
    x = np.asarray(x, dtype=float)
    nonneg = bool(np.all(x >= -TOL))
    dec = nonneg and bool(np.all(np.diff(x) <= TOL))
    inc = nonneg and bool(np.all(np.diff(x) >= -TOL))
    if dec and inc:
        return "both"
    if dec:
        return "D+"
    if inc:
        return "I+"
    return "neither"


def st_order_discrete(law1, law2) -> OrderVerdict:
    """N1 stochastically above N2: P(N1 > m) >= P(N2 > m) for every m."""
    top = max(law1.max_support, law2.max_support)
    margins = np.array([law1.survival(m) - law2.survival(m) for m in range(top + 1)])
    worst = float(np.min(margins))
    if worst >= -TOL:
        return OrderVerdict(True, None, worst)
    return OrderVerdict(False, int(np.argmax(margins < -TOL)), worst)


def generate_majorized_pair(kind: str, dimension: int, rng: np.random.Generator,
                            low: float = 0.1, high: float = 3.0):
    """Random (x, y) with x above y in the requested order, by construction.

    Robin-Hood transfers (move mass from a larger to a smaller component)
    preserve the sum and only shrink the spread, so the original vector
    majorizes the transferred one.  The weak variants then subtract
    nonnegative noise from whichever side keeps the checker satisfied:
    the left side for weak supermajorization, the right for weak
    submajorization.  Components stay in [low, high].
    """
    if dimension < 2:
        raise ValueError("dimension must be at least 2")
    if kind not in ("majorize", "weak_super", "weak_sub"):
        raise ValueError(f"unknown kind {kind!r}")
    x = rng.uniform(low, high, dimension)
    y = x.copy()
    for _ in range(int(rng.integers(0, 2 * dimension + 1))):
        i, j = rng.choice(dimension, size=2, replace=False)
        if y[i] < y[j]:
            i, j = j, i
        delta = rng.uniform(0.0, 0.5) * (y[i] - y[j])
        y[i] -= delta
        y[j] += delta
    if kind == "weak_super":
        x = x - rng.uniform(0.0, 0.5, dimension) * (x - low)
    elif kind == "weak_sub":
        y = y - rng.uniform(0.0, 0.5, dimension) * (y - low)
    return x, y


@dataclass(frozen=True)
class SchurReport:
    """Worst margins of the sign/ordering patterns of estimated partials.

    weak_super_margin   0 >= f_(1) >= ... >= f_(n)
    weak_sub_margin     f_(1) >= ... >= f_(n) >= 0
    increasing_margin   f_(k) increasing in k
    decreasing_margin   f_(k) decreasing in k
    A pattern holds at tolerance tol when its margin >= -tol.
    """

    weak_super_margin: float
    weak_sub_margin: float
    increasing_margin: float
    decreasing_margin: float
    points_used: int

    def holds(self, pattern: str, tol: float = 1e-8) -> bool:
        return getattr(self, f"{pattern}_margin") >= -tol


def schur_condition_check(f: Callable[[np.ndarray], float], cone: str,
                          points: Sequence[np.ndarray],
                          step: float | None = None) -> SchurReport:
    """Estimate partial derivatives of f at cone points and grade patterns.

    Points outside the requested cone are skipped.  Partials use central
    differences with per-coordinate step 1e-5 * max(1, |z_k|) unless an
    explicit step is given.
    """
    if cone not in ("D+", "I+"):
        raise ValueError("cone must be 'D+' or 'I+'")
    sup, sub, inc, dec = [], [], [], []
    used = 0
    for z in points:
        z = np.asarray(z, dtype=float)
        if cone_membership(z) not in (cone, "both"):
            continue
        used += 1
        grads = np.empty(z.size)
        for k in range(z.size):
            h = step if step is not None else 1e-5 * max(1.0, abs(z[k]))
            zp, zm = z.copy(), z.copy()
            zp[k] += h
            zm[k] -= h
            grads[k] = (f(zp) - f(zm)) / (2.0 * h)
        steps = -np.diff(grads)            # f_(k) - f_(k+1)
        sup.append(min(float(np.min(steps)) if steps.size else np.inf, float(-grads[0])))
        sub.append(min(float(np.min(steps)) if steps.size else np.inf, float(grads[-1])))
        if steps.size:
            inc.append(float(np.min(-steps)))
            dec.append(float(np.min(steps)))
    if used == 0:
        raise ValueError(f"no sample points inside cone {cone}")
    inf = float("inf")
    return SchurReport(
        weak_super_margin=float(min(sup)),
        weak_sub_margin=float(min(sub)),
        increasing_margin=float(min(inc)) if inc else inf,
        decreasing_margin=float(min(dec)) if dec else inf,
        points_used=used,
    )


def lemma_T_monotone(p: float, grid) -> bool:
    """x^2 / (1 - p + p x)^2 is non-decreasing on [0, 1] for p in (0, 1].

    At p = 1 the ratio is constant 1 on (0, 1]; its 0/0 corner at x = 0 is
    filled with that limit.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    xs = np.asarray(grid, dtype=float)
    if np.any(xs < 0.0) or np.any(xs > 1.0):
        raise ValueError("grid must lie in [0, 1]")
    denom = (1.0 - p + p * xs) ** 2
    with np.errstate(invalid="ignore"):
        T = np.where(denom > 0.0, xs**2 / np.where(denom > 0.0, denom, 1.0), 1.0)
    return bool(np.all(np.diff(T) >= -TOL))
