"""Grid-based stochastic-order verdicts and theorem-hypothesis validation.

A comparison is certified on a finite evaluation grid only; every report
carries the worst margin and where it occurred.  The hazard-rate verdict
runs two independent routes (pointwise hazards, survival-ratio
monotonicity) and flags disagreement as numerical instability.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .copula import check_log_concavity
from .majorization import (
    cone_membership,
    majorize_check,
    st_order_discrete,
    weak_submajorize_check,
    weak_supermajorize_check,
)
from .orderstats import (
    DependentSampleSpec,
    MultipleOutlierSpec,
    SampleSizeLaw,
    multiple_outlier_hazard_in_x,
    multiple_outlier_sf_in_x,
    second_order_hazard_dependent,
    second_order_hazard_independent,
    second_order_sf_dependent,
    second_order_sf_random_n,
)

__all__ = [
    "Grid",
    "DominanceReport",
    "Scenario",
    "THEOREM_TAGS",
    "PRIMARY_CHECK",
    "check_st",
    "check_hr",
    "check_rh",
    "ConditionCheck",
    "HypothesisReport",
    "validate_theorem",
    "scenario_survival_functions",
    "scenario_hazard_functions",
]

THEOREM_TAGS = ("thm1", "thm2", "thm3", "thm4", "thm5", "none")

# the order each theorem's conclusion is stated in
PRIMARY_CHECK = {"thm1": "st", "thm2": "st", "thm3": "hr", "thm4": "hr",
                 "thm5": "hr", "none": "st"}


@dataclass(frozen=True)
class Grid:
    """Evaluation grid: u ascending in (0, 1], x = -log(u)."""

    u: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        if u.ndim != 1 or u.size < 50:
            raise ValueError("grid needs at least 50 one-dimensional points")
        if np.any(u <= 0.0) or np.any(u > 1.0):
            raise ValueError("grid values must lie in (0, 1]")
        if np.any(np.diff(u) <= 0.0):
            raise ValueError("grid values must be strictly increasing")
        object.__setattr__(self, "u", u)

    @classmethod
    def default(cls, points: int = 1000, u_min: float = 1e-3,
                u_max: float = 1.0) -> "Grid":
        return cls(np.linspace(u_min, u_max, points))

    @property
    def x(self) -> np.ndarray:
        return -np.log(self.u)

    @property
    def positive_x(self) -> np.ndarray:
        """x values with the x = 0 point removed (hazards live here)."""
        return -np.log(self.u[self.u < 1.0])


@dataclass
class DominanceReport:
    order: str
    holds: bool
    min_margin: float
    witness_x: float
    curves: dict = field(default_factory=dict)
    ratio_margin: float | None = None
    ratio_holds: bool | None = None
    routes_agree: bool | None = None


def check_st(sf_x: Callable, sf_y: Callable, grid: Grid,
             tol: float = 1e-12) -> DominanceReport:
    """X above Y in the usual stochastic order: sf_X >= sf_Y on the grid."""
    xs = grid.x
    fx = np.asarray(sf_x(xs), dtype=float)
    fy = np.asarray(sf_y(xs), dtype=float)
    margins = fx - fy
    i = int(np.argmin(margins))
    return DominanceReport(
        order="st",
        holds=bool(margins[i] >= -tol),
        min_margin=float(margins[i]),
        witness_x=float(xs[i]),
        curves={"x": xs, "X": fx, "Y": fy},
    )


def check_hr(hr_x: Callable, hr_y: Callable, sf_x: Callable, sf_y: Callable,
             grid: Grid, tol: float = 1e-10,
             ratio_tol: float = 1e-9) -> DominanceReport:
    """X above Y in the hazard-rate order.

    Route one: hr_X <= hr_Y pointwise (x = 0 excluded).  Route two:
    sf_X / sf_Y non-decreasing in x.  The verdict requires both; a split
    decision clears routes_agree so callers can flag instability.
    """
    xs = grid.positive_x
    hx = np.asarray(hr_x(xs), dtype=float)
    hy = np.asarray(hr_y(xs), dtype=float)
    margins = hy - hx
    i = int(np.argmin(margins))
    hazard_ok = bool(margins[i] >= -tol)

    order = np.argsort(xs)
    fx = np.asarray(sf_x(xs[order]), dtype=float)
    fy = np.asarray(sf_y(xs[order]), dtype=float)
    # the ratio says nothing once a survival leaves normal double range
    # (subnormals quantize the quotient); those points are still covered by
    # the pointwise hazard route
    keep = (fx > 1e-300) & (fy > 1e-300)
    ratio = fx[keep] / fy[keep]
    steps = np.diff(ratio)
    # slack is per step, relative to the local ratio size (floored at 1 so
    # order-one ratios see the plain absolute tolerance)
    scale = np.maximum(1.0, np.maximum(np.abs(ratio[:-1]), np.abs(ratio[1:]))) \
        if steps.size else np.ones(0)
    ratio_margin = float(np.min(steps / scale)) if steps.size else 0.0
    ratio_ok = ratio_margin >= -ratio_tol

    return DominanceReport(
        order="hr",
        holds=hazard_ok and ratio_ok,
        min_margin=float(margins[i]),
        witness_x=float(xs[i]),
        curves={"x": xs, "X": hx, "Y": hy},
        ratio_margin=ratio_margin,
        ratio_holds=ratio_ok,
        routes_agree=hazard_ok == ratio_ok,
    )


def check_rh(cdf_x: Callable, cdf_y: Callable, grid: Grid,
             tol: float = 1e-9) -> DominanceReport:
    """X below Y in the reversed-hazard order: cdf_Y / cdf_X non-decreasing.

    Grid points where either cdf is below 1e-12 are dropped before the
    ratio is formed.
    """
    xs = np.sort(grid.x)
    fx = np.asarray(cdf_x(xs), dtype=float)
    fy = np.asarray(cdf_y(xs), dtype=float)
    keep = (fx >= 1e-12) & (fy >= 1e-12)
    xs, fx, fy = xs[keep], fx[keep], fy[keep]
    if xs.size < 2:
        raise ValueError("fewer than two usable grid points for the rh ratio")
    steps = np.diff(fy / fx)
    i = int(np.argmin(steps))
    return DominanceReport(
        order="rh",
        holds=bool(steps[i] >= -tol),
        min_margin=float(steps[i]),
        witness_x=float(xs[i + 1]),
        curves={"x": xs, "X": fx, "Y": fy},
    )


Side = Union[DependentSampleSpec, MultipleOutlierSpec]


@dataclass(frozen=True)
class Scenario:
    """One comparison: an X side, a Y side, optional sample-size laws."""

    side_x: Side
    side_y: Side
    grid: Grid
    law_x: SampleSizeLaw | None = None
    law_y: SampleSizeLaw | None = None
    theorem: str = "none"
    name: str = ""

    def __post_init__(self):
        if self.theorem not in THEOREM_TAGS:
            raise ValueError(f"theorem tag must be one of {THEOREM_TAGS}")
        for law, side in ((self.law_x, self.side_x), (self.law_y, self.side_y)):
            if law is not None:
                if not isinstance(side, DependentSampleSpec):
                    raise ValueError("sample-size laws need marginal-list sides")
                if law.max_support > side.n:
                    raise ValueError("sample-size law exceeds the side's size")


def _side_sf(side: Side, law: SampleSizeLaw | None) -> Callable:
    if isinstance(side, MultipleOutlierSpec):
        return lambda xs: multiple_outlier_sf_in_x(side, xs)
    if law is not None:
        return lambda xs: second_order_sf_random_n(side, law, xs)
    return lambda xs: second_order_sf_dependent(side, xs)


def scenario_survival_functions(sc: Scenario) -> tuple[Callable, Callable]:
    return _side_sf(sc.side_x, sc.law_x), _side_sf(sc.side_y, sc.law_y)


def _side_hazard(side: Side, law: SampleSizeLaw | None) -> Callable | None:
    if isinstance(side, MultipleOutlierSpec):
        return lambda xs: multiple_outlier_hazard_in_x(side, xs)
    if law is not None:
        return None  # mixture hazards are not emitted
    lams = {m.lam for m in side.marginals}
    bases = {m.baseline for m in side.marginals}
    if side.generator.name == "independence" and len(lams) == 1 and len(bases) == 1:
        return lambda xs: second_order_hazard_independent(side.marginals, xs)
    return lambda xs: second_order_hazard_dependent(side, xs)


def scenario_hazard_functions(sc: Scenario) -> tuple[Callable, Callable] | None:
    hx = _side_hazard(sc.side_x, sc.law_x)
    hy = _side_hazard(sc.side_y, sc.law_y)
    if hx is None or hy is None:
        return None
    return hx, hy


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class HypothesisReport:
    theorem: str
    conditions: tuple[ConditionCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.conditions)

    def failed(self) -> list[str]:
        return [c.name for c in self.conditions if not c.passed]


def _common_cone(u, v) -> tuple[bool, str]:
    cu, cv = cone_membership(u), cone_membership(v)
    for cone in ("D+", "I+"):
        if cu in (cone, "both") and cv in (cone, "both"):
            return True, cone
    return False, f"{cu} vs {cv}"


def _law_order_condition(sc: Scenario) -> ConditionCheck:
    if sc.law_x is None and sc.law_y is None:
        return ConditionCheck("sample_size_st_order", True, "fixed sample sizes")
    n = sc.side_x.n if isinstance(sc.side_x, DependentSampleSpec) else 0
    lx = sc.law_x or SampleSizeLaw({n: 1.0})
    ly = sc.law_y or SampleSizeLaw({n: 1.0})
    v = st_order_discrete(lx, ly)
    return ConditionCheck("sample_size_st_order", v.holds, f"worst margin {v.margin:.3e}")


def _structural_dependent(sc: Scenario, conds: list[ConditionCheck]) -> bool:
    ok = isinstance(sc.side_x, DependentSampleSpec) and isinstance(sc.side_y, DependentSampleSpec)
    conds.append(ConditionCheck("sides_are_marginal_lists", ok))
    if not ok:
        return False
    sx, sy = sc.side_x, sc.side_y
    conds.append(ConditionCheck("equal_sample_sizes", sx.n == sy.n))
    bases = {m.baseline for m in sx.marginals} | {m.baseline for m in sy.marginals}
    conds.append(ConditionCheck("shared_baseline", len(bases) == 1))
    conds.append(ConditionCheck("shared_generator", sx.generator.key() == sy.generator.key()))
    return sx.n == sy.n


def _log_concavity_condition(sc: Scenario) -> ConditionCheck:
    ok, margin = check_log_concavity(sc.side_x.generator)
    return ConditionCheck("generator_log_concave", ok, f"worst margin {margin:.3e}")


def validate_theorem(sc: Scenario) -> HypothesisReport:
    """Check exactly the stated hypotheses of the tagged comparison theorem.

    Failures do not stop the report; every condition is graded.  A common
    cone is required for the two parameter vectors (the membership detail
    records which one was used).
    """
    conds: list[ConditionCheck] = []
    tag = sc.theorem

    if tag == "none":
        return HypothesisReport("none", ())

    if tag in ("thm1", "thm2", "thm3"):
        if not _structural_dependent(sc, conds):
            return HypothesisReport(tag, tuple(conds))
        sx, sy = sc.side_x, sc.side_y
        alphas_x = np.array([m.alpha for m in sx.marginals])
        alphas_y = np.array([m.alpha for m in sy.marginals])
        lams_x = np.array([m.lam for m in sx.marginals])
        lams_y = np.array([m.lam for m in sy.marginals])

        if tag == "thm1":
            same_alpha = len(set(alphas_x) | set(alphas_y)) == 1
            a = float(alphas_x[0])
            conds.append(ConditionCheck("common_tilt_scalar", same_alpha))
            conds.append(ConditionCheck("tilt_in_unit_interval", same_alpha and 0.0 < a <= 1.0,
                                        f"alpha={a:g}"))
            ok, which = _common_cone(lams_x, lams_y)
            conds.append(ConditionCheck("hazard_vectors_in_common_cone", ok, which))
            v = weak_supermajorize_check(lams_x, lams_y)
            conds.append(ConditionCheck("weak_supermajorization", v.holds,
                                        f"worst margin {v.margin:.3e}"))
            conds.append(_law_order_condition(sc))
            conds.append(_log_concavity_condition(sc))

        elif tag == "thm2":
            same_lam = len(set(lams_x) | set(lams_y)) == 1
            conds.append(ConditionCheck("common_hazard_scalar", same_lam))
            in_range = bool(np.all((alphas_x > 0) & (alphas_x <= 1.0)
                                   & (alphas_y > 0) & (alphas_y <= 1.0)))
            conds.append(ConditionCheck("tilts_in_unit_interval", in_range))
            ok, which = _common_cone(alphas_x, alphas_y)
            conds.append(ConditionCheck("tilt_vectors_in_common_cone", ok, which))
            v = weak_supermajorize_check(1.0 / alphas_x, 1.0 / alphas_y)
            conds.append(ConditionCheck("reciprocal_weak_supermajorization", v.holds,
                                        f"worst margin {v.margin:.3e}"))
            conds.append(_law_order_condition(sc))
            conds.append(_log_concavity_condition(sc))

        else:  # thm3
            conds.append(ConditionCheck("independent_sample",
                                        sc.side_x.generator.name == "independence"))
            same_lam = len(set(lams_x) | set(lams_y)) == 1
            conds.append(ConditionCheck("common_hazard_scalar", same_lam))
            in_range = bool(np.all((alphas_x > 0) & (alphas_x <= 1.0)
                                   & (alphas_y > 0) & (alphas_y <= 1.0)))
            conds.append(ConditionCheck("tilts_in_unit_interval", in_range))
            ok, which = _common_cone(alphas_x, alphas_y)
            conds.append(ConditionCheck("tilt_vectors_in_common_cone", ok, which))
            v = majorize_check(1.0 / alphas_x, 1.0 / alphas_y)
            conds.append(ConditionCheck("reciprocal_majorization", v.holds,
                                        f"worst margin {v.margin:.3e}"))

        return HypothesisReport(tag, tuple(conds))

    # two-block theorems
    ok = isinstance(sc.side_x, MultipleOutlierSpec) and isinstance(sc.side_y, MultipleOutlierSpec)
    conds.append(ConditionCheck("sides_are_two_block", ok))
    if not ok:
        return HypothesisReport(tag, tuple(conds))
    sx, sy = sc.side_x, sc.side_y
    conds.append(ConditionCheck("shared_baseline", sx.baseline == sy.baseline))
    conds.append(ConditionCheck("common_tilt_scalar", sx.alpha == sy.alpha))
    conds.append(ConditionCheck("tilt_in_unit_interval", 0.0 < sx.alpha <= 1.0,
                                f"alpha={sx.alpha:g}"))

    if tag == "thm4":
        conds.append(ConditionCheck("equal_block_sizes", (sx.p, sx.q) == (sy.p, sy.q)))
        conds.append(ConditionCheck("common_main_parameter",
                                    sx.lambda_main == sy.lambda_main))
        chain = sx.lambda_main >= sy.lambda_out >= sx.lambda_out > 0.0
        conds.append(ConditionCheck(
            "parameter_chain", chain,
            f"main {sx.lambda_main:g} >= outlier_Y {sy.lambda_out:g} "
            f">= outlier_X {sx.lambda_out:g}"))
    else:  # thm5
        conds.append(ConditionCheck("common_block_parameters",
                                    sx.lambda_out == sy.lambda_out
                                    and sx.lambda_main == sy.lambda_main))
        conds.append(ConditionCheck("block_parameters_ordered",
                                    sx.lambda_out <= sx.lambda_main))
        nested = sy.p <= sx.p <= sx.q <= sy.q
        conds.append(ConditionCheck("block_sizes_nested", nested,
                                    f"{sy.p} <= {sx.p} <= {sx.q} <= {sy.q}"))
        v = weak_submajorize_check([float(sy.p), float(sy.q)], [float(sx.p), float(sx.q)])
        conds.append(ConditionCheck("size_pair_weak_submajorization", v.holds,
                                    f"worst margin {v.margin:.3e}"))
    return HypothesisReport(tag, tuple(conds))
