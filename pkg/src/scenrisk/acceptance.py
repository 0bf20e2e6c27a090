"""The correspondence between acceptance sets and risk measures.

An acceptance set is represented intensionally by a membership
predicate.  A risk measure induces the set of positions it deems
acceptable at zero extra capital; conversely, the minimal cash that
makes a position acceptable reconstructs the measure.  Both directions
are executable here, together with randomized spot checks of the
structural properties an acceptance set should satisfy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .construct import RiskMeasureSpec, evaluate
from .errors import UnboundedError
from .solve import BRACKET_CAP, smallest_true
from .space import FiniteProbSpace, Position, PositionLike, as_outcomes

#: slack added to "risk <= 0" membership so boundary positions are kept
MEMBERSHIP_TOL = 1e-12


@dataclass(frozen=True)
class AcceptanceSet:
    """A set of acceptable positions, queried through ``contains``."""

    contains: Callable[[np.ndarray], bool]
    provenance: Optional[RiskMeasureSpec] = None


def _vector(position: PositionLike) -> np.ndarray:
    if isinstance(position, Position):
        return position.outcomes
    return np.asarray(position, dtype=float)


def acceptance_of(
    space: FiniteProbSpace,
    spec: RiskMeasureSpec,
    *,
    membership_tol: float = MEMBERSHIP_TOL,
) -> AcceptanceSet:
    """Acceptance set induced by a risk measure: positions with risk <= 0.

    A small tolerance keeps positions on the boundary inside the set so
    the cash reconstruction is numerically stable.
    """

    def contains(position: PositionLike) -> bool:
        return evaluate(space, position, spec) <= membership_tol

    return AcceptanceSet(contains, provenance=spec)


def capital_requirement(
    acc: AcceptanceSet,
    position: PositionLike,
    *,
    tol: float = 1e-10,
    bracket_cap: float = BRACKET_CAP,
) -> float:
    """Minimal cash deposit that makes ``position`` acceptable.

    Membership along the cash line is monotone for a monotone set, so
    the threshold is found by bracket expansion plus bisection; the
    returned shift itself lands inside the set (the infimum is attained).
    Exceeding the bracket cap in either direction means the set does not
    induce a finite measure on this cash line.
    """
    x = _vector(position)

    def feasible(shift: float) -> bool:
        return bool(acc.contains(x + shift))

    return smallest_true(
        feasible,
        tol=tol,
        cap=bracket_cap,
        no_true_msg="no cash deposit within the bracket cap makes the position acceptable",
        all_true_msg="the position stays acceptable under arbitrarily large cash withdrawals",
    )


def cash_only_risk(position: PositionLike) -> float:
    """Risk of a pure cash position; non-constant payoffs are intolerable.

    Returns ``-r`` when the payoff equals ``r`` on every atom, and
    ``+inf`` otherwise.  Together with set-membership indicators this is
    the building block from which every cash-additive measure can be
    reassembled.
    """
    x = _vector(position)
    if x.size and np.all(x == x[0]):
        return -float(x[0])
    return math.inf


@dataclass(frozen=True)
class PropertyFinding:
    """Outcome of the randomized spot check for one structural property."""

    trials: int
    counterexample: Optional[dict]

    @property
    def violated(self) -> bool:
        return self.counterexample is not None


@dataclass(frozen=True)
class AcceptanceCheckReport:
    """Findings of the randomized acceptance-set checks.

    A ``None`` counterexample means no violation was found within the
    sampled budget, not a proof that the property holds.
    """

    seed: int
    monotonicity: PropertyFinding
    convexity: PropertyFinding
    positive_scaling: PropertyFinding
    cash_closedness: PropertyFinding

    @property
    def clean(self) -> bool:
        return not any(
            f.violated
            for f in (
                self.monotonicity,
                self.convexity,
                self.positive_scaling,
                self.cash_closedness,
            )
        )

    def findings(self) -> dict:
        return {
            "monotonicity": self.monotonicity,
            "convexity": self.convexity,
            "positive_scaling": self.positive_scaling,
            "cash_closedness": self.cash_closedness,
        }


_INSIDE_MARGIN = 1e-5
_PROJECTION_TOL = 1e-6


def _boundary_member(acc, rng, n_atoms, scale):
    """Random position shifted near the acceptance boundary, nudged inside.

    The projection is intentionally coarse; the margin dominates its
    slack, so the returned position is a genuine member.
    """
    x = rng.normal(0.0, scale, n_atoms)
    shift = capital_requirement(acc, x, tol=_PROJECTION_TOL)
    return x + shift + _INSIDE_MARGIN


def check_acceptance_axioms(
    acc: AcceptanceSet,
    space: FiniteProbSpace,
    sample_budget: int,
    *,
    seed: int = 0,
    scale: float = 2.0,
) -> AcceptanceCheckReport:
    """Randomized spot checks of the acceptance-set properties.

    The budget is split evenly over four checks: adding a nonnegative
    payoff keeps membership (monotonicity), midpoints of members stay in
    (convexity), positive scalings of members stay in (cone property),
    and membership survives cash shifts shrinking to zero (directional
    closedness along the cash line, tested at tolerance).
    """
    rng = np.random.default_rng(seed)
    n = space.n_atoms
    per_check = max(sample_budget // 4, 0)
    findings = {}

    ce = None
    for _ in range(per_check):
        try:
            member = _boundary_member(acc, rng, n, scale)
        except UnboundedError:
            continue
        bump = np.abs(rng.normal(0.0, scale, n))
        if not acc.contains(member + bump):
            ce = {"member": member.tolist(), "bump": bump.tolist()}
            break
    findings["monotonicity"] = PropertyFinding(per_check, ce)

    ce = None
    for _ in range(per_check):
        try:
            a = _boundary_member(acc, rng, n, scale)
            b = _boundary_member(acc, rng, n, scale)
        except UnboundedError:
            continue
        mid = 0.5 * (a + b)
        if not acc.contains(mid):
            ce = {"first": a.tolist(), "second": b.tolist()}
            break
    findings["convexity"] = PropertyFinding(per_check, ce)

    ce = None
    for _ in range(per_check):
        try:
            member = _boundary_member(acc, rng, n, scale)
        except UnboundedError:
            continue
        lam = float(rng.uniform(0.1, 3.0))
        if not acc.contains(lam * member):
            ce = {"member": member.tolist(), "scale": lam}
            break
    findings["positive_scaling"] = PropertyFinding(per_check, ce)

    ce = None
    ladder = [1e-3 * 4.0 ** (-k) for k in range(9)]
    for _ in range(per_check):
        x = rng.normal(0.0, scale, n)
        try:
            shift = capital_requirement(acc, x)
        except UnboundedError:
            continue
        limit_point = x + shift
        if all(acc.contains(limit_point + r) for r in ladder) and not acc.contains(
            limit_point + MEMBERSHIP_TOL
        ):
            ce = {"position": x.tolist(), "shift": shift}
            break
    findings["cash_closedness"] = PropertyFinding(per_check, ce)

    return AcceptanceCheckReport(seed=seed, **findings)
