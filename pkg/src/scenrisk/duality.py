"""Robust (dual) representations: penalties, exact maximizers, and a
sampling oracle for the conjugate.

Every closed convex risk measure here is a supremum of reweighted
expected losses minus a penalty.  The three canonical cases ship with
closed-form penalties and exact maximizing densities, so strong duality
can be verified to float precision.  A seeded randomized oracle bounds
the conjugate from below by sampling the acceptance boundary, which is
the route that does not trust the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Tuple

import numpy as np

from .construct import RiskMeasureSpec, evaluate
from .errors import DomainError, ValidationError
from .space import FiniteProbSpace, PositionLike, as_outcomes, check_level

#: tolerance on the unit-expectation constraint of a density
DENSITY_TOL = 1e-12
#: slack used when testing the tail-bound constraint of the avar dual set
_TAIL_BOUND_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Density:
    """Reweighting vector ``y >= 0``; a model change ``dQ/dP`` once
    ``E[y] = 1`` holds against a concrete space."""

    values: np.ndarray

    def __post_init__(self):
        y = np.asarray(self.values, dtype=float)
        if y.ndim != 1 or y.size == 0:
            raise ValidationError("a density is a one-dimensional weight vector")
        if not np.all(np.isfinite(y)) or np.any(y < 0.0):
            raise ValidationError("density entries must be finite and nonnegative")
        arr = np.array(y)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)


@dataclass(frozen=True)
class DensityCheck:
    """Result of validating a candidate density against a space."""

    ok: bool
    problems: Tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


def check_dual_conditions(space: FiniteProbSpace, values) -> DensityCheck:
    """Check nonnegativity and unit expectation of a candidate density."""
    y = np.asarray(getattr(values, "values", values), dtype=float)
    problems = []
    if y.ndim != 1 or y.size != space.n_atoms:
        problems.append(f"expected {space.n_atoms} entries, got shape {y.shape}")
        return DensityCheck(False, tuple(problems))
    if not np.all(np.isfinite(y)):
        problems.append("entries must be finite")
    elif np.any(y < 0.0):
        problems.append(f"negative entry at atom {int(np.argmin(y))}")
    if not problems:
        mean = float(space.probs @ y)
        if abs(mean - 1.0) > DENSITY_TOL:
            problems.append(f"expectation is {mean!r}, expected 1")
    return DensityCheck(not problems, tuple(problems))


def _require_density(space: FiniteProbSpace, q: Density) -> np.ndarray:
    check = check_dual_conditions(space, q)
    if not check:
        raise ValidationError("invalid density: " + "; ".join(check.problems))
    return q.values if isinstance(q, Density) else np.asarray(q, dtype=float)


def density(space: FiniteProbSpace, values) -> Density:
    """Validating constructor: a density for this specific space."""
    q = Density(np.asarray(values, dtype=float))
    _require_density(space, q)
    return q


def unit_density(space: FiniteProbSpace) -> Density:
    """The reference model itself, ``y = 1`` on every atom."""
    return Density(np.ones(space.n_atoms))


def dirac_density(space: FiniteProbSpace, atom: int) -> Density:
    """All weight on one atom: ``y = e_k / p_k``."""
    if not 0 <= atom < space.n_atoms:
        raise DomainError(f"atom index {atom} out of range")
    y = np.zeros(space.n_atoms)
    y[atom] = 1.0 / space.probs[atom]
    return Density(y)


def penalty_worst_case(space: FiniteProbSpace, q: Density) -> float:
    """Penalty of the worst-case measure: zero on every model."""
    _require_density(space, q)
    return 0.0


def penalty_avar(space: FiniteProbSpace, q: Density, level: float) -> float:
    """Penalty of Average-Value-at-Risk: zero inside the tail-bounded set,
    ``+inf`` outside.

    The dual set consists of the models whose density stays below
    ``1/level``.
    """
    level = check_level(level)
    y = _require_density(space, q)
    if float(y.max()) <= 1.0 / level + _TAIL_BOUND_TOL:
        return 0.0
    return math.inf


def penalty_entropic(space: FiniteProbSpace, q: Density, beta: float) -> float:
    """Penalty of the exponential measure: relative entropy over beta."""
    if not beta > 0.0:
        raise DomainError(f"beta must be positive, got {beta!r}")
    y = _require_density(space, q)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(y > 0.0, y * np.log(y), 0.0)
    return float(space.probs @ terms) / beta


def tail_density(space: FiniteProbSpace, position: PositionLike, level: float) -> Density:
    """Density attaining the Average-Value-at-Risk supremum.

    Greedy construction: weight ``1/level`` on the lowest outcomes until
    probability mass ``level`` is filled; the marginal atom receives the
    fractional remainder.  Ties are broken by atom index.
    """
    level = check_level(level)
    x = as_outcomes(space, position)
    order = np.argsort(x, kind="stable")
    cums = np.cumsum(space.probs[order])
    m = min(int(np.searchsorted(cums, level, side="left")), cums.size - 1)
    below = float(cums[m - 1]) if m > 0 else 0.0
    y = np.zeros(space.n_atoms)
    y[order[:m]] = 1.0 / level
    y[order[m]] = (level - below) / (level * float(space.probs[order[m]]))
    return Density(y)


def exponential_tilt_density(
    space: FiniteProbSpace, position: PositionLike, beta: float
) -> Density:
    """Density attaining the exponential-measure supremum.

    The optimal model tilts each atom by ``exp(-beta x)``; the weights
    are normalized with a max shift so large ``beta`` stays stable.
    """
    if not beta > 0.0:
        raise DomainError(f"beta must be positive, got {beta!r}")
    x = as_outcomes(space, position)
    z = -beta * x
    w = np.exp(z - z.max())
    return Density(w / float(space.probs @ w))


@dataclass(frozen=True)
class DualRepresentation:
    """A penalty on models plus, when available, the exact maximizer map."""

    penalty: Callable[[Density], float]
    maximizer: Optional[Callable[[PositionLike], Density]] = None


def worst_case_representation(space: FiniteProbSpace) -> DualRepresentation:
    return DualRepresentation(
        penalty=lambda q: penalty_worst_case(space, q),
        maximizer=lambda position: dirac_density(
            space, int(np.argmin(as_outcomes(space, position)))
        ),
    )


def avar_representation(space: FiniteProbSpace, level: float) -> DualRepresentation:
    level = check_level(level)
    return DualRepresentation(
        penalty=lambda q: penalty_avar(space, q, level),
        maximizer=lambda position: tail_density(space, position, level),
    )


def entropic_representation(space: FiniteProbSpace, beta: float) -> DualRepresentation:
    if not beta > 0.0:
        raise DomainError(f"beta must be positive, got {beta!r}")
    return DualRepresentation(
        penalty=lambda q: penalty_entropic(space, q, beta),
        maximizer=lambda position: exponential_tilt_density(space, position, beta),
    )


def dual_evaluate(
    space: FiniteProbSpace,
    position: PositionLike,
    rep: DualRepresentation,
    candidates: Iterable[Density],
) -> float:
    """Best reweighted expected loss minus penalty over candidate models.

    Always a lower bound on the primal value; equal to it whenever the
    representation's exact maximizer is available (it is always included
    in the sweep).
    """
    x = as_outcomes(space, position)
    pool = list(candidates)
    if rep.maximizer is not None:
        pool.append(rep.maximizer(position))
    best = None
    for q in pool:
        gamma = rep.penalty(q)
        if gamma == math.inf:
            continue
        value = -float((space.probs * q.values) @ x) - gamma
        if best is None or value > best:
            best = value
    if best is None:
        raise ValidationError("every candidate model is infeasible and no maximizer is known")
    return best


#: standard-deviation ladder cycled through by the conjugate sampler;
#: growing scales turn directions of unbounded support into divergence
SCALE_LADDER = tuple(4.0 ** k for k in range(10))


@dataclass(frozen=True)
class ConjugateBound:
    """Sampled lower bound on the conjugate at one density."""

    value: float
    samples_used: int
    infeasible_direction: bool


def conjugate_lower_bound(
    space: FiniteProbSpace,
    spec: RiskMeasureSpec,
    q: Density,
    sample_budget: int,
    *,
    seed: int = 0,
    divergence_threshold: float = 1e3,
) -> ConjugateBound:
    """Monte-Carlo lower bound on the conjugate (the penalty) at ``q``.

    Random positions are shifted onto the acceptance boundary of the
    measure (adding the measure's own value as cash makes the risk
    exactly zero), and the reweighted expected loss is maximized over the
    samples.  The bound is nondecreasing in the budget for a fixed seed.
    Sample scales cycle through a growing ladder, so if ``q`` lies
    outside the dual set the bound escalates past ``divergence_threshold``
    and the result is flagged as an infeasible direction.
    """
    if sample_budget < 1:
        raise DomainError("sample budget must be at least 1")
    y = _require_density(space, q)
    rng = np.random.default_rng(seed)
    w = space.probs * y
    n = space.n_atoms
    best = -math.inf
    for k in range(sample_budget):
        if k == 0:
            x = np.zeros(n)
        else:
            x = rng.standard_normal(n) * SCALE_LADDER[k % len(SCALE_LADDER)]
        boundary = x + evaluate(space, x, spec)
        value = -float(w @ boundary)
        if value > best:
            best = value
            if best > divergence_threshold:
                return ConjugateBound(best, k + 1, True)
    return ConjugateBound(best, sample_budget, False)
