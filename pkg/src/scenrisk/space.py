"""Finite probability spaces, payoff vectors, laws, CDFs and quantiles.

Everything downstream works on a finite sample space with strictly
positive atom probabilities.  Payoffs are plain real vectors indexed by
atoms; their law is a merged, sorted list of (outcome, probability)
pairs.  Both quantile conventions are provided: the upper quantile
``inf{t : F(t) > a}`` and the lower quantile ``inf{t : F(t) >= a}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import DimensionError, DomainError, ValidationError

#: absolute tolerance for probability mass checks
PROB_TOL = 1e-12
#: default tolerance for comparisons of computed risk values
DEFAULT_TOL = 1e-9


def _frozen_array(values, dtype=float) -> np.ndarray:
    a = np.array(values, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FiniteProbSpace:
    """A finite sample space: one strictly positive probability per atom."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise ValidationError("a probability space needs at least one atom")
        if not np.all(np.isfinite(p)) or np.any(p <= 0.0):
            raise ValidationError("atom probabilities must be finite and strictly positive")
        total = float(p.sum())
        if abs(total - 1.0) > PROB_TOL:
            raise ValidationError(f"atom probabilities sum to {total!r}, expected 1")
        object.__setattr__(self, "probs", _frozen_array(p))

    @property
    def n_atoms(self) -> int:
        return self.probs.size

    @classmethod
    def uniform(cls, n_atoms: int) -> "FiniteProbSpace":
        """Space with ``n_atoms`` equally likely atoms."""
        if n_atoms < 1:
            raise ValidationError("a probability space needs at least one atom")
        return cls(np.full(n_atoms, 1.0 / n_atoms))


@dataclass(frozen=True, eq=False)
class Position:
    """A real payoff vector, one entry per atom of its space."""

    outcomes: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.outcomes, dtype=float)
        if x.ndim != 1:
            raise ValidationError("a position is a one-dimensional payoff vector")
        if not np.all(np.isfinite(x)):
            raise ValidationError("position entries must be finite")
        object.__setattr__(self, "outcomes", _frozen_array(x))

    def __len__(self) -> int:
        return self.outcomes.size


PositionLike = Union[Position, Sequence[float], np.ndarray]


def as_outcomes(space: FiniteProbSpace, position: PositionLike) -> np.ndarray:
    """Validate ``position`` against ``space`` and return its payoff vector."""
    x = position.outcomes if isinstance(position, Position) else np.asarray(position, dtype=float)
    if x.ndim != 1 or x.size != space.n_atoms:
        raise DimensionError(
            f"position has {x.size} entries for a space with {space.n_atoms} atoms"
        )
    if not np.isfinite(x).all():
        raise ValidationError("position entries must be finite")
    return x


@dataclass(frozen=True, eq=False)
class Distribution:
    """Law of a payoff: strictly increasing outcomes with positive masses."""

    outcomes: np.ndarray
    probs: np.ndarray
    cum_probs: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        o = np.asarray(self.outcomes, dtype=float)
        p = np.asarray(self.probs, dtype=float)
        if o.ndim != 1 or p.shape != o.shape or o.size == 0:
            raise ValidationError("a distribution needs matching outcome and mass vectors")
        if not np.all(np.isfinite(o)):
            raise ValidationError("outcomes must be finite")
        if np.any(np.diff(o) <= 0.0):
            raise ValidationError("outcomes must be strictly increasing")
        if np.any(p <= 0.0) or abs(float(p.sum()) - 1.0) > PROB_TOL:
            raise ValidationError("masses must be positive and sum to 1")
        object.__setattr__(self, "outcomes", _frozen_array(o))
        object.__setattr__(self, "probs", _frozen_array(p))
        object.__setattr__(self, "cum_probs", _frozen_array(np.cumsum(p)))

    @property
    def points(self) -> tuple:
        """The law as ((outcome, probability), ...) pairs."""
        return tuple(zip(self.outcomes.tolist(), self.probs.tolist()))

    @classmethod
    def point_mass(cls, outcome: float) -> "Distribution":
        return cls(np.array([outcome]), np.array([1.0]))


def _sorted_law(outcomes: np.ndarray, probs: np.ndarray) -> Distribution:
    """Unvalidated constructor for laws already sorted, merged and normalized."""
    d = object.__new__(Distribution)
    object.__setattr__(d, "outcomes", outcomes)
    object.__setattr__(d, "probs", probs)
    object.__setattr__(d, "cum_probs", np.cumsum(probs))
    return d


def distribution_of(space: FiniteProbSpace, position: PositionLike) -> Distribution:
    """Law of ``position`` under ``space``.

    Atoms with exactly equal outcomes are merged; total mass is preserved.
    """
    x = as_outcomes(space, position)
    order = np.argsort(x, kind="stable")
    xs = x[order]
    ps = space.probs[order]
    starts = np.empty(xs.size, dtype=bool)
    starts[0] = True
    starts[1:] = xs[1:] != xs[:-1]
    idx = np.flatnonzero(starts)
    return _sorted_law(xs[idx], np.add.reduceat(ps, idx))


def cdf(dist: Distribution, t: float) -> float:
    """Right-continuous distribution function value P[X <= t]."""
    k = int(np.searchsorted(dist.outcomes, t, side="right"))
    return 0.0 if k == 0 else float(dist.cum_probs[k - 1])


def check_level(level: float) -> float:
    """Validate a quantile/tail level, which must lie in (0, 1]."""
    level = float(level)
    if not 0.0 < level <= 1.0:
        raise DomainError(f"level must lie in (0, 1], got {level!r}")
    return level


def upper_quantile(dist: Distribution, level: float) -> float:
    """Smallest outcome whose cumulative mass strictly exceeds ``level``.

    For ``level == 1`` the defining set is empty on a finite support and
    the maximum outcome is returned.
    """
    level = check_level(level)
    k = int(np.searchsorted(dist.cum_probs, level, side="right"))
    return float(dist.outcomes[min(k, dist.outcomes.size - 1)])


def lower_quantile(dist: Distribution, level: float) -> float:
    """Smallest outcome whose cumulative mass reaches ``level``."""
    level = check_level(level)
    k = int(np.searchsorted(dist.cum_probs, level, side="left"))
    return float(dist.outcomes[min(k, dist.outcomes.size - 1)])


def expectation(space: FiniteProbSpace, position: PositionLike, weights=None) -> float:
    """Expected value of the payoff, optionally reweighted by a density.

    ``weights`` may be a duality ``Density`` or a raw vector ``y`` with
    ``E[y] = 1``; the result is then the expectation under the model it
    identifies.
    """
    x = as_outcomes(space, position)
    if weights is None:
        return float(space.probs @ x)
    y = np.asarray(getattr(weights, "values", weights), dtype=float)
    if y.shape != x.shape:
        raise DimensionError(
            f"weight vector has {y.size} entries for a space with {space.n_atoms} atoms"
        )
    return float((space.probs * y) @ x)
