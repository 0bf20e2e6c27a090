"""First- and second-order stochastic dominance on finite laws.

Both orders are characterized by quantile-based risk measures evaluated
at every level in (0, 1].  On finite supports the level functions are
piecewise constant (first order) or piecewise linear (second order), so
the universally quantified statements reduce to finitely many breakpoint
checks.  Independent oracles work in outcome space instead: pointwise
CDF comparison and integrated-CDF comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .space import Distribution, FiniteProbSpace, PositionLike, distribution_of

#: slack absorbing float noise in dominance inequalities
DEFAULT_SLACK = 1e-12


@dataclass(frozen=True)
class DominanceVerdict:
    """Outcome of a dominance test; ``witness`` is a violating level."""

    dominated: bool
    witness: Optional[float] = None

    def __post_init__(self):
        if self.dominated and self.witness is not None:
            raise ValueError("a positive verdict carries no witness")


def _merged_levels(dx: Distribution, dy: Distribution) -> np.ndarray:
    levels = np.union1d(
        np.minimum(dx.cum_probs, 1.0), np.minimum(dy.cum_probs, 1.0)
    )
    return np.union1d(levels, np.array([1.0]))


def _upper_quantiles(dist: Distribution, levels: np.ndarray) -> np.ndarray:
    idx = np.minimum(
        np.searchsorted(dist.cum_probs, levels, side="right"),
        dist.outcomes.size - 1,
    )
    return dist.outcomes[idx]


def _tail_loss_integral(dist: Distribution, levels: np.ndarray) -> np.ndarray:
    """Integral of the Value-at-Risk level function from 0 to each level.

    Piecewise linear with kinks exactly at the cumulative masses; equals
    level * avar(level).
    """
    losses = -dist.outcomes
    cum_losses = np.concatenate([[0.0], np.cumsum(dist.probs * losses)])
    k = np.minimum(
        np.searchsorted(dist.cum_probs, levels, side="left"), dist.outcomes.size - 1
    )
    below = np.where(k > 0, dist.cum_probs[np.maximum(k - 1, 0)], 0.0)
    return cum_losses[k] + (levels - below) * losses[k]


def _cluster_levels(levels: np.ndarray, tol: float) -> np.ndarray:
    """Collapse levels closer than ``tol``, keeping each cluster's maximum.

    Two laws can reach the same cumulative mass through different
    summation orders, leaving jump levels one ulp apart.  Quantiles are
    discontinuous in the level, so sampling inside such a spurious band
    would compare one law before its jump with the other after it.
    """
    if tol <= 0.0 or levels.size < 2:
        return levels
    keep = np.empty(levels.size, dtype=bool)
    keep[:-1] = np.diff(levels) > tol
    keep[-1] = True
    return levels[keep]


def fsd_dominated(
    space: FiniteProbSpace,
    x: PositionLike,
    y: PositionLike,
    *,
    slack: float = DEFAULT_SLACK,
) -> DominanceVerdict:
    """Is ``x`` first-order dominated by ``y``?

    Holds when Value-at-Risk of ``x`` is at least that of ``y`` at every
    level, i.e. the upper quantiles of ``x`` never exceed those of ``y``.
    The quantiles are step functions of the level, so checking one point
    per merged breakpoint interval (plus level one) decides the statement.
    Passing ``slack=0.0`` gives the strict comparison.
    """
    dx = distribution_of(space, x)
    dy = distribution_of(space, y)
    breaks = _cluster_levels(_merged_levels(dx, dy), slack)
    test_levels = np.concatenate([[0.5 * breaks[0]], breaks])
    excess = _upper_quantiles(dx, test_levels) - _upper_quantiles(dy, test_levels)
    j = int(np.argmax(excess))
    if excess[j] > slack:
        return DominanceVerdict(False, float(test_levels[j]))
    return DominanceVerdict(True)


def ssd_dominated(
    space: FiniteProbSpace,
    x: PositionLike,
    y: PositionLike,
    *,
    slack: float = DEFAULT_SLACK,
) -> DominanceVerdict:
    """Is ``x`` second-order dominated by ``y``?

    Holds when Average-Value-at-Risk of ``x`` is at least that of ``y``
    at every level.  Scaled by the level, both sides are piecewise
    linear with kinks only at the merged cumulative masses, so checking
    the kinks and level one decides the universally quantified statement.
    """
    dx = distribution_of(space, x)
    dy = distribution_of(space, y)
    levels = _merged_levels(dx, dy)
    deficit = _tail_loss_integral(dy, levels) - _tail_loss_integral(dx, levels)
    j = int(np.argmax(deficit))
    if deficit[j] > slack:
        return DominanceVerdict(False, float(levels[j]))
    return DominanceVerdict(True)


def _integrated_cdf(dist: Distribution, ts: np.ndarray) -> np.ndarray:
    """Integral of the CDF from -inf to each ``t`` (piecewise linear)."""
    o = dist.outcomes
    c = dist.cum_probs
    at_outcomes = np.concatenate([[0.0], np.cumsum(c[:-1] * np.diff(o))])
    k = np.searchsorted(o, ts, side="right")
    kk = np.maximum(k, 1)
    values = at_outcomes[kk - 1] + c[kk - 1] * (ts - o[kk - 1])
    values[k == 0] = 0.0
    return values


def fsd_oracle(dx: Distribution, dy: Distribution, *, slack: float = DEFAULT_SLACK) -> bool:
    """Outcome-space check of first-order dominance: CDF of ``dx`` lies
    pointwise above the CDF of ``dy``."""
    ts = np.union1d(dx.outcomes, dy.outcomes)
    fx = _cdf_at(dx, ts)
    fy = _cdf_at(dy, ts)
    return bool(np.all(fx >= fy - slack))


def ssd_oracle(dx: Distribution, dy: Distribution, *, slack: float = DEFAULT_SLACK) -> bool:
    """Outcome-space check of second-order dominance: the integrated CDF
    of ``dx`` lies pointwise above that of ``dy``.

    Both integrals are piecewise linear with kinks at the outcomes and
    parallel tails, so comparing at the merged outcomes is exact.
    """
    ts = np.union1d(dx.outcomes, dy.outcomes)
    return bool(np.all(_integrated_cdf(dx, ts) >= _integrated_cdf(dy, ts) - slack))


def _cdf_at(dist: Distribution, ts: np.ndarray) -> np.ndarray:
    k = np.searchsorted(dist.outcomes, ts, side="right")
    padded = np.concatenate([[0.0], dist.cum_probs])
    return padded[k]
