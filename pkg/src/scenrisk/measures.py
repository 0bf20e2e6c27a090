"""Concrete risk measures evaluated on (space, position) pairs.

All evaluations are routed through the merged law of the position, so
permuting atoms of a uniform space leaves every value bit-identical
(law invariance holds exactly, not just up to rounding).

Sign convention: positions are gains, so risk numbers are capital
requirements.  Adding ``r`` units of cash lowers each measure by ``r``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, ValidationError
from .space import (
    FiniteProbSpace,
    PositionLike,
    check_level,
    distribution_of,
)

_SPECTRUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class RiskSpectrum:
    """Piecewise-constant weighting of quantile levels.

    ``breakpoints`` is an increasing grid ``0 = u_0 < ... < u_m = 1`` and
    ``values[j]`` is the weight on the interval ``(u_j, u_{j+1}]``.  Weights
    must be nonnegative, nonincreasing and integrate to one.
    """

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.breakpoints, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if u.ndim != 1 or v.ndim != 1 or u.size != v.size + 1 or v.size == 0:
            raise ValidationError("spectrum needs m+1 breakpoints for m interval values")
        if u[0] != 0.0 or u[-1] != 1.0 or np.any(np.diff(u) <= 0.0):
            raise ValidationError("breakpoints must increase strictly from 0 to 1")
        if np.any(v < 0.0) or not np.all(np.isfinite(v)):
            raise ValidationError("spectrum values must be finite and nonnegative")
        if np.any(np.diff(v) > 0.0):
            raise ValidationError("spectrum values must be nonincreasing")
        total = math.fsum((v * np.diff(u)).tolist())
        if abs(total - 1.0) > _SPECTRUM_TOL:
            raise ValidationError(f"spectrum integrates to {total!r}, expected 1")
        arr_u = np.array(u)
        arr_u.setflags(write=False)
        arr_v = np.array(v)
        arr_v.setflags(write=False)
        object.__setattr__(self, "breakpoints", arr_u)
        object.__setattr__(self, "values", arr_v)

    def weight_at(self, level: float) -> float:
        """Spectrum value at a level in (0, 1]."""
        check_level(level)
        j = int(np.searchsorted(self.breakpoints, level, side="left"))
        return float(self.values[max(j - 1, 0)])


def uniform_spectrum() -> RiskSpectrum:
    """Constant weight one; the induced measure is the expected loss."""
    return RiskSpectrum(np.array([0.0, 1.0]), np.array([1.0]))


def tail_spectrum(level: float) -> RiskSpectrum:
    """Weight ``1/level`` on ``(0, level]``; the induced measure is ``avar``."""
    level = check_level(level)
    if level == 1.0:
        return uniform_spectrum()
    return RiskSpectrum(np.array([0.0, level, 1.0]), np.array([1.0 / level, 0.0]))


def expected_loss(space: FiniteProbSpace, position: PositionLike) -> float:
    """Negated expectation, the simplest linear risk measure."""
    d = distribution_of(space, position)
    return -float(d.probs @ d.outcomes)


def worst_case(space: FiniteProbSpace, position: PositionLike) -> float:
    """Negated minimum outcome; the most conservative capital requirement."""
    d = distribution_of(space, position)
    return -float(d.outcomes[0])


def var(space: FiniteProbSpace, position: PositionLike, level: float) -> float:
    """Value-at-Risk: the negated upper quantile at ``level``."""
    d = distribution_of(space, position)
    level = check_level(level)
    k = int(np.searchsorted(d.cum_probs, level, side="right"))
    return -float(d.outcomes[min(k, d.outcomes.size - 1)])


def avar_of_distribution(d, level: float) -> float:
    """Average-Value-at-Risk of an already computed law."""
    level = check_level(level)
    c = d.cum_probs
    m = min(int(np.searchsorted(c, level, side="left")), c.size - 1)
    below = float(c[m - 1]) if m > 0 else 0.0
    tail = -float(d.probs[:m] @ d.outcomes[:m]) - (level - below) * float(d.outcomes[m])
    return tail / level


def avar(space: FiniteProbSpace, position: PositionLike, level: float) -> float:
    """Average-Value-at-Risk: mean of Value-at-Risk over the lowest levels.

    Computed in closed form as the average loss over the worst ``level``
    probability mass, splitting the marginal atom proportionally.  Equals
    ``(1/level) * integral of var over (0, level]``.
    """
    return avar_of_distribution(distribution_of(space, position), level)


def entropic(space: FiniteProbSpace, position: PositionLike, beta: float) -> float:
    """Exponential risk ``log(E[exp(-beta X)]) / beta``.

    Evaluated with a max-shifted log-sum-exp so that large ``beta`` does
    not overflow.
    """
    beta = float(beta)
    if not beta > 0.0:
        raise DomainError(f"beta must be positive, got {beta!r}")
    d = distribution_of(space, position)
    z = -beta * d.outcomes
    shift = float(z.max())
    return (shift + math.log(float(d.probs @ np.exp(z - shift)))) / beta


def spectral(space: FiniteProbSpace, position: PositionLike, spectrum: RiskSpectrum) -> float:
    """Spectrum-weighted quantile risk.

    The lower quantile of a finite law is a step function of the level
    with jumps at cumulative masses; the integral of ``spectrum`` against
    it is therefore computed exactly by splitting (0, 1] at the union of
    both sets of breakpoints.
    """
    if not isinstance(spectrum, RiskSpectrum):
        raise ValidationError("spectral risk needs a RiskSpectrum")
    d = distribution_of(space, position)
    cuts = np.union1d(spectrum.breakpoints, np.minimum(d.cum_probs, 1.0))
    cuts = cuts[(cuts >= 0.0) & (cuts <= 1.0)]
    mids = 0.5 * (cuts[:-1] + cuts[1:])
    q_idx = np.minimum(
        np.searchsorted(d.cum_probs, mids, side="left"), d.outcomes.size - 1
    )
    w_idx = np.maximum(np.searchsorted(spectrum.breakpoints, mids, side="left") - 1, 0)
    segments = spectrum.values[w_idx] * d.outcomes[q_idx] * np.diff(cuts)
    return -float(segments.sum())


def measure_names() -> Sequence[str]:
    """Names of the directly evaluable measures in this module."""
    return ("expected_loss", "var", "avar", "worst_case", "entropic", "spectral")
