"""Factories that build risk measures from simpler ingredients.

Covers cash-additive envelopes of monotone functionals, certainty
equivalents and shortfall measures driven by loss functions, finite
mixtures of Average-Value-at-Risk, and the uniform dispatch record used
by the CLI and the duality checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from . import measures
from .errors import (
    DomainError,
    InfeasibleError,
    InvalidLossError,
    UnboundedError,
    ValidationError,
)
from .measures import RiskSpectrum
from .solve import BRACKET_CAP, minimize_convex, minimize_on_grid, smallest_true
from .space import (
    FiniteProbSpace,
    PositionLike,
    as_outcomes,
    check_level,
    distribution_of,
)

_WEIGHT_TOL = 1e-12
_DIRECTION_SAMPLES = np.linspace(-20.0, 20.0, 81)


@dataclass(frozen=True)
class LossFunction:
    """A scalar loss with a declared monotonicity direction.

    ``fn`` must accept numpy arrays elementwise; values of ``+inf`` are
    allowed.  The declared direction is spot-checked on a fixed grid of
    ordered sample points at construction.
    """

    name: str
    fn: Callable[[np.ndarray], np.ndarray]
    convex: bool
    direction: str  # "increasing" (shortfall style) or "nonincreasing" (certainty-equivalent style)

    def __post_init__(self):
        if self.direction not in ("increasing", "nonincreasing"):
            raise ValidationError(f"unknown loss direction {self.direction!r}")
        with np.errstate(over="ignore"):
            samples = np.asarray(self.fn(_DIRECTION_SAMPLES), dtype=float)
        if samples.shape != _DIRECTION_SAMPLES.shape or np.any(np.isnan(samples)):
            raise ValidationError(f"loss {self.name!r} must evaluate elementwise without NaNs")
        finite = samples[np.isfinite(samples)]
        if finite.size == 0 or float(finite.max()) == float(finite.min()):
            raise ValidationError(f"loss {self.name!r} must be proper and not constant")
        diffs = np.diff(samples)
        if self.direction == "increasing" and np.any(diffs < 0.0):
            raise InvalidLossError(f"loss {self.name!r} decreases on sampled points")
        if self.direction == "nonincreasing" and np.any(diffs > 0.0):
            raise InvalidLossError(f"loss {self.name!r} increases on sampled points")

    def __call__(self, x):
        with np.errstate(over="ignore"):
            return self.fn(np.asarray(x, dtype=float))


#: loss families available to configuration files
LOSS_CATALOGUE = ("linear", "exponential", "hinge", "power")


def catalogue_loss(name: str, param: Optional[float] = None, direction: str = "increasing") -> LossFunction:
    """Build a catalogue loss: linear, exponential(beta), hinge(level) or power(p).

    The ``increasing`` variants suit shortfall thresholds; the
    ``nonincreasing`` variants suit certainty-equivalent envelopes (the
    exponential one reproduces the entropic measure, the hinge one
    reproduces Average-Value-at-Risk).
    """
    if direction not in ("increasing", "nonincreasing"):
        raise ValidationError(f"unknown loss direction {direction!r}")
    if name == "linear":
        if param is not None:
            raise DomainError("linear loss takes no parameter")
        if direction == "increasing":
            return LossFunction("linear", lambda x: x, True, direction)
        return LossFunction("linear", lambda x: -x, True, direction)
    if name == "exponential":
        beta = float(param) if param is not None else 1.0
        if not beta > 0.0:
            raise DomainError(f"exponential loss needs beta > 0, got {param!r}")
        if direction == "increasing":
            return LossFunction(f"exponential({beta})", lambda x: np.exp(beta * x), True, direction)
        return LossFunction(
            f"exponential({beta})", lambda x: np.expm1(-beta * x) / beta, True, direction
        )
    if name == "hinge":
        level = check_level(param if param is not None else 1.0)
        if direction == "increasing":
            return LossFunction(
                f"hinge({level})", lambda x: np.maximum(x, 0.0) / level, True, direction
            )
        return LossFunction(
            f"hinge({level})", lambda x: np.maximum(-x, 0.0) / level, True, direction
        )
    if name == "power":
        p = float(param) if param is not None else 2.0
        if not p >= 1.0:
            raise DomainError(f"power loss needs exponent >= 1, got {param!r}")
        if direction == "increasing":
            return LossFunction(f"power({p})", lambda x: np.maximum(x, 0.0) ** p, True, direction)
        return LossFunction(f"power({p})", lambda x: np.maximum(-x, 0.0) ** p, True, direction)
    raise ValidationError(f"unknown loss {name!r}; available: {', '.join(LOSS_CATALOGUE)}")


@dataclass(frozen=True)
class MixtureMeasure:
    """Finite mixture of tail levels: ((level, weight), ...)."""

    atoms: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        atoms = tuple((float(a), float(w)) for a, w in self.atoms)
        if not atoms:
            raise ValidationError("a mixture needs at least one (level, weight) atom")
        for a, w in atoms:
            check_level(a)
            if not w > 0.0:
                raise ValidationError(f"mixture weights must be positive, got {w!r}")
        total = math.fsum(w for _, w in atoms)
        if abs(total - 1.0) > _WEIGHT_TOL:
            raise ValidationError(f"mixture weights sum to {total!r}, expected 1")
        object.__setattr__(self, "atoms", atoms)


@dataclass(frozen=True)
class EnvelopeResult:
    """Value of a cash-additive envelope together with the minimizing shift."""

    value: float
    minimizer: float


def envelope(
    space: FiniteProbSpace,
    phi: Callable[[np.ndarray], float],
    position: PositionLike,
    *,
    convex: bool = True,
    tol: float = 1e-10,
    bracket_cap: float = BRACKET_CAP,
    grid: Optional[Tuple[float, float, int]] = None,
) -> EnvelopeResult:
    """Greatest cash-additive minorant of a monotone functional ``phi``.

    Minimizes ``g(r) = phi(X - r) - r`` over the cash shift ``r``.  For
    convex ``phi`` the minimum is found by bracketing plus golden-section
    search; otherwise a grid scan with local refinement is used and
    ``grid = (lo, hi, n_points)`` selects the scan window.
    """
    x = as_outcomes(space, position)

    def g(r: float) -> float:
        return float(phi(x - r)) - r

    try:
        if convex:
            value, r_star = minimize_convex(
                g, tol=tol, cap=bracket_cap, unbounded_msg="envelope unbounded below"
            )
        else:
            lo, hi, n_points = grid if grid is not None else (-100.0, 100.0, 401)
            value, r_star = minimize_on_grid(g, lo, hi, n_points, tol=tol)
    except UnboundedError:
        raise UnboundedError("envelope unbounded below", side="below")
    return EnvelopeResult(value, r_star)


def oce(space: FiniteProbSpace, position: PositionLike, loss: LossFunction) -> float:
    """Optimized certainty equivalent: envelope of ``X -> E[loss(X)]``.

    ``loss`` must be nonincreasing so the functional is monotone.
    """
    if loss.direction != "nonincreasing":
        raise ValidationError("certainty equivalents need a nonincreasing loss")

    def phi(v: np.ndarray) -> float:
        return float(space.probs @ loss(v))

    return envelope(space, phi, position, convex=loss.convex).value


def shortfall(
    space: FiniteProbSpace,
    position: PositionLike,
    loss: LossFunction,
    r0: float,
    *,
    tol: float = 1e-10,
    bracket_cap: float = BRACKET_CAP,
) -> float:
    """Minimal cash ``s`` with ``E[loss(-X - s)] <= r0``.

    The expected loss is nonincreasing in ``s`` for an increasing loss,
    so the threshold is found by bracket expansion plus bisection.  The
    threshold parameter ``r0`` must lie in the interior of the loss
    range; violations surface as infeasibility at the bracket cap.
    """
    if loss.direction != "increasing":
        raise ValidationError("shortfall risk needs an increasing loss")
    x = as_outcomes(space, position)
    r0 = float(r0)
    neg_x = -x
    probs = space.probs
    fn = loss.fn

    def excess(s: float) -> float:
        return float(probs @ fn(neg_x - s))

    def feasible(s: float) -> bool:
        return float(probs @ fn(neg_x - s)) <= r0

    with np.errstate(over="ignore"):
        try:
            s_star = smallest_true(feasible, tol=tol, cap=bracket_cap)
        except UnboundedError as err:
            if err.side == "above":
                raise InfeasibleError(
                    f"no cash level pushes the expected loss below r0={r0!r} within the bracket cap"
                ) from err
            raise InfeasibleError(
                f"expected loss stays below r0={r0!r} for every cash level; "
                "r0 lies outside the interior of the loss range"
            ) from err
        probes = [excess(s_star + k) for k in (-2.0, -1.0, 0.0, 1.0, 2.0)]
    if any(b > a + 1e-12 for a, b in zip(probes, probes[1:])):
        raise InvalidLossError("expected loss is not monotone in the cash shift")
    return s_star


def avar_mixture(space: FiniteProbSpace, position: PositionLike, mixture: MixtureMeasure) -> float:
    """Weighted sum of Average-Value-at-Risk values over the mixture atoms."""
    if not isinstance(mixture, MixtureMeasure):
        raise ValidationError("avar_mixture needs a MixtureMeasure")
    law = distribution_of(space, position)
    return math.fsum(
        w * measures.avar_of_distribution(law, level) for level, w in mixture.atoms
    )


def spectrum_from_mixture(mixture: MixtureMeasure) -> RiskSpectrum:
    """Spectrum with the same value as the mixture on every position.

    The mixture atom (level, weight) contributes weight/level on
    ``(0, level]``, so the spectrum is a nonincreasing staircase over the
    distinct levels.
    """
    if not isinstance(mixture, MixtureMeasure):
        raise ValidationError("spectrum_from_mixture needs a MixtureMeasure")
    levels = sorted({a for a, _ in mixture.atoms})
    if levels[-1] < 1.0:
        levels.append(1.0)
    breakpoints = np.concatenate([[0.0], np.asarray(levels)])
    values = np.array(
        [
            math.fsum(w / a for a, w in mixture.atoms if a >= u)
            for u in levels
        ]
    )
    return RiskSpectrum(breakpoints, values)


MEASURE_KINDS = (
    "expected_loss",
    "var",
    "avar",
    "worst_case",
    "entropic",
    "spectral",
    "shortfall",
    "mixture",
    "envelope",
)


@dataclass(frozen=True)
class RiskMeasureSpec:
    """Uniform dispatch record for one parametrized risk measure.

    Exactly the parameters required by ``kind`` may be set; they are
    validated here, once, rather than on every evaluation.
    """

    kind: str
    level: Optional[float] = None
    beta: Optional[float] = None
    spectrum: Optional[RiskSpectrum] = None
    loss: Optional[LossFunction] = None
    r0: Optional[float] = None
    mixture: Optional[MixtureMeasure] = None

    def __post_init__(self):
        if self.kind not in MEASURE_KINDS:
            raise ValidationError(
                f"unknown measure kind {self.kind!r}; available: {', '.join(MEASURE_KINDS)}"
            )
        required = {
            "expected_loss": (),
            "worst_case": (),
            "var": ("level",),
            "avar": ("level",),
            "entropic": ("beta",),
            "spectral": ("spectrum",),
            "shortfall": ("loss", "r0"),
            "mixture": ("mixture",),
            "envelope": ("loss",),
        }[self.kind]
        for field_name in ("level", "beta", "spectrum", "loss", "r0", "mixture"):
            value = getattr(self, field_name)
            if field_name in required:
                if value is None:
                    raise ValidationError(f"measure kind {self.kind!r} needs {field_name!r}")
            elif value is not None:
                raise ValidationError(f"measure kind {self.kind!r} does not take {field_name!r}")
        if self.level is not None:
            check_level(self.level)
        if self.beta is not None and not self.beta > 0.0:
            raise DomainError(f"beta must be positive, got {self.beta!r}")
        if self.spectrum is not None and not isinstance(self.spectrum, RiskSpectrum):
            raise ValidationError("spectrum parameter must be a RiskSpectrum")
        if self.mixture is not None and not isinstance(self.mixture, MixtureMeasure):
            raise ValidationError("mixture parameter must be a MixtureMeasure")
        if self.loss is not None:
            if not isinstance(self.loss, LossFunction):
                raise ValidationError("loss parameter must be a LossFunction")
            wanted = "increasing" if self.kind == "shortfall" else "nonincreasing"
            if self.loss.direction != wanted:
                raise ValidationError(f"{self.kind} needs a {wanted} loss")
        if self.r0 is not None and not math.isfinite(self.r0):
            raise DomainError(f"r0 must be finite, got {self.r0!r}")


def evaluate(space: FiniteProbSpace, position: PositionLike, spec: RiskMeasureSpec) -> float:
    """Evaluate the measure described by ``spec`` at ``position``."""
    kind = spec.kind
    if kind == "expected_loss":
        return measures.expected_loss(space, position)
    if kind == "var":
        return measures.var(space, position, spec.level)
    if kind == "avar":
        return measures.avar(space, position, spec.level)
    if kind == "worst_case":
        return measures.worst_case(space, position)
    if kind == "entropic":
        return measures.entropic(space, position, spec.beta)
    if kind == "spectral":
        return measures.spectral(space, position, spec.spectrum)
    if kind == "shortfall":
        return shortfall(space, position, spec.loss, spec.r0)
    if kind == "mixture":
        return avar_mixture(space, position, spec.mixture)
    if kind == "envelope":
        return oce(space, position, spec.loss)
    raise ValidationError(f"unknown measure kind {kind!r}")
