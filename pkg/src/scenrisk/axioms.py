"""Randomized verification of the defining properties of risk measures.

The engine draws random (space, position) instances and checks, for
every measure kind, the properties that kind is expected to satisfy:
cash-additivity, monotonicity, zero at zero, positive homogeneity,
subadditivity and convexity.  Expected failures (Value-at-Risk is not
subadditive, the exponential measure is not homogeneous, ...) are part
of the profile: finding a counterexample for them is a pass.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .construct import (
    MixtureMeasure,
    RiskMeasureSpec,
    catalogue_loss,
    evaluate,
    spectrum_from_mixture,
)
from .measures import var
from .space import DEFAULT_TOL, FiniteProbSpace

#: measure kinds exercised by the randomized suite
SUITE_KINDS = (
    "expected_loss",
    "var",
    "avar",
    "worst_case",
    "entropic",
    "spectral",
    "shortfall",
    "mixture",
)

PROPERTIES = (
    "cash_additivity",
    "monotonicity",
    "zero_at_zero",
    "positive_homogeneity",
    "subadditivity",
    "convexity",
)


@dataclass(frozen=True)
class PropertyProfile:
    """Which optional properties a measure kind is expected to satisfy.

    Cash-additivity, monotonicity and zero-at-zero are expected of every
    kind and are not configurable.
    """

    positive_homogeneity: bool
    subadditivity: bool
    convexity: bool

    def expects(self, prop: str) -> bool:
        if prop in ("cash_additivity", "monotonicity", "zero_at_zero"):
            return True
        return getattr(self, prop)


DEFAULT_PROFILE: Dict[str, PropertyProfile] = {
    "expected_loss": PropertyProfile(True, True, True),
    "var": PropertyProfile(True, False, False),
    "avar": PropertyProfile(True, True, True),
    "worst_case": PropertyProfile(True, True, True),
    "entropic": PropertyProfile(False, False, True),
    "spectral": PropertyProfile(True, True, True),
    "shortfall": PropertyProfile(False, False, True),
    "mixture": PropertyProfile(True, True, True),
}

#: once this many counterexamples are recorded for a property the engine
#: stops re-deriving them (the property is already falsified)
_FALSIFIED_CAP = 10


@dataclass
class SuiteOutcome:
    """Violation bookkeeping for one randomized run."""

    seed: int
    instances: int
    tol: float
    counts: Dict[Tuple[str, str], int] = field(default_factory=dict)
    examples: Dict[Tuple[str, str], dict] = field(default_factory=dict)

    def record(self, kind: str, prop: str, example: dict) -> None:
        key = (kind, prop)
        self.counts[key] = self.counts.get(key, 0) + 1
        self.examples.setdefault(key, example)

    def violations(self, kind: str, prop: str) -> int:
        return self.counts.get((kind, prop), 0)

    def holds(self, kind: str, prop: str) -> bool:
        return self.violations(kind, prop) == 0

    def mismatches(self, profile: Dict[str, PropertyProfile]) -> list:
        """Kinds and properties whose observed behavior contradicts the profile."""
        out = []
        for kind, expected in profile.items():
            for prop in PROPERTIES:
                want_hold = expected.expects(prop)
                holds = self.holds(kind, prop)
                if want_hold != holds:
                    out.append((kind, prop, want_hold, self.examples.get((kind, prop))))
        return out


def random_space(rng: np.random.Generator, max_atoms: int = 20, min_atoms: int = 1) -> FiniteProbSpace:
    n = int(rng.integers(min_atoms, max_atoms + 1))
    w = rng.random(n) + 0.05
    return FiniteProbSpace(w / w.sum())


def random_position(rng: np.random.Generator, n_atoms: int, scale: float = 2.0) -> np.ndarray:
    x = rng.normal(0.0, scale, n_atoms)
    if rng.random() < 0.25:
        x = np.round(x, 1)  # provoke tied outcomes
    return x


def random_mixture(rng: np.random.Generator, max_atoms: int = 3) -> MixtureMeasure:
    k = int(rng.integers(1, max_atoms + 1))
    levels = rng.uniform(0.05, 1.0, k)
    weights = rng.random(k) + 0.1
    weights = weights / weights.sum()
    return MixtureMeasure(tuple(zip(levels.tolist(), weights.tolist())))


def random_spec(rng: np.random.Generator, kind: str) -> RiskMeasureSpec:
    if kind in ("expected_loss", "worst_case"):
        return RiskMeasureSpec(kind)
    if kind in ("var", "avar"):
        level = 1.0 if rng.random() < 0.1 else float(rng.uniform(0.05, 1.0))
        return RiskMeasureSpec(kind, level=level)
    if kind == "entropic":
        return RiskMeasureSpec(kind, beta=float(rng.uniform(0.1, 3.0)))
    if kind == "spectral":
        return RiskMeasureSpec(kind, spectrum=spectrum_from_mixture(random_mixture(rng)))
    if kind == "shortfall":
        loss = catalogue_loss("exponential", float(rng.uniform(0.2, 2.0)), "increasing")
        return RiskMeasureSpec(kind, loss=loss, r0=1.0)
    if kind == "mixture":
        return RiskMeasureSpec(kind, mixture=random_mixture(rng))
    raise ValueError(f"no random generator for kind {kind!r}")


def run_axiom_suite(
    n_instances: int,
    seed: int,
    *,
    max_atoms: int = 20,
    tol: float = DEFAULT_TOL,
    kinds: Tuple[str, ...] = SUITE_KINDS,
    profile: Optional[Dict[str, PropertyProfile]] = None,
) -> SuiteOutcome:
    """Check every kind's properties on ``n_instances`` random instances.

    Properties the profile expects to fail are only rechecked until a
    handful of counterexamples have been recorded; properties expected
    to hold are checked on every instance.
    """
    profile = profile if profile is not None else DEFAULT_PROFILE
    rng = np.random.default_rng(seed)
    outcome = SuiteOutcome(seed=seed, instances=n_instances, tol=tol)

    for _ in range(n_instances):
        space = random_space(rng, max_atoms)
        n = space.n_atoms
        x = random_position(rng, n)
        y = random_position(rng, n)
        cash = float(rng.normal(0.0, 2.0))
        lam = float(rng.uniform(0.1, 3.0))
        t = float(rng.uniform(0.0, 1.0))
        bump = np.abs(rng.normal(0.0, 1.0, n))
        zero = np.zeros(n)
        base = {"probs": space.probs.tolist(), "x": x.tolist()}

        for kind in kinds:
            spec = random_spec(rng, kind)
            expected = profile.get(kind, PropertyProfile(True, True, True))

            def active(prop: str) -> bool:
                if expected.expects(prop):
                    return True
                return outcome.violations(kind, prop) < _FALSIFIED_CAP

            rho_x = evaluate(space, x, spec)

            v0 = evaluate(space, zero, spec)
            if abs(v0) > tol:
                outcome.record(kind, "zero_at_zero", {**base, "value_at_zero": v0})

            vc = evaluate(space, x + cash, spec)
            if abs(vc - (rho_x - cash)) > tol:
                outcome.record(
                    kind,
                    "cash_additivity",
                    {**base, "cash": cash, "lhs": vc, "rhs": rho_x - cash},
                )

            vm = evaluate(space, x + bump, spec)
            if vm > rho_x + tol:
                outcome.record(
                    kind,
                    "monotonicity",
                    {**base, "bump": bump.tolist(), "lhs": vm, "rhs": rho_x},
                )

            if active("positive_homogeneity"):
                vh = evaluate(space, lam * x, spec)
                if abs(vh - lam * rho_x) > tol:
                    outcome.record(
                        kind,
                        "positive_homogeneity",
                        {**base, "scale": lam, "lhs": vh, "rhs": lam * rho_x},
                    )

            need_sub = active("subadditivity")
            need_cvx = active("convexity")
            if need_sub or need_cvx:
                rho_y = evaluate(space, y, spec)
                if need_sub:
                    vs = evaluate(space, x + y, spec)
                    if vs > rho_x + rho_y + tol:
                        outcome.record(
                            kind,
                            "subadditivity",
                            {**base, "y": y.tolist(), "lhs": vs, "rhs": rho_x + rho_y},
                        )
                if need_cvx:
                    vmix = evaluate(space, t * x + (1.0 - t) * y, spec)
                    bound = t * rho_x + (1.0 - t) * rho_y
                    if vmix > bound + tol:
                        outcome.record(
                            kind,
                            "convexity",
                            {**base, "y": y.tolist(), "t": t, "lhs": vmix, "rhs": bound},
                        )
    return outcome


def find_var_subadditivity_violation(
    seed: int,
    max_trials: int,
    *,
    max_atoms: int = 10,
    margin: float = DEFAULT_TOL,
) -> Optional[dict]:
    """Search for a triple where Value-at-Risk penalizes diversification.

    Returns a witness record (probabilities, positions, level and the
    three values) as soon as ``var(x + y) > var(x) + var(y) + margin``,
    or ``None`` if the budget is exhausted.
    """
    rng = np.random.default_rng(seed)
    for _ in range(max_trials):
        space = random_space(rng, max_atoms, min_atoms=2)
        n = space.n_atoms
        x = random_position(rng, n)
        y = random_position(rng, n)
        level = float(rng.uniform(0.1, 0.9))
        vx = var(space, x, level)
        vy = var(space, y, level)
        vxy = var(space, x + y, level)
        if vxy > vx + vy + margin:
            return {
                "probs": space.probs.tolist(),
                "x": x.tolist(),
                "y": y.tolist(),
                "level": level,
                "var_x": vx,
                "var_y": vy,
                "var_sum": vxy,
            }
    return None
