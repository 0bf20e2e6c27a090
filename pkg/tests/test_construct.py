import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scenrisk import (
    DomainError,
    FiniteProbSpace,
    InfeasibleError,
    InvalidLossError,
    LossFunction,
    MixtureMeasure,
    RiskMeasureSpec,
    UnboundedError,
    ValidationError,
    avar,
    avar_mixture,
    catalogue_loss,
    entropic,
    envelope,
    evaluate,
    expected_loss,
    oce,
    shortfall,
    spectral,
    spectrum_from_mixture,
)

from strategies import betas, levels, mixtures, space_with_positions

UNIFORM4 = FiniteProbSpace.uniform(4)
X4 = np.array([-2.0, -1.0, 0.0, 3.0])
COIN = FiniteProbSpace([0.5, 0.5])
PM1 = np.array([1.0, -1.0])
LOG_COSH_1 = math.log(math.cosh(1.0))


class TestLossCatalogue:
    def test_unknown_name(self):
        with pytest.raises(ValidationError):
            catalogue_loss("cubic")

    def test_exponential_needs_positive_beta(self):
        with pytest.raises(DomainError):
            catalogue_loss("exponential", -1.0)

    def test_power_needs_convex_exponent(self):
        with pytest.raises(DomainError):
            catalogue_loss("power", 0.5)

    def test_direction_is_validated_on_samples(self):
        with pytest.raises(InvalidLossError):
            LossFunction("bad", lambda x: -x, True, "increasing")

    def test_constant_losses_rejected(self):
        with pytest.raises(ValidationError):
            LossFunction("flat", lambda x: np.zeros_like(x), True, "increasing")


class TestEnvelope:
    def test_already_cash_additive_functional_is_fixed(self):
        def phi(v):
            return -float(UNIFORM4.probs @ v)

        result = envelope(UNIFORM4, phi, X4)
        assert result.value == pytest.approx(expected_loss(UNIFORM4, X4), abs=1e-10)

    def test_scaled_hinge_gives_avar(self):
        def phi(v):
            return float(UNIFORM4.probs @ np.maximum(-v, 0.0)) / 0.5

        result = envelope(UNIFORM4, phi, X4)
        assert result.value == pytest.approx(1.5, abs=1e-9)

    def test_exponential_functional_at_zero(self):
        # g(r) = exp(r) - r has its minimum value 1 at r = 0
        def phi(v):
            return float(UNIFORM4.probs @ np.exp(-v))

        result = envelope(UNIFORM4, phi, np.zeros(4))
        assert result.value == pytest.approx(1.0, abs=1e-10)
        assert result.minimizer == pytest.approx(0.0, abs=1e-7)

    def test_unbounded_envelope_is_detected(self):
        result_error = None
        with pytest.raises(UnboundedError):
            envelope(UNIFORM4, lambda v: 0.0, X4)

    def test_grid_route_matches_convex_route(self):
        def phi(v):
            return float(UNIFORM4.probs @ np.exp(-v))

        convex = envelope(UNIFORM4, phi, X4, convex=True)
        scanned = envelope(UNIFORM4, phi, X4, convex=False, grid=(-50.0, 50.0, 2001))
        assert scanned.value == pytest.approx(convex.value, abs=1e-6)

    def test_grid_route_finds_global_minimum_of_bumpy_objective(self):
        # nonincreasing but non-convex loss: plateau then steep drop-off
        def bumpy(x):
            return np.maximum(-x, 0.0).clip(max=1.0) + 2.0 * np.maximum(-x - 2.0, 0.0)

        loss = LossFunction("bumpy", bumpy, False, "nonincreasing")

        def phi(v):
            return float(UNIFORM4.probs @ loss(v))

        result = envelope(UNIFORM4, phi, X4, convex=False, grid=(-60.0, 60.0, 4001))
        grid = np.linspace(-60.0, 60.0, 200001)
        brute = min(phi(X4 - r) - r for r in grid)
        assert result.value <= brute + 1e-6

    @given(space_with_positions(), st.floats(-5.0, 5.0))
    @settings(max_examples=40)
    def test_envelope_cash_additivity_and_dominance(self, sp, cash):
        space, x = sp

        def phi(v):
            return float(space.probs @ np.exp(-v))

        base = envelope(space, phi, x)
        shifted = envelope(space, phi, x + cash)
        assert shifted.value == pytest.approx(base.value - cash, abs=1e-8)
        assert base.value <= phi(x) + 1e-10


class TestOce:
    def test_linear_loss_gives_expected_loss(self):
        loss = catalogue_loss("linear", None, "nonincreasing")
        assert oce(UNIFORM4, X4, loss) == pytest.approx(expected_loss(UNIFORM4, X4), abs=1e-9)

    def test_exponential_loss_gives_entropic(self):
        loss = catalogue_loss("exponential", 1.0, "nonincreasing")
        assert oce(COIN, PM1, loss) == pytest.approx(LOG_COSH_1, abs=1e-10)

    def test_hinge_loss_gives_avar(self):
        loss = catalogue_loss("hinge", 0.5, "nonincreasing")
        assert oce(UNIFORM4, X4, loss) == pytest.approx(1.5, abs=1e-9)

    def test_rejects_increasing_loss(self):
        with pytest.raises(ValidationError):
            oce(UNIFORM4, X4, catalogue_loss("linear", None, "increasing"))


class TestShortfall:
    def test_linear_loss_at_zero_threshold(self):
        loss = catalogue_loss("linear", None, "increasing")
        assert shortfall(UNIFORM4, X4, loss, 0.0) == pytest.approx(0.0, abs=1e-9)

    def test_exponential_loss_gives_entropic(self):
        loss = catalogue_loss("exponential", 1.0, "increasing")
        assert shortfall(COIN, PM1, loss, 1.0) == pytest.approx(LOG_COSH_1, abs=1e-8)

    def test_cash_additivity_on_constants(self):
        loss = catalogue_loss("exponential", 2.0, "increasing")
        base = shortfall(UNIFORM4, np.zeros(4), loss, 1.0)
        shifted = shortfall(UNIFORM4, 3.0 * np.ones(4), loss, 1.0)
        assert shifted == pytest.approx(base - 3.0, abs=1e-9)

    def test_unreachable_threshold(self):
        loss = catalogue_loss("exponential", 1.0, "increasing")
        with pytest.raises(InfeasibleError):
            shortfall(UNIFORM4, X4, loss, -1.0)

    def test_threshold_above_loss_range(self):
        bounded = LossFunction("capped", lambda x: np.minimum(x, 0.0), False, "increasing")
        with pytest.raises(InfeasibleError):
            shortfall(UNIFORM4, X4, bounded, 1.0)

    @given(space_with_positions(n_positions=2), betas, st.floats(0.0, 1.0))
    @settings(max_examples=40)
    def test_convexity_with_convex_loss(self, sp, beta, t):
        space, x, y = sp
        loss = catalogue_loss("exponential", beta, "increasing")
        vx = shortfall(space, x, loss, 1.0)
        vy = shortfall(space, y, loss, 1.0)
        vmix = shortfall(space, t * x + (1.0 - t) * y, loss, 1.0)
        assert vmix <= t * vx + (1.0 - t) * vy + 1e-9


class TestMixtures:
    def test_single_atom_is_avar(self):
        m = MixtureMeasure(((0.5, 1.0),))
        assert avar_mixture(UNIFORM4, X4, m) == avar(UNIFORM4, X4, 0.5)

    def test_two_atom_example(self):
        m = MixtureMeasure(((0.5, 0.5), (1.0, 0.5)))
        assert avar_mixture(UNIFORM4, X4, m) == pytest.approx(0.75, abs=1e-12)

    def test_constants(self):
        m = MixtureMeasure(((0.3, 0.25), (0.8, 0.75)))
        assert avar_mixture(UNIFORM4, 2.0 * np.ones(4), m) == pytest.approx(-2.0, abs=1e-12)

    def test_invalid_mixtures(self):
        with pytest.raises(ValidationError):
            MixtureMeasure(((0.5, 0.4),))
        with pytest.raises(DomainError):
            MixtureMeasure(((1.5, 1.0),))
        with pytest.raises(DomainError):
            MixtureMeasure(((0.0, 1.0),))


class TestSpectrumFromMixture:
    def test_full_level_gives_uniform_weight(self):
        s = spectrum_from_mixture(MixtureMeasure(((1.0, 1.0),)))
        assert s.breakpoints.tolist() == [0.0, 1.0]
        assert s.values.tolist() == [1.0]

    def test_half_level(self):
        s = spectrum_from_mixture(MixtureMeasure(((0.5, 1.0),)))
        assert s.breakpoints.tolist() == [0.0, 0.5, 1.0]
        assert s.values.tolist() == [2.0, 0.0]

    def test_two_levels(self):
        s = spectrum_from_mixture(MixtureMeasure(((0.5, 0.5), (1.0, 0.5))))
        assert s.breakpoints.tolist() == [0.0, 0.5, 1.0]
        assert s.values.tolist() == [1.5, 0.5]

    @given(space_with_positions(), mixtures())
    @settings(max_examples=80)
    def test_spectral_of_mixture_spectrum_matches_mixture(self, sp, m):
        space, x = sp
        assert spectral(space, x, spectrum_from_mixture(m)) == pytest.approx(
            avar_mixture(space, x, m), abs=1e-9
        )


class TestSpecDispatch:
    def test_required_parameters(self):
        with pytest.raises(ValidationError):
            RiskMeasureSpec("avar")
        with pytest.raises(ValidationError):
            RiskMeasureSpec("expected_loss", level=0.5)
        with pytest.raises(ValidationError):
            RiskMeasureSpec("unknown_kind")

    def test_loss_direction_enforced(self):
        inc = catalogue_loss("exponential", 1.0, "increasing")
        with pytest.raises(ValidationError):
            RiskMeasureSpec("envelope", loss=inc)

    def test_dispatch_matches_direct_calls(self):
        assert evaluate(UNIFORM4, X4, RiskMeasureSpec("var", level=0.3)) == 1.0
        assert evaluate(UNIFORM4, X4, RiskMeasureSpec("avar", level=0.5)) == 1.5
        assert evaluate(UNIFORM4, X4, RiskMeasureSpec("worst_case")) == 2.0
        assert evaluate(COIN, PM1, RiskMeasureSpec("entropic", beta=1.0)) == entropic(
            COIN, PM1, 1.0
        )
        mix = MixtureMeasure(((0.5, 1.0),))
        assert evaluate(UNIFORM4, X4, RiskMeasureSpec("mixture", mixture=mix)) == avar(
            UNIFORM4, X4, 0.5
        )
