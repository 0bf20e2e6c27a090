"""Scenario-based monetary risk measures on finite probability spaces.

Evaluates the standard catalogue of cash-additive risk measures,
realizes the correspondence between measures and acceptance sets,
verifies dual representations against exact maximizers and a sampling
oracle, constructs measures from losses, spectra and mixtures, and
tests stochastic dominance through quantile characterizations.
"""

from .acceptance import (
    AcceptanceCheckReport,
    AcceptanceSet,
    acceptance_of,
    capital_requirement,
    cash_only_risk,
    check_acceptance_axioms,
)
from .construct import (
    EnvelopeResult,
    LossFunction,
    MixtureMeasure,
    RiskMeasureSpec,
    avar_mixture,
    catalogue_loss,
    envelope,
    evaluate,
    oce,
    shortfall,
    spectrum_from_mixture,
)
from .dominance import (
    DominanceVerdict,
    fsd_dominated,
    fsd_oracle,
    ssd_dominated,
    ssd_oracle,
)
from .duality import (
    ConjugateBound,
    Density,
    DensityCheck,
    DualRepresentation,
    avar_representation,
    check_dual_conditions,
    conjugate_lower_bound,
    density,
    dirac_density,
    dual_evaluate,
    entropic_representation,
    exponential_tilt_density,
    penalty_avar,
    penalty_entropic,
    penalty_worst_case,
    tail_density,
    unit_density,
    worst_case_representation,
)
from .errors import (
    DimensionError,
    DomainError,
    InfeasibleError,
    InvalidLossError,
    RiskModelError,
    UnboundedError,
    ValidationError,
)
from .measures import (
    RiskSpectrum,
    avar,
    entropic,
    expected_loss,
    spectral,
    tail_spectrum,
    uniform_spectrum,
    var,
    worst_case,
)
from .space import (
    DEFAULT_TOL,
    Distribution,
    FiniteProbSpace,
    Position,
    as_outcomes,
    cdf,
    distribution_of,
    expectation,
    lower_quantile,
    upper_quantile,
)

__version__ = "0.1.0"

__all__ = [
    "AcceptanceCheckReport",
    "AcceptanceSet",
    "ConjugateBound",
    "DEFAULT_TOL",
    "Density",
    "DensityCheck",
    "DimensionError",
    "Distribution",
    "DomainError",
    "DominanceVerdict",
    "DualRepresentation",
    "EnvelopeResult",
    "FiniteProbSpace",
    "InfeasibleError",
    "InvalidLossError",
    "LossFunction",
    "MixtureMeasure",
    "Position",
    "RiskMeasureSpec",
    "RiskModelError",
    "RiskSpectrum",
    "UnboundedError",
    "ValidationError",
    "acceptance_of",
    "as_outcomes",
    "avar",
    "avar_mixture",
    "avar_representation",
    "capital_requirement",
    "cash_only_risk",
    "catalogue_loss",
    "cdf",
    "check_acceptance_axioms",
    "check_dual_conditions",
    "conjugate_lower_bound",
    "density",
    "dirac_density",
    "distribution_of",
    "dual_evaluate",
    "entropic",
    "entropic_representation",
    "envelope",
    "evaluate",
    "expectation",
    "expected_loss",
    "exponential_tilt_density",
    "fsd_dominated",
    "fsd_oracle",
    "lower_quantile",
    "oce",
    "penalty_avar",
    "penalty_entropic",
    "penalty_worst_case",
    "shortfall",
    "spectral",
    "spectrum_from_mixture",
    "ssd_dominated",
    "ssd_oracle",
    "tail_density",
    "tail_spectrum",
    "uniform_spectrum",
    "unit_density",
    "upper_quantile",
    "var",
    "worst_case",
    "worst_case_representation",
]
