"""Classical coincidence models for the two-polarizer EPRB experiment.

Two local classical models of the paired-photon coincidence curve — a
factorized Malus-law model with a shared random linear polarization (Furry)
and a second-order-coherence model with counter-rotating circular fields
(an angular HBT analogue) — plus estimators, CHSH analysis, a conditional
probability decomposition, and a reporting CLI.
"""

from .bell import (
    CANONICAL_SETTINGS,
    ChshResult,
    ChshSettings,
    ConditionalDecomposition,
    FactorizabilityReport,
    JointTable,
    chsh_S,
    correlation_E,
    decompose_conditional,
    deterministic_strategy_scores,
    factorizability_check,
    joint_table,
    lhv_max_S,
    reconstruct_coincidence,
)
from .estimators import (
    ClosedForm,
    CoincidenceCurve,
    Estimate,
    Method,
    MonteCarloConfig,
    QuadratureConfig,
    coherence_coincidence,
    derive_seed,
    factorized_coincidence,
    mc_average,
    quadrature_average,
    sample_thetas,
    scan_curve,
)
from .exceptions import (
    ConsistencyError,
    DataError,
    DomainError,
    EprbError,
    EvaluationError,
    ModelError,
    UsageError,
)
from .fields import (
    JonesVector,
    bilinear_dot,
    hermitian_dot,
    intensity,
    source_field_a,
    source_field_b,
)
from .models import (
    FURRY,
    HBT,
    QM,
    ChannelConvention,
    ContractionMode,
    ModelKind,
    SourceModel,
    arm_pass_probability,
    closed_form,
    coherence_denominator,
    coherence_numerator,
    furry_closed_form,
    furry_integrand,
    hbt_closed_form,
    hbt_integrand,
    pair_pass_probability,
    qm_reference,
)

__version__ = "0.1.0"
