"""Joint outcome tables, CHSH analysis, and the conditional-probability decomposition.

The models report a single two-channel coincidence P(φ).  The four-channel
table at a setting pair (a, b) is built from it by the polarizer-blocking
complement: an outcome that passes at angle x would be blocked at x + π/2, so

    p(++) = p(−−) = P(b − a),      p(+−) = p(−+) = P(b − a + π/2).

Every model curve here satisfies P(φ) + P(φ + π/2) = 1/2, so the table is
normalized exactly.  The CHSH combination uses the fixed sign convention

    S = E(a,b) − E(a,b′) + E(a′,b) + E(a′,b′)

and results report |S| next to the deterministic local-strategy bound, which
is obtained by exhaustive enumeration rather than assumed.

The decomposition machinery expands the per-realization coincidence as
P(λ)·P(a|λ)·P(b|a,λ) on a uniform λ grid and tests whether the conditional
P(b|a,λ) collapses to the marginal P(b|λ) — i.e. whether the model is
statistically factorizable given the hidden variable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .exceptions import DataError, ModelError, UsageError
from .fields import _finite_angle
from .models import (
    ModelKind,
    SourceModel,
    arm_pass_probability,
    closed_form,
    pair_pass_probability,
)

HALF_PI = 0.5 * math.pi

# Below this single-arm probability the conditional P(b|a,λ) is 0/0; such
# nodes are flagged degenerate instead of interpolated.
DEGENERATE_ARM_FLOOR = 1e-12

_TABLE_SUM_TOL = 1e-9
_LHV_MARGIN = 1e-12


@dataclass(frozen=True)
class JointTable:
    """Probabilities of the four outcome pairs (++, +−, −+, −−) at settings (a, b)."""

    p_pp: float
    p_pm: float
    p_mp: float
    p_mm: float
    a: float
    b: float

    @property
    def total(self) -> float:
        return self.p_pp + self.p_pm + self.p_mp + self.p_mm


@dataclass(frozen=True)
class ChshSettings:
    a: float
    a_prime: float
    b: float
    b_prime: float

    def __post_init__(self):
        for name in ("a", "a_prime", "b", "b_prime"):
            _finite_angle(name, getattr(self, name))


CANONICAL_SETTINGS = ChshSettings(0.0, math.pi / 4, math.pi / 8, 3 * math.pi / 8)


@dataclass(frozen=True)
class ChshResult:
    e_ab: float
    e_ab_prime: float
    e_a_prime_b: float
    e_a_prime_b_prime: float
    s_value: float
    lhv_bound: float

    @property
    def abs_s(self) -> float:
        return abs(self.s_value)

    @property
    def violates_lhv(self) -> bool:
        return self.abs_s > self.lhv_bound + _LHV_MARGIN


@dataclass(frozen=True, eq=False)
class ConditionalDecomposition:
    """P(λ), P(a|λ), P(b|λ) and P(b|a,λ) on a uniform hidden-variable grid.

    `degenerate` marks nodes where P(a|λ) vanishes and the conditional was
    defined as the single-arm marginal instead of 0/0.
    """

    lambdas: np.ndarray
    weights: np.ndarray
    p_a_given_lambda: np.ndarray
    p_b_given_lambda: np.ndarray
    p_b_given_a_lambda: np.ndarray
    degenerate: np.ndarray
    model: SourceModel
    a: float
    b: float


@dataclass(frozen=True)
class FactorizabilityReport:
    factorizable: bool
    max_deviation: float
    argmax_lambda: float


def joint_table(model: SourceModel, a, b) -> JointTable:
    """Four-channel outcome table built from the model's closed-form curve."""
    a = _finite_angle("a", a)
    b = _finite_angle("b", b)
    phi = b - a
    p_same = float(closed_form(model, phi))
    p_cross = float(closed_form(model, phi + HALF_PI))
    return JointTable(p_pp=p_same, p_pm=p_cross, p_mp=p_cross, p_mm=p_same, a=a, b=b)


def correlation_E(table: JointTable) -> float:
    """Dichotomic correlation p(++) + p(−−) − p(+−) − p(−+) for ±1 outcomes."""
    if abs(table.total - 1.0) > _TABLE_SUM_TOL:
        raise DataError(f"joint table is not normalized: entries sum to {table.total!r}")
    return table.p_pp + table.p_mm - table.p_pm - table.p_mp


def chsh_S(model: SourceModel, settings: ChshSettings = CANONICAL_SETTINGS) -> ChshResult:
    """CHSH combination of the four correlations at the given settings."""
    e_ab = correlation_E(joint_table(model, settings.a, settings.b))
    e_ab_prime = correlation_E(joint_table(model, settings.a, settings.b_prime))
    e_a_prime_b = correlation_E(joint_table(model, settings.a_prime, settings.b))
    e_a_prime_b_prime = correlation_E(joint_table(model, settings.a_prime, settings.b_prime))
    s = e_ab - e_ab_prime + e_a_prime_b + e_a_prime_b_prime
    return ChshResult(
        e_ab=e_ab,
        e_ab_prime=e_ab_prime,
        e_a_prime_b=e_a_prime_b,
        e_a_prime_b_prime=e_a_prime_b_prime,
        s_value=s,
        lhv_bound=lhv_max_S(settings),
    )


def deterministic_strategy_scores(settings: ChshSettings = CANONICAL_SETTINGS) -> list[float]:
    """S of all 16 deterministic local strategies (±1 assigned per setting).

    The settings do not enter the arithmetic — a deterministic strategy fixes
    its outcomes regardless of the angles — but they are accepted so callers
    can pair the bound with a concrete CHSH evaluation.
    """
    del settings
    scores = []
    for x_a, x_ap, y_b, y_bp in product((-1.0, 1.0), repeat=4):
        scores.append(x_a * y_b - x_a * y_bp + x_ap * y_b + x_ap * y_bp)
    return scores


def lhv_max_S(settings: ChshSettings = CANONICAL_SETTINGS) -> float:
    """Maximum |S| over deterministic local strategies; exhaustively 2."""
    return max(abs(s) for s in deterministic_strategy_scores(settings))


def decompose_conditional(
    model: SourceModel, a, b, lambda_nodes: int = 360
) -> ConditionalDecomposition:
    """Expand the model's coincidence as P(λ)·P(a|λ)·P(b|a,λ) on a uniform grid."""
    if lambda_nodes < 8:
        raise UsageError(f"decomposition needs at least 8 lambda nodes, got {lambda_nodes}")
    if model.kind is ModelKind.QM_REFERENCE:
        raise ModelError(
            "the QM reference has no per-realization integrand to decompose"
        )
    a = _finite_angle("a", a)
    b = _finite_angle("b", b)

    lambdas = np.arange(lambda_nodes) * (2.0 * math.pi / lambda_nodes)
    weights = np.full(lambda_nodes, 1.0 / lambda_nodes)
    p_a = np.asarray(arm_pass_probability(model, lambdas, a), dtype=float)
    p_b = np.asarray(arm_pass_probability(model, lambdas, b), dtype=float)
    joint = np.asarray(pair_pass_probability(model, lambdas, a, b), dtype=float)

    degenerate = p_a <= DEGENERATE_ARM_FLOOR
    conditional = np.divide(joint, p_a, out=p_b.copy(), where=~degenerate)

    return ConditionalDecomposition(
        lambdas=lambdas,
        weights=weights,
        p_a_given_lambda=p_a,
        p_b_given_lambda=p_b,
        p_b_given_a_lambda=conditional,
        degenerate=degenerate,
        model=model,
        a=a,
        b=b,
    )


def reconstruct_coincidence(decomposition: ConditionalDecomposition) -> float:
    """Σ_λ P(λ)·P(a|λ)·P(b|a,λ); matches the model's closed form on a fine grid."""
    terms = (
        decomposition.weights
        * decomposition.p_a_given_lambda
        * decomposition.p_b_given_a_lambda
    )
    return math.fsum(terms)


def factorizability_check(
    decomposition: ConditionalDecomposition, tol: float
) -> FactorizabilityReport:
    """Largest gap between P(b|a,λ) and P(b|λ) over non-degenerate nodes."""
    live = ~decomposition.degenerate
    if not np.any(live):
        return FactorizabilityReport(factorizable=True, max_deviation=0.0, argmax_lambda=math.nan)
    deviations = np.abs(
        decomposition.p_b_given_a_lambda[live] - decomposition.p_b_given_lambda[live]
    )
    k = int(np.argmax(deviations))
    max_dev = float(deviations[k])
    argmax = float(decomposition.lambdas[live][k])
    return FactorizabilityReport(
        factorizable=max_dev <= tol, max_deviation=max_dev, argmax_lambda=argmax
    )
