"""Ensemble averaging over the hidden polarization angle θ.

Two averaging routes are provided:

* :func:`quadrature_average` — equal-weight samples at θ_k = 2πk/N.  On a
  full period this periodic trapezoid rule is spectrally exact, so for the
  degree-≤4 trigonometric integrands used here N = 64 already reproduces the
  closed forms to machine precision.
* :func:`mc_average` — uniform θ ~ [0, 2π) draws from a counter-based
  generator (Philox), reproducible bitwise for a fixed (seed, samples) pair.

Determinism contract
--------------------
Monte Carlo work may be split into chunks and the chunks evaluated in any
order or in parallel, yet the result is bitwise identical to sequential
execution:

* chunk offsets are aligned to the generator's 4-word counter blocks, so the
  θ stream of chunk k is the same slice of the global stream no matter how
  the work is partitioned (``DEFAULT_CHUNK_SIZE`` is block-aligned), and
* all reductions use ``math.fsum``, which returns the exactly rounded sum of
  its inputs and is therefore independent of both summation order and chunk
  boundaries.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .exceptions import (
    ConsistencyError,
    EvaluationError,
    ModelError,
    UsageError,
)
from .models import (
    ContractionMode,
    ModelKind,
    SourceModel,
    closed_form,
    coherence_denominator,
    coherence_numerator,
    furry_integrand,
)

TWO_PI = 2.0 * math.pi

# Multiple of 4: Philox emits 4 uint64 words per counter increment, and
# bitgenerator.advance() steps whole counter blocks.
DEFAULT_CHUNK_SIZE = 1 << 16

# The coherence denominator is analytically 2; anything near zero means the
# field construction itself is broken.
_DENOMINATOR_FLOOR = 1e-9


class Method(Enum):
    CLOSED_FORM = "closed-form"
    QUADRATURE = "quadrature"
    MONTE_CARLO = "mc"


@dataclass(frozen=True)
class ClosedForm:
    """Estimator spec: evaluate the model's closed-form curve directly."""


@dataclass(frozen=True)
class QuadratureConfig:
    """Equal-weight periodic rule with `nodes` samples on [0, 2π)."""

    nodes: int = 64

    def __post_init__(self):
        if self.nodes < 8:
            raise UsageError(f"quadrature needs at least 8 nodes, got {self.nodes}")


@dataclass(frozen=True)
class MonteCarloConfig:
    """Seeded uniform sampling; (samples, seed) fixes the estimate bitwise."""

    samples: int
    seed: int

    def __post_init__(self):
        if self.samples < 2:
            raise UsageError(
                f"Monte Carlo needs at least 2 samples for a standard error, got {self.samples}"
            )
        if not 0 <= int(self.seed) < 2**64:
            raise UsageError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


EstimatorSpec = ClosedForm | QuadratureConfig | MonteCarloConfig


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_error: float
    method: Method


@dataclass(frozen=True, eq=False)
class CoincidenceCurve:
    """A coincidence curve P(φ) sampled on a strictly increasing angle grid."""

    phi: np.ndarray
    estimates: tuple[Estimate, ...]
    model: SourceModel
    spec: EstimatorSpec
    contraction: ContractionMode

    def __post_init__(self):
        if len(self.phi) != len(self.estimates):
            raise UsageError("phi grid and estimates must have equal length")

    @property
    def means(self) -> np.ndarray:
        return np.array([e.mean for e in self.estimates])

    @property
    def std_errors(self) -> np.ndarray:
        return np.array([e.std_error for e in self.estimates])


def _evaluate(f, thetas: np.ndarray) -> np.ndarray:
    """Evaluate f on an angle array, broadcasting scalar-valued integrands."""
    values = np.asarray(f(thetas), dtype=float)
    if values.shape != thetas.shape:
        values = np.broadcast_to(values, thetas.shape)
    bad = ~np.isfinite(values)
    if np.any(bad):
        theta_bad = thetas[bad][0]
        raise EvaluationError(f"integrand returned a non-finite value at theta={theta_bad!r}")
    return values


def quadrature_nodes(n: int) -> np.ndarray:
    """The equal-weight sample points θ_k = 2πk/N, k = 0..N−1."""
    return np.arange(n) * (TWO_PI / n)


def quadrature_average(f, config: QuadratureConfig = QuadratureConfig()) -> float:
    """Equal-weight mean of f over one period; exact for low-degree trig polynomials."""
    thetas = quadrature_nodes(config.nodes)
    values = _evaluate(f, thetas)
    return math.fsum(values) / config.nodes


def sample_thetas(seed: int, start: int, count: int) -> np.ndarray:
    """Samples [start, start+count) of the uniform θ stream keyed by `seed`.

    `start` must be a multiple of 4 so the counter can be advanced in whole
    Philox blocks; arbitrary sample counts are fine.
    """
    if start % 4 != 0:
        raise UsageError(f"stream offset must be a multiple of 4, got {start}")
    bitgen = np.random.Philox(key=int(seed))
    if start:
        bitgen = bitgen.advance(start // 4)
    return np.random.Generator(bitgen).uniform(0.0, TWO_PI, count)


def mc_average(f, config: MonteCarloConfig, chunk_size: int | None = None) -> Estimate:
    """Monte Carlo mean and standard error of f over uniform θ draws.

    The standard error uses the unbiased sample variance (divisor n−1).
    Evaluation proceeds chunk by chunk; because the θ stream is counter-based
    and both reduction passes use exactly rounded sums, the returned estimate
    is bitwise independent of `chunk_size`.
    """
    if chunk_size is None:
        chunk_size = DEFAULT_CHUNK_SIZE
    if chunk_size < 4 or chunk_size % 4 != 0:
        raise UsageError(f"chunk_size must be a positive multiple of 4, got {chunk_size}")

    n = config.samples
    chunks = []
    for start in range(0, n, chunk_size):
        count = min(chunk_size, n - start)
        thetas = sample_thetas(config.seed, start, count)
        chunks.append(_evaluate(f, thetas))
    values = np.concatenate(chunks)

    mean = math.fsum(values) / n
    variance = math.fsum((values - mean) ** 2) / (n - 1)
    std_error = math.sqrt(variance / n)
    return Estimate(mean=mean, std_error=std_error, method=Method.MONTE_CARLO)


def average(f, spec: EstimatorSpec, chunk_size: int | None = None) -> Estimate:
    """Average f over θ with the given estimator spec."""
    if isinstance(spec, QuadratureConfig):
        return Estimate(mean=quadrature_average(f, spec), std_error=0.0, method=Method.QUADRATURE)
    if isinstance(spec, MonteCarloConfig):
        return mc_average(f, spec, chunk_size=chunk_size)
    raise UsageError(f"cannot average an integrand with spec {spec!r}")


def factorized_coincidence(model: SourceModel, phi, spec: EstimatorSpec) -> Estimate:
    """Coincidence probability as the average of a product of single-arm intensities.

    Only the Furry model factorizes: its two Malus-law detections are
    statistically independent given θ, so the joint probability is their
    product.  Requesting any other model is an error rather than an
    approximation.
    """
    if model.kind is not ModelKind.FURRY_LINEAR:
        raise ModelError(
            "the factorized coincidence presumes statistically independent "
            "single-arm detections, which only the Furry model satisfies; "
            f"got {model.kind.value}"
        )
    if isinstance(spec, ClosedForm):
        return Estimate(mean=float(closed_form(model, phi)), std_error=0.0, method=Method.CLOSED_FORM)
    return average(lambda theta: furry_integrand(theta, phi), spec)


def coherence_coincidence(
    model: SourceModel,
    phi,
    spec: EstimatorSpec,
    mode: ContractionMode = ContractionMode.CROSS_AMPLITUDE,
    chunk_size: int | None = None,
) -> Estimate:
    """Coincidence probability as the ratio ⟨numerator⟩ / ⟨|E_A|² + |E_B|²⟩.

    Numerator and denominator are averaged with the same spec (and hence the
    same θ draws for Monte Carlo).  The denominator is constant (2) per
    realization, so the ratio's standard error is the numerator's divided by
    the denominator mean.
    """
    if model.kind is not ModelKind.CIRCULAR_HBT:
        raise ModelError(
            f"the coherence-ratio coincidence is defined for the HBT model, got {model.kind.value}"
        )
    if isinstance(spec, ClosedForm):
        if mode is not ContractionMode.CROSS_AMPLITUDE:
            raise UsageError(
                f"no closed form for contraction mode {mode.value}; use quadrature or mc"
            )
        return Estimate(mean=float(closed_form(model, phi)), std_error=0.0, method=Method.CLOSED_FORM)

    numerator = average(lambda theta: coherence_numerator(theta, phi, mode), spec, chunk_size)
    denominator = average(lambda theta: coherence_denominator(theta, phi), spec, chunk_size)
    if denominator.mean < _DENOMINATOR_FLOOR:
        raise ConsistencyError(
            f"coherence denominator collapsed to {denominator.mean!r}; "
            "the source fields should have total intensity 2"
        )
    return Estimate(
        mean=numerator.mean / denominator.mean,
        std_error=numerator.std_error / denominator.mean,
        method=numerator.method,
    )


def derive_seed(seed: int, index: int) -> int:
    """A 64-bit stream seed that is a pure function of (seed, index).

    Used to give every grid point its own independent Monte Carlo stream
    while keeping the whole scan reproducible from one top-level seed.
    """
    payload = f"{int(seed)}:{int(index)}".encode("utf-8")
    return int.from_bytes(hashlib.sha256(payload).digest()[:8], "little")


def scan_curve(
    model: SourceModel,
    phi_grid,
    spec: EstimatorSpec,
    mode: ContractionMode = ContractionMode.CROSS_AMPLITUDE,
    chunk_size: int | None = None,
) -> CoincidenceCurve:
    """Estimate the coincidence curve at every angle of a strictly increasing grid."""
    grid = np.atleast_1d(np.asarray(phi_grid, dtype=float))
    if grid.size == 0:
        raise UsageError("phi grid must not be empty")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise UsageError("phi grid must be strictly increasing")
    if not np.all(np.isfinite(grid)):
        raise UsageError("phi grid must be finite")

    estimates = []
    for k, phi in enumerate(grid):
        point_spec = spec
        if isinstance(spec, MonteCarloConfig):
            point_spec = MonteCarloConfig(samples=spec.samples, seed=derive_seed(spec.seed, k))
        if model.kind is ModelKind.FURRY_LINEAR:
            est = factorized_coincidence(model, phi, point_spec)
        elif model.kind is ModelKind.CIRCULAR_HBT:
            est = coherence_coincidence(model, phi, point_spec, mode, chunk_size)
        elif isinstance(spec, ClosedForm):
            est = Estimate(mean=float(closed_form(model, phi)), std_error=0.0, method=Method.CLOSED_FORM)
        else:
            raise ModelError(
                "the QM reference has no per-realization integrand; "
                "only the closed-form estimator applies"
            )
        estimates.append(est)
    return CoincidenceCurve(
        phi=grid, estimates=tuple(estimates), model=model, spec=spec, contraction=mode
    )
