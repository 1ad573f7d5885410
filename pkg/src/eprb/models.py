"""Source/coincidence models: factorized Furry, circular-field HBT, and QM reference.

Each model is exposed two ways:

* a per-realization integrand in the shared hidden polarization angle θ
  (uniform on [0, 2π)), suitable for quadrature or Monte Carlo averaging, and
* the closed-form coincidence curve P(φ) in the polarizer offset φ = b − a.

The Furry model draws a shared random linear polarization and multiplies
independent Malus-law detection probabilities.  The HBT model keeps the field
phases and forms a second-order-coherence coincidence ratio from the circular
fields in :mod:`eprb.fields`; its integrand is the squared cross
(determinant-like) combination of the projection amplitudes, which collapses
to sin²(φ) for every θ.  The QM reference is a closed-form curve only.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .exceptions import ModelError, UsageError
from .fields import (
    _finite_angle,
    bilinear_dot,
    hermitian_dot,
    intensity,
    source_field_a,
    source_field_b,
)


class ModelKind(Enum):
    FURRY_LINEAR = "furry"
    CIRCULAR_HBT = "hbt"
    QM_REFERENCE = "qm"


class ChannelConvention(Enum):
    """Which detector-channel pairing the reported coincidence refers to.

    ORTHOGONAL_PASS: coincidences between orthogonal-pass channels, sin²(φ)/2.
    PARALLEL_PASS:   coincidences between parallel-pass channels, cos²(φ)/2.
    The two curves are related by φ → φ + π/2.
    """

    ORTHOGONAL_PASS = "orthogonal"
    PARALLEL_PASS = "parallel"


class ContractionMode(Enum):
    """How the coherence-ratio numerator contracts the two fields.

    CROSS_AMPLITUDE is the normative mode: the squared real cross combination
    cos(θ)sin(θ−φ) − sin(θ)cos(θ−φ) of the projection amplitudes.  The two
    complex-magnitude modes contract the full Jones vectors instead; with the
    fixed circular phases neither reduces to the cross-amplitude form, so they
    are kept as explicit, separately selectable variants.
    """

    CROSS_AMPLITUDE = "cross"
    BILINEAR_MAGNITUDE = "bilinear"
    HERMITIAN_MAGNITUDE = "hermitian"


@dataclass(frozen=True)
class SourceModel:
    """A model kind plus the channel convention of its reported curve."""

    kind: ModelKind
    convention: ChannelConvention = ChannelConvention.ORTHOGONAL_PASS

    def closed_form(self, phi):
        return closed_form(self, phi)


FURRY = SourceModel(ModelKind.FURRY_LINEAR)
HBT = SourceModel(ModelKind.CIRCULAR_HBT)
QM = SourceModel(ModelKind.QM_REFERENCE)


def furry_integrand(theta, phi):
    """Per-realization coincidence of the factorized model: cos²(θ)·cos²(θ−φ)."""
    theta = _finite_angle("theta", theta)
    phi = _finite_angle("phi", phi)
    return np.cos(theta) ** 2 * np.cos(theta - phi) ** 2


def furry_closed_form(phi):
    """θ-average of the factorized integrand: 1/4 + cos(2φ)/8, minimum 1/8."""
    phi = _finite_angle("phi", phi)
    return 0.25 + np.cos(2.0 * phi) / 8.0


def hbt_integrand(theta, phi):
    """Coherence numerator in cross-amplitude form:
    (cos(θ)sin(θ−φ) − sin(θ)cos(θ−φ))².

    Analytically equal to sin²(φ) for every θ; the subtraction is kept
    explicit rather than simplified so the identity stays testable.
    """
    theta = _finite_angle("theta", theta)
    phi = _finite_angle("phi", phi)
    return (np.cos(theta) * np.sin(theta - phi) - np.sin(theta) * np.cos(theta - phi)) ** 2


def hbt_closed_form(phi):
    """Coherence-ratio coincidence curve: sin²(φ)/2; zero at parallel polarizers."""
    phi = _finite_angle("phi", phi)
    return 0.5 * np.sin(phi) ** 2


def qm_reference(phi, convention: ChannelConvention = ChannelConvention.ORTHOGONAL_PASS):
    """Quantum-mechanical reference curve under the given channel convention."""
    phi = _finite_angle("phi", phi)
    if convention is ChannelConvention.ORTHOGONAL_PASS:
        return 0.5 * np.sin(phi) ** 2
    if convention is ChannelConvention.PARALLEL_PASS:
        return 0.5 * np.cos(phi) ** 2
    raise UsageError(f"unknown channel convention: {convention!r}")


def coherence_numerator(theta, phi, mode: ContractionMode = ContractionMode.CROSS_AMPLITUDE):
    """Numerator of the coincidence ratio for one realization θ.

    CROSS_AMPLITUDE reproduces :func:`hbt_integrand`; the magnitude modes
    contract the complex fields E_A·E_B (plain or conjugated) and square.
    """
    if mode is ContractionMode.CROSS_AMPLITUDE:
        return hbt_integrand(theta, phi)
    theta = _finite_angle("theta", theta)
    phi = _finite_angle("phi", phi)
    e_a = source_field_a(theta)
    e_b = source_field_b(theta, phi)
    if mode is ContractionMode.BILINEAR_MAGNITUDE:
        return np.abs(bilinear_dot(e_a, e_b)) ** 2
    if mode is ContractionMode.HERMITIAN_MAGNITUDE:
        return np.abs(hermitian_dot(e_a, e_b)) ** 2
    raise UsageError(f"unknown contraction mode: {mode!r}")


def coherence_denominator(theta, phi):
    """Total intensity at both detectors, |E_A|² + |E_B|²; identically 2."""
    theta = _finite_angle("theta", theta)
    phi = _finite_angle("phi", phi)
    return intensity(source_field_a(theta)) + intensity(source_field_b(theta, phi))


def closed_form(model: SourceModel, phi):
    """Closed-form coincidence curve P(φ) for any model kind.

    The Furry and HBT curves are fixed by their constructions (parallel-pass
    product and orthogonal-pass coherence ratio respectively); the channel
    convention selects between the two QM reference variants.
    """
    if model.kind is ModelKind.FURRY_LINEAR:
        return furry_closed_form(phi)
    if model.kind is ModelKind.CIRCULAR_HBT:
        return hbt_closed_form(phi)
    if model.kind is ModelKind.QM_REFERENCE:
        return qm_reference(phi, model.convention)
    raise ModelError(f"unknown model kind: {model.kind!r}")


def arm_pass_probability(model: SourceModel, theta, setting):
    """Per-realization probability that the signal passes one arm's polarizer.

    Furry: Malus law cos²(θ − setting).  HBT: each detector sees half of the
    total (unit-per-arm) intensity regardless of θ, so the single-arm rate is
    the constant 1/2.
    """
    theta = _finite_angle("theta", theta)
    setting = _finite_angle("setting", setting)
    if model.kind is ModelKind.FURRY_LINEAR:
        return np.cos(theta - setting) ** 2
    if model.kind is ModelKind.CIRCULAR_HBT:
        return np.full(np.shape(theta), 0.5) if np.ndim(theta) else 0.5
    raise ModelError(
        f"{model.kind.value} model has no per-realization single-arm law"
    )


def pair_pass_probability(model: SourceModel, theta, a, b):
    """Per-realization joint pass probability at settings (a, b).

    Furry: product of the independent arm probabilities.  HBT: the
    cross-amplitude numerator normalized by the constant total intensity 2.
    The QM reference has no per-realization form.
    """
    theta = _finite_angle("theta", theta)
    a = _finite_angle("a", a)
    b = _finite_angle("b", b)
    if model.kind is ModelKind.FURRY_LINEAR:
        return np.cos(theta - a) ** 2 * np.cos(theta - b) ** 2
    if model.kind is ModelKind.CIRCULAR_HBT:
        return hbt_integrand(theta, b - a) / 2.0
    raise ModelError(
        f"{model.kind.value} model has no per-realization coincidence integrand"
    )
