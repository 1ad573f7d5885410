"""Jones-vector algebra for the counter-rotating circularly polarized source pair.

The source emits one clockwise and one counterclockwise circularly polarized
classical signal toward detectors A and B.  Both fields are written in
detector A's linear basis (x̂, ŷ); the cos/sin factors project the circular
components onto the polarizer axes and the fixed quarter-turn phases between
orthogonal components set the handedness.  Plane-wave propagation factors are
dropped throughout.

All functions accept plain-float angles or numpy arrays of angles and
broadcast elementwise.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError

# Phase offsets between the x̂ and ŷ amplitudes of the two circular fields.
PHASE_A = cmath.exp(1j * math.pi / 4)
PHASE_B = cmath.exp(3j * math.pi / 4)


@dataclass(frozen=True)
class JonesVector:
    """Two complex transverse amplitudes (along x̂ and ŷ)."""

    x: complex | np.ndarray
    y: complex | np.ndarray


def _finite_angle(name: str, value):
    """Validate that an angle (scalar or array) is finite; return it as float(s)."""
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return arr if arr.ndim else float(arr)


def source_field_a(theta):
    """Field at detector A: x̂·cos(θ) + e^{iπ/4}·ŷ·sin(θ). Unit intensity for all θ."""
    theta = _finite_angle("theta", theta)
    return JonesVector(x=np.cos(theta) + 0j, y=PHASE_A * np.sin(theta))


def source_field_b(theta, phi):
    """Field at detector B (oriented at φ relative to A), in A's coordinates.

    ŷ·cos(θ−φ) − e^{i3π/4}·x̂·sin(θ−φ).  Depends on θ and φ only through θ−φ;
    unit intensity for all angles.
    """
    theta = _finite_angle("theta", theta)
    phi = _finite_angle("phi", phi)
    delta = theta - phi
    return JonesVector(x=-PHASE_B * np.sin(delta), y=np.cos(delta) + 0j)


def bilinear_dot(u: JonesVector, v: JonesVector):
    """Plain (unconjugated) dot product u·v = u_x·v_x + u_y·v_y."""
    return u.x * v.x + u.y * v.y


def hermitian_dot(u: JonesVector, v: JonesVector):
    """Conjugated inner product ⟨u,v⟩ = u_x*·v_x + u_y*·v_y."""
    return np.conjugate(u.x) * v.x + np.conjugate(u.y) * v.y


def intensity(v: JonesVector):
    """Field intensity |v_x|² + |v_y|² (square-law detector response)."""
    return (np.abs(v.x) ** 2 + np.abs(v.y) ** 2).real
