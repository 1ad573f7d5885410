import math

import numpy as np
import pytest
from pytest import approx

from eprb.exceptions import DomainError
from eprb.fields import (
    JonesVector,
    bilinear_dot,
    hermitian_dot,
    intensity,
    source_field_a,
    source_field_b,
)

HALF_SQRT2 = math.sqrt(2.0) / 2.0


def random_vector(rng):
    re = rng.uniform(-2, 2, 4)
    return JonesVector(x=complex(re[0], re[1]), y=complex(re[2], re[3]))


class TestSourceFieldA:
    def test_theta_zero(self):
        v = source_field_a(0.0)
        assert v.x == 1.0 + 0.0j
        assert v.y == 0.0 + 0.0j

    def test_theta_half_pi(self):
        # sin(pi/2) = 1, so the y amplitude is the bare quarter-turn phase
        v = source_field_a(math.pi / 2)
        assert abs(v.x) < 1e-15
        assert v.y.real == approx(HALF_SQRT2, abs=1e-15)
        assert v.y.imag == approx(HALF_SQRT2, abs=1e-15)

    @pytest.mark.parametrize("theta", [0.1, 1.7, 5.0])
    def test_unit_intensity(self, theta):
        assert intensity(source_field_a(theta)) == approx(1.0, abs=1e-14)

    def test_unit_intensity_random(self):
        rng = np.random.default_rng(11)
        for theta in rng.uniform(-10, 10, 200):
            assert intensity(source_field_a(theta)) == approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
    def test_rejects_non_finite(self, bad):
        with pytest.raises(DomainError):
            source_field_a(bad)

    def test_accepts_arrays(self):
        thetas = np.linspace(0, 2 * math.pi, 17)
        v = source_field_a(thetas)
        assert v.x.shape == thetas.shape
        assert intensity(v) == approx(np.ones(17), abs=1e-14)


class TestSourceFieldB:
    def test_theta_equals_phi(self):
        v = source_field_b(0.7, 0.7)
        assert abs(v.x) < 1e-15
        assert v.y == 1.0 + 0.0j

    def test_quarter_turn_offset(self):
        # x amplitude is -sin(-pi/2) * e^{i3pi/4} = e^{i3pi/4} = (-1 + i)/sqrt(2)
        v = source_field_b(0.0, math.pi / 2)
        assert v.x.real == approx(-HALF_SQRT2, abs=1e-15)
        assert v.x.imag == approx(HALF_SQRT2, abs=1e-15)
        assert abs(v.y) < 1e-15

    @pytest.mark.parametrize("theta, phi", [(0.3, 0.9), (2.0, 4.0), (5.5, 1.1)])
    def test_unit_intensity(self, theta, phi):
        assert intensity(source_field_b(theta, phi)) == approx(1.0, abs=1e-14)

    def test_depends_only_on_difference(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            theta, phi, delta = rng.uniform(-6, 6, 3)
            u = source_field_b(theta, phi)
            v = source_field_b(theta + delta, phi + delta)
            assert v.x == approx(u.x, abs=1e-14)
            assert v.y == approx(u.y, abs=1e-14)

    @pytest.mark.parametrize("bad", [math.nan, math.inf])
    def test_rejects_non_finite(self, bad):
        with pytest.raises(DomainError):
            source_field_b(bad, 0.0)
        with pytest.raises(DomainError):
            source_field_b(0.0, bad)


class TestDotProducts:
    def test_unit_x_with_itself(self):
        u = JonesVector(1.0 + 0.0j, 0.0j)
        assert bilinear_dot(u, u) == 1.0 + 0.0j

    def test_orthogonal_components(self):
        u = JonesVector(1.0 + 0.0j, 0.0j)
        v = JonesVector(0.0j, 1.0 + 0.0j)
        assert bilinear_dot(u, v) == 0.0 + 0.0j

    def test_bilinear_is_symmetric(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            u, v = random_vector(rng), random_vector(rng)
            assert bilinear_dot(u, v) == approx(bilinear_dot(v, u), abs=1e-14)

    def test_hermitian_self_is_intensity(self):
        rng = np.random.default_rng(14)
        for _ in range(50):
            u = random_vector(rng)
            d = hermitian_dot(u, u)
            assert d.imag == approx(0.0, abs=1e-14)
            assert d.real == approx(intensity(u), abs=1e-14)

    def test_hermitian_unit_imaginary(self):
        u = JonesVector(1.0j, 0.0j)
        assert hermitian_dot(u, u) == 1.0 + 0.0j

    def test_hermitian_conjugate_symmetry(self):
        rng = np.random.default_rng(15)
        for _ in range(50):
            u, v = random_vector(rng), random_vector(rng)
            assert hermitian_dot(u, v) == approx(hermitian_dot(v, u).conjugate(), abs=1e-14)


class TestIntensity:
    @pytest.mark.parametrize(
        "vec, expected",
        [
            (JonesVector(1.0 + 0.0j, 0.0j), 1.0),
            (JonesVector(0.0j, 0.0j), 0.0),
            (JonesVector(3.0 + 4.0j, 0.0j), 25.0),
        ],
    )
    def test_examples(self, vec, expected):
        assert intensity(vec) == expected

    def test_global_phase_invariance(self):
        rng = np.random.default_rng(16)
        for _ in range(50):
            u = random_vector(rng)
            phase = complex(math.cos(a := rng.uniform(0, 2 * math.pi)), math.sin(a))
            rotated = JonesVector(phase * u.x, phase * u.y)
            assert intensity(rotated) == approx(intensity(u), abs=1e-13)
