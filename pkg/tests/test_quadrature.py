"""Tests for the adaptive Gauss-Legendre integrator."""

import math

import numpy as np
import pytest

from qslora.quadrature import QuadratureError, integrate


class TestIntegrate:
    def test_polynomial_is_exact(self):
        # degree 7 is integrated exactly by the 10-node rule
        val = integrate(lambda t: 7 * t**6, 0.0, 1.0)
        assert abs(val - 1.0) < 1e-14

    def test_oscillatory_integrand(self):
        val = integrate(np.sin, 0.0, math.pi)
        assert abs(val - 2.0) < 1e-12

    def test_complex_integrand(self):
        val = integrate(lambda t: np.exp(1j * t), 0.0, math.pi / 2)
        assert abs(val - (1.0 + 1j)) < 1e-12

    def test_zero_width_interval(self):
        assert integrate(np.cos, 1.3, 1.3) == 0.0

    def test_reversed_interval_rejected(self):
        with pytest.raises(ValueError):
            integrate(np.cos, 1.0, 0.0)

    def test_additivity_over_split(self):
        f = lambda t: np.exp(-t) * np.cos(10 * t)
        whole = integrate(f, 0.0, 2.0)
        parts = integrate(f, 0.0, 0.73) + integrate(f, 0.73, 2.0)
        assert abs(whole - parts) < 1e-12

    def test_narrow_feature_resolved_by_subdivision(self):
        # a sharp Gaussian bump that the top-level panel cannot resolve
        f = lambda t: np.exp(-((t - 0.5) ** 2) / 1e-4)
        val = integrate(f, 0.0, 1.0, tol=1e-12)
        assert abs(val - math.sqrt(math.pi) * 1e-2) < 1e-10

    def test_nonconvergence_raises(self):
        # thousands of oscillations per panel keep the 10- and 20-node
        # estimates in disagreement at every allowed depth
        f = lambda t: np.cos(5e4 * t)
        with pytest.raises(QuadratureError):
            integrate(f, 0.0, 1.0, tol=1e-14, max_depth=3)

    def test_real_input_returns_real(self):
        val = integrate(lambda t: t * 0 + 1.0, 0.0, 3.0)
        assert isinstance(val, float)
        assert val == pytest.approx(3.0, abs=1e-13)
