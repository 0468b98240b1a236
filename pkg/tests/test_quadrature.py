import cmath
import math

import mpmath as mp
import numpy as np
import pytest

from adsstar.errors import DomainError, InvalidConfigError
from adsstar.quadrature import (ContourSpec, QuadratureSpec, composite_gauss_legendre, filon_linear,
                                filon_weights, integrate_adaptive, integrate_hankel_loop,
                                mollified_delta_test, neville_zero, regularized_limit)


def test_spec_validation():
    with pytest.raises(InvalidConfigError):
        QuadratureSpec(abs_tol=0)
    with pytest.raises(InvalidConfigError):
        QuadratureSpec(eps_schedule=(0.1, 0.2, 0.05))
    with pytest.raises(InvalidConfigError):
        QuadratureSpec(oscillation_mode="levin")
    with pytest.raises(InvalidConfigError):
        ContourSpec(ray_angle=2.0)


def test_gauss_legendre_polynomial_exact():
    x, w = composite_gauss_legendre(-1.0, 2.0, 3)
    assert abs(w @ x ** 7 - (2 ** 8 - 1) / 8) < 1e-12


def test_adaptive_known_integrals():
    v, e = integrate_adaptive(lambda x: np.exp(-x * x), -10.0, 10.0)
    assert abs(v - math.sqrt(math.pi)) < 1e-12
    v, _ = integrate_adaptive(lambda x: 1 / (1 + x * x), 0.0, np.inf)
    assert abs(v - math.pi / 2) < 1e-9
    v, _ = integrate_adaptive(lambda x: np.sqrt(x), 0.0, 1.0)
    assert abs(v - 2 / 3) < 1e-10


def test_filon_linear_phase():
    x0, h, n = 0.0, 0.05, 41
    xs = x0 + h * np.arange(n)
    for omega in (0.0, 3.0, 40.0):
        g = xs ** 2 + 1
        ref = complex(mp.quad(lambda t: (t ** 2 + 1) * mp.exp(1j * omega * t), [0, 2]))
        assert abs(filon_linear(g, x0, h, omega) - ref) < 1e-10 * max(1, abs(ref))
    with pytest.raises(InvalidConfigError):
        filon_weights(0.0, 0.1, 10, 1.0)


def test_hankel_loop_is_bessel_i_with_phase():
    # loop(-1 - nu, c) = -2 pi i e^{i pi nu} I_nu(2c)
    for nu, c in [(0, 0.25), (0.5, 0.7), (1j, 0.4), (2 - 1j, 1.1)]:
        ref = complex(-2j * mp.pi * mp.exp(1j * mp.pi * nu) * mp.besseli(nu, 2 * c))
        got = integrate_hankel_loop(-1 - nu, c)
        assert abs(got - ref) < 1e-9 * abs(ref)


def test_hankel_loop_domain():
    with pytest.raises(DomainError):
        integrate_hankel_loop(-1, -0.5)


def test_neville_and_regularized_limit():
    f = lambda e: 2.0 + 3 * e - e * e
    ext = neville_zero([0.2, 0.1, 0.05], [f(0.2), f(0.1), f(0.05)])
    assert abs(ext[-1] - 2.0) < 1e-13
    v, err = regularized_limit(lambda e: cmath.exp(e) + 1j)
    assert abs(v - (1 + 1j)) < 2e-6 and abs(v - (1 + 1j)) < 10 * err


def test_mollified_delta_test_identity_kernel():
    # a narrow normalized Gaussian kernel reproduces the test function
    w = 0.01
    kern = lambda q, qp: np.exp(-((q - qp) / w) ** 2) / (w * math.sqrt(math.pi))
    _, err = mollified_delta_test(kern, lambda q, qp: 1.0 + 0 * q, lambda q: np.exp(-4 * (q - 2) ** 2),
                                  (1.0, 3.0), n=101, nodes=composite_gauss_legendre(0.4, 3.6, 200))
    assert err < 1e-3
