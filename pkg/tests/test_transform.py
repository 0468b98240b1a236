import math

import numpy as np
import pytest

from adsstar.errors import AliasingError, ChartMismatchError
from adsstar.grid import linspace_grid
from adsstar.params import DeformParams
from adsstar.starprod import scalar_product
from adsstar.transform import hat_forward, hat_inverse, t01_apply, t01_polynomial

P = DeformParams(0.7, 1.3)


def _gauss(chart="phi", n=81, ny=128):
    return linspace_grid(chart, lambda A, L: np.exp(-A ** 2 - L ** 2 / 2 + 0.3j * L),
                         (-4, 4), n, (-12, 12), ny)


@pytest.mark.parametrize("chart", ["phi", "psi"])
def test_hat_forward_gaussian_closed_form(chart):
    f = _gauss(chart)
    k = hat_forward(f, P)
    w = P.frequency(chart)
    X, Y = k.mesh()
    ref = np.exp(-((X + Y) / 2) ** 2) * math.sqrt(2 * math.pi) * np.exp(-(w * (X - Y) - 0.3) ** 2 / 2)
    assert np.abs(k.values - ref).max() < 1e-10


def test_hat_round_trip_interior():
    # the inverse is periodic in l with period pi/(h w); with 161 points it is ~17
    f = _gauss(n=161)
    back = hat_inverse(hat_forward(f, P), P)
    assert back.meta["l_period"] > 16
    A, L = back.mesh()
    inner = (np.abs(A) < 2) & (np.abs(L) < 6)
    assert np.abs(back.values - f.values)[inner].max() < 1e-9


def test_hat_isometry():
    f1 = _gauss()
    f2 = linspace_grid("phi", lambda A, L: np.exp(-(A - 0.4) ** 2 / 1.5 - (L + 0.5) ** 2 / 3),
                       (-4, 4), 81, (-12, 12), 128)
    pos = scalar_product(f1, f2, P, rep="position")
    hat = scalar_product(hat_forward(f1, P), hat_forward(f2, P), P, rep="hat")
    assert abs(pos - hat) < 1e-8 * abs(pos)


def test_hat_aliasing_and_charts():
    with pytest.raises(AliasingError):
        hat_forward(_gauss(ny=24), P)
    slow = linspace_grid("phi", lambda A, L: np.exp(-A ** 2) + 0 * L, (-4, 4), 81, (-12, 12), 128)
    with pytest.raises(AliasingError):
        hat_forward(slow, P)
    with pytest.raises(ChartMismatchError):
        hat_inverse(_gauss(), P)


def test_t01_round_trip_and_unitarity():
    f = linspace_grid("phi", lambda A, L: np.exp(-A ** 2 - L ** 2 / 4 + 0.5j * L), (-3, 3), 13, (-20, 20), 256)
    g = t01_apply(f, P)
    assert g.meta["t01_truncation"] < 1e-20
    n0 = np.sum(np.abs(f.values) ** 2)
    assert abs(np.sum(np.abs(g.values) ** 2) / n0 - 1) < 1e-8
    back = t01_apply(g, P, direction="inverse")
    assert np.abs(back.values - f.values).max() < 1e-8
    with pytest.raises(ValueError):
        t01_apply(f, P, direction="sideways")


def test_t01_polynomial_linear_and_inverse():
    # T01 l = l and T01 1 = 1: the expansion of cosh^{1/2} e^{i sinh(cp) l/c} starts 1 + i p l
    c = P.theta / P.kappa
    img = t01_polynomial([0.0, 1.0], P)
    assert np.allclose(img[:2], [0, 1], atol=1e-12)
    # l^2 = -d^2/dp^2 at p = 0; the amplitude cosh(cp)^{1/2} adds c^2/2 to the second derivative
    img2 = t01_polynomial([0.0, 0.0, 1.0], P)
    assert np.allclose(img2, [-c * c / 2, 0, 1], atol=1e-10)
    coeffs = [0.3, -1.2, 0.5, 0.7]
    back = t01_polynomial(t01_polynomial(coeffs, P), P, direction="inverse")
    assert np.allclose(back, coeffs, atol=1e-9)
