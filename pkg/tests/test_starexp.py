import numpy as np
import pytest

from adsstar import checks
from adsstar.errors import DomainError, GridMismatchError, PoleError
from adsstar.geometry import GroupElement
from adsstar.grid import line_function
from adsstar.params import DeformParams
from adsstar.starexp import (SubstitutionOperator, coord_hat_factor, group_starexp_kernel,
                             half_cell_line, ode_residual, principal_series_apply, starexp_affine,
                             starexp_E, starexp_F_bessel, starexp_H)

P = DeformParams(0.7, 1.3)
CFG = checks.CheckConfig(theta=0.7, kappa=1.3)


def test_affine_reduces_to_h_and_e():
    grid = dict(alim=(-2, 2), llim=(-3, 3), n=33)
    assert np.allclose(starexp_affine(0.4, 1.0, 0.0, P, **grid).values, starexp_H(0.4, P, **grid).values)
    assert np.allclose(starexp_affine(0.4, 0.0, 1.0, P, **grid).values, starexp_E(0.4, P, **grid).values)


def test_affine_small_alpha_is_continuous():
    grid = dict(alim=(-1, 1), llim=(-1, 1), n=9)
    a = starexp_affine(0.5, 1e-9, 0.8, P, **grid).values
    b = starexp_affine(0.5, 1e-3, 0.8, P, **grid).values
    assert np.abs(a - b).max() < 1e-2


@pytest.mark.parametrize("theta,kappa", [(1.0, 1.0), (0.7, 1.3), (1.5, 0.8), (0.5, 2.0)])
@pytest.mark.parametrize("check", [checks.starexp_ode_h, checks.starexp_ode_e, checks.starexp_ode_coord,
                                   checks.starexp_bch_windowed])
def test_closed_forms_solve_the_ode(check, theta, kappa):
    err, _ = check(checks.CheckConfig(theta=theta, kappa=kappa))
    assert err < 1e-4


def test_ode_residual_rejects_wrong_candidate():
    # the H closed form at the wrong rate does not solve the equation
    grid = dict(alim=(-2.5, 2.5), llim=(-30, 30), n=(161, 256))
    times = (0.5 - 2e-4, 0.5, 0.5 + 2e-4)
    wrong = [starexp_H(1.5 * s, P, **grid) for s in times]
    assert ode_residual(wrong, times, "H", P, edge=3.0) > 0.1


def test_ode_residual_validation():
    u = starexp_H(0.1, P, alim=(-3, 3), llim=(-30, 30), n=(33, 64))
    with pytest.raises(GridMismatchError):
        ode_residual([u, u], (0, 1), "H", P)
    with pytest.raises(GridMismatchError):
        ode_residual([u, u, u], (0, 1, 3), "H", P)
    with pytest.raises(DomainError):
        ode_residual([u, u, u], (0, 1, 2), "Q", P, edge=2.0)


def test_coordinate_bch_phase():
    err, _ = checks.starexp_bch_phase(CFG)
    assert err < 1e-12


def test_coord_flow_leaving_chart():
    with pytest.raises(DomainError):
        coord_hat_factor(1.0, -2.0, 0.0, 0.2, P, np.array([0.0, 1.0]))


def test_principal_series_unitarity_and_law():
    assert checks.starexp_ps_unitarity(CFG)[0] < 1e-6
    assert checks.starexp_ps_homomorphism(CFG)[0] < 1e-6


def test_principal_series_dilation_exact():
    # diag(a, 1/a): (P f)(x) = a^{1 + i mu} f(a^2 x); with a = 1 nothing moves
    x0, dx = half_cell_line(-5, 5, 200)
    f = line_function(lambda x: np.exp(-x ** 2), x0, dx, 200)
    out = principal_series_apply(GroupElement(1.0, 0.0, 0.0, 1.0), P.mu, f)
    assert np.allclose(out.values, f.values)


def test_principal_series_pole_on_node():
    f = line_function(lambda x: np.exp(-x ** 2), -2.0, 0.5, 9)
    with pytest.raises(PoleError):
        principal_series_apply(GroupElement(1.0, 1.0, 0.0, 1.0), P.mu, f)


def test_substitution_operator_descriptor():
    g = GroupElement(1.2, 0.1, 0.0, 1 / 1.2)
    op = group_starexp_kernel(g, P)
    assert isinstance(op, SubstitutionOperator)
    assert op.exponent == complex(-1, P.nu)
    w, target = op.image(np.array([0.0, 1.0]))
    assert np.allclose(target, [(g.d * 0 - g.b) / g.a, (g.d - g.b) / g.a])
    assert set(op.describe()) == {"g", "exponent", "kernel"}
    with pytest.raises(DomainError):
        SubstitutionOperator(g, op.exponent, side="right")


def test_group_starexp_homomorphism():
    assert checks.starexp_group_homomorphism(checks.CheckConfig())[0] < 1e-5


def test_f_bessel_needs_positive_theta():
    with pytest.raises(DomainError):
        starexp_F_bessel(0.5, DeformParams(-1.0, 1.0), 0.0, 0.0)

