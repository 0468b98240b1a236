import math

import numpy as np
import pytest

from adsstar import checks
from adsstar.errors import DomainError, InvalidConfigError, ShiftOutOfGridError
from adsstar.geometry import GroupElement
from adsstar.grid import line_function, linspace_grid
from adsstar.intertwine import (WParams, j_eps_apply, multiplier_image, psi_symbol, script_T_apply,
                                u1_rep, u_rep, w_eps_apply)
from adsstar.params import DeformParams
from adsstar.starexp import SubstitutionOperator

CFG = checks.CheckConfig()


def test_wparams_validation():
    assert WParams().eps == 1 and WParams().beta == -1
    with pytest.raises(InvalidConfigError):
        WParams(eps=0)
    with pytest.raises(InvalidConfigError):
        WParams(beta=float("nan"))


@pytest.mark.parametrize("check,tol", [
    (checks.intertwiners_w_unitarity, 1e-3),
    (checks.intertwiners_w_cone_deficit, 1e-3),
    (checks.intertwiners_w_equivariance, 1e-3),
    (checks.intertwiners_multipliers, 1e-3),
    (checks.intertwiners_j_isometry, 1e-3),
    (checks.intertwiners_j_orthogonal, 1e-3),
    (checks.intertwiners_j_resolution, 1e-3),
    (checks.intertwiners_j_equivariance, 1e-3),
    (checks.intertwiners_u1_law, 1e-6),
    (checks.intertwiners_t01_roundtrip, 1e-4),
    (checks.intertwiners_t01_unitarity, 1e-4),
    (checks.intertwiners_t01_lambda, 1e-6),
])
def test_intertwiner_checks(check, tol):
    err, params = check(CFG)
    assert err <= tol
    assert isinstance(params, dict)


def test_w_copies_differ_and_are_linear():
    P = DeformParams(1.0, 4.0)
    f = linspace_grid("psi", lambda q, y: np.exp(-q ** 2 - (y - 1.0) ** 2 / 0.1), (-4, 4), 81, (0, 2), 41)
    grid = dict(alim=(-1, 1), na=9, llim=(-3, 3), nl=16)
    wp, wm = w_eps_apply(f, WParams(1), P, **grid), w_eps_apply(f, WParams(-1), P, **grid)
    assert not np.allclose(wp.values, wm.values)
    w2 = w_eps_apply(f.with_values(2j * f.values), WParams(1), P, **grid)
    assert np.allclose(w2.values, 2j * wp.values)


def test_multiplier_image_closed_forms():
    P = DeformParams(1.0, 4.0)
    A, L = np.meshgrid([-0.5, 0.0, 0.7], [-1.0, 0.3], indexing="ij")
    for eps in (1, -1):
        wp = WParams(eps)
        assert np.allclose(multiplier_image("H", wp, P)(A, L), 4 * eps * L)
        assert np.allclose(multiplier_image("y", wp, P)(A, L), eps * np.exp(-2 * A))
        # beta = -1: W(lambda_F) = (1/2) e^{2a} eps (theta^2/(2 kappa) + 1 - kappa l^2)
        assert np.allclose(multiplier_image("F", wp, P)(A, L),
                           0.5 * np.exp(2 * A) * eps * (1 / 8 + 1 - 4 * L ** 2))
    with pytest.raises(DomainError):
        multiplier_image("x", WParams(1, beta=0.5), P)
    with pytest.raises(DomainError):
        multiplier_image("Z", WParams(), P)
    with pytest.raises(DomainError):
        psi_symbol("Z", 1.0)
    assert psi_symbol("x", 1.0)(2.0, 3.0) == 2.0


def test_j_validation():
    P = DeformParams(1.0, 1.0)
    psi = line_function(lambda a: np.exp(-a ** 2), -3.0, 0.1, 61)
    with pytest.raises(InvalidConfigError):
        j_eps_apply(psi, 0, P)
    with pytest.raises(InvalidConfigError):
        j_eps_apply(psi, 1, P, direction="sideways")
    # the forward integrand is e^{-a} psi(a), largest at a = -1/2
    ratio = math.exp(3 - 9) / math.exp(0.5 - 0.25)
    assert abs(j_eps_apply(psi, 1, P).meta["edge_ratio"] - ratio) < 1e-12


def test_representations():
    P = DeformParams(1.0, 1.0)
    phi = line_function(lambda a: np.exp(-a ** 2), -3.0, 0.1, 61)
    assert np.allclose(u1_rep(1, 0.0, 0.0, phi, P).values, phi.values)
    assert np.allclose(u_rep(0.0, 0.0, phi).values, phi.values)
    # U1(0, l) is a pure phase e^{i (kappa eps/(2 theta)) e^{-2 a0} l}
    out = u1_rep(-1, 0.0, 0.4, phi, P)
    assert np.allclose(out.line(), np.exp(-0.2j * np.exp(-2 * phi.x)) * phi.line())
    with pytest.raises(ShiftOutOfGridError):
        u1_rep(1, 6.5, 0.0, phi, P)


def test_script_t_diagonal_group_element():
    # for c = 0 the image is a delta on x - y = log a carrying the phase e^{i kappa b e^{-2y}/(2 theta a)}
    P = DeformParams(1.0, 1.0)
    g = GroupElement(1.5, 0.2, 0.0, 1 / 1.5)
    op = SubstitutionOperator.for_group(g, P)
    x = np.array([0.3 + math.log(1.5), 0.3 + math.log(1.5) + 0.5])
    y = np.array([0.3, 0.3])
    vals, errs = script_T_apply(op, P, points=(x, y), width=0.05)
    peak = 2 * math.pi / (0.05 * math.sqrt(math.pi)) * np.exp(1j * 0.2 * np.exp(-0.6) / 3.0)
    assert abs(vals[0] - peak) < 1e-12 * abs(peak)
    assert abs(vals[1]) < 1e-30
    assert np.all(errs == 0)


def test_script_t_rejects_other_exponents():
    P = DeformParams(1.0, 1.0)
    op = SubstitutionOperator(GroupElement(1.0, 0.0, 0.0, 1.0), complex(-1.0, 0.3))
    with pytest.raises(DomainError):
        script_T_apply(op, P, points=(np.zeros(1), np.zeros(1)))


def test_script_t_unit_consistency():
    assert checks.consistency_script_t_unit(CFG)[0] < 5e-3
