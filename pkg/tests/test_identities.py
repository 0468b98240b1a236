import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from adsstar import checks
from adsstar.errors import DomainError, InvalidConfigError
from adsstar.identities import (identity_lhs, identity_rhs, mellin_oscillatory, orthogonality_check,
                                orthogonality_kernel, watson_closed_form, watson_lhs, watson_rhs_loop)


def _mellin_oracle(tau, lam):
    """int_R |x|^{-1 + i tau} e^{i lam (x + 1/x)} dx through Hankel functions of imaginary order."""
    lam = abs(mp.mpf(lam))
    a = 1j * mp.pi * mp.exp(mp.pi * tau / 2) * mp.hankel1(-1j * tau, 2 * lam)
    b = mp.conj(1j * mp.pi * mp.exp(-mp.pi * tau / 2) * mp.hankel1(1j * tau, 2 * lam))
    return complex(a + b)


def _watson_oracle(nu, alpha, beta, p):
    p2 = mp.mpc(p) ** 2
    return complex(mp.exp(-(alpha ** 2 + beta ** 2) / (4 * p2)) * mp.besseli(nu, alpha * beta / (2 * p2)) / (2 * p2))


@pytest.mark.parametrize("nu,alpha,beta,p", [(0, 1.0, 1.0, 1.0), (1, 1.3, 0.7, 0.9), (0.5, 0.8, 1.1, 1.0),
                                             (2, 0.5, 1.5, 1.2 * cmath.exp(0.3j))])
def test_watson_quadrature_against_oracle(nu, alpha, beta, p):
    v, err = watson_lhs(nu, alpha, beta, p)
    ref = _watson_oracle(nu, alpha, beta, p)
    assert abs(v - ref) < 1e-10 * abs(ref)
    assert err < 1e-8


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 4), st.floats(0.2, 2.0), st.floats(0.2, 2.0), st.floats(0.6, 1.5))
def test_watson_three_routes_agree(nu, alpha, beta, p):
    closed = watson_closed_form(nu, alpha, beta, p)
    loop = watson_rhs_loop(nu, alpha, beta, p)
    # the loop carries e^{i pi nu}, a sign for integer orders; its error is absolute
    # (cancellation on the contour), hence the floor for tiny values
    assert abs((-1) ** nu * loop - closed) < 1e-9 * abs(closed) + 1e-14
    assert abs(closed - _watson_oracle(nu, alpha, beta, p)) < 1e-12 * abs(closed)


def test_watson_domain():
    with pytest.raises(DomainError):
        watson_lhs(0, 1.0, 1.0, cmath.exp(0.3j * math.pi))
    with pytest.raises(DomainError):
        watson_closed_form(0.5, 1.0, 1.0, 1.0)


def test_mellin_frozen_value():
    # frozen from the Hankel-function oracle
    assert abs(mellin_oscillatory(1.0, 0.25)[0] - 4.409557927126388) < 1e-10


@pytest.mark.parametrize("tau,lam", [(1.0, 0.25), (0.5, 0.7), (2.0, 1.5), (1.0, -0.4), (0.3, 3.0)])
def test_mellin_against_hankel(tau, lam):
    v, err = mellin_oscillatory(tau, lam)
    ref = _mellin_oracle(tau, lam)
    assert abs(v - ref) < 1e-9 * abs(ref)


def test_mellin_even_in_lambda():
    assert abs(mellin_oscillatory(0.7, 0.9)[0] - mellin_oscillatory(0.7, -0.9)[0]) < 1e-12
    with pytest.raises(DomainError):
        mellin_oscillatory(1.0, 0.0)


def test_identity_rhs_against_oracle():
    tau, alpha, beta, rho = 0.5, 1.0, 2.0, 1.0
    p = rho * cmath.exp(0.25j * math.pi)
    p2 = 1j * rho ** 2
    ref = (cmath.exp(-(alpha ** 2 + beta ** 2) / (4 * p2)) / (4 * math.pi * rho ** 2)
           * _mellin_oracle(tau, alpha * beta / (4 * rho ** 2)))
    v, _ = identity_rhs(tau, alpha, beta, p)
    assert abs(v - ref) < 1e-9 * abs(ref)


def test_identity_needs_the_boundary():
    with pytest.raises(DomainError):
        identity_lhs(1.0, 1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        identity_rhs(1.0, 1.0, 1.0, cmath.exp(0.2j))


def test_identity_case_reports_both_sides():
    # the identity holds only up to the factor analysed in the notes; the check reports both sides
    err, info = checks.identity_case(0.5, 1.0, 2.0, 1.0)
    assert set(info) >= {"lhs", "rhs"}
    lhs, rhs = complex(*info["lhs"]), complex(*info["rhs"])
    assert abs(err - abs(lhs - rhs) / abs(rhs)) < 1e-12


def test_orthogonality_kernel_symmetric():
    K = orthogonality_kernel(1.0, s_max=20.0)
    q = np.array([0.8, 1.5, 2.5])
    M = K(q[:, None], q[None, :])
    assert np.allclose(M, M.T, rtol=1e-12)
    with pytest.raises(DomainError):
        K(np.array([-1.0]), np.array([1.0]))
    with pytest.raises(DomainError):
        orthogonality_kernel(0.0)
    with pytest.raises(InvalidConfigError):
        orthogonality_check(support=(0.5, 1.0), pad=0.6)
