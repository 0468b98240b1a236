"""Integral identities of the imaginary-order Bessel family.

* the regularized Watson identity (Gauss-Bessel integral, its closed form and
  the Hankel-loop representation),
* the final identity relating the spectral s-integral of two A_tau functions
  to an oscillatory Mellin-type integral,
* the orthogonality relation of the A_tau family, tested by mollified
  reconstruction.
"""
import cmath
import math

import numpy as np

from .errors import DomainError, InvalidConfigError
from .quadrature import (QuadratureSpec, composite_gauss_legendre, integrate_adaptive,
                         integrate_hankel_loop, mollified_delta_test)
from .specfun import bessel_first_kind, spectral_A
from .starexp import spectral_s_integral

__all__ = ["watson_lhs", "watson_closed_form", "watson_rhs_loop", "mellin_oscillatory",
           "identity_lhs", "identity_rhs", "orthogonality_kernel", "orthogonality_check"]


# ---------------------------------------------------------------------------
# Watson

def watson_lhs(nu, alpha, beta, p, spec=None):
    """int_0^inf s e^{-p^2 s^2} J_nu(alpha s) J_nu(beta s) ds for Re p^2 > 0.

    Adaptive Gauss-Kronrod, truncated where e^{-Re(p^2) s^2} < e^{-40}.
    Returns ``(value, err_est)``.
    """
    p2 = complex(p) ** 2
    if p2.real <= 0:
        raise DomainError("the Gauss-Bessel integral needs Re p^2 > 0")
    spec = spec or QuadratureSpec(abs_tol=1e-13, rel_tol=1e-11)
    cut = math.sqrt(40.0 / p2.real)

    def f(s):
        s = np.asarray(s, dtype=float)
        out = np.zeros(s.shape, dtype=complex)
        pos = s > 0
        sp = s[pos]
        out[pos] = (sp * np.exp(-p2 * sp * sp) * bessel_first_kind(nu, alpha * sp)
                    * bessel_first_kind(nu, beta * sp))
        return out

    return integrate_adaptive(f, 0.0, cut, spec)


def watson_closed_form(nu, alpha, beta, p):
    """(1/(2 p^2)) e^{-(alpha^2 + beta^2)/(4 p^2)} I_nu(alpha beta/(2 p^2)) for integer nu >= 0.

    The modified Bessel function is summed from its power series, so this
    is an oracle independent of the quadrature routes.
    """
    if nu != int(nu) or nu < 0:
        raise DomainError("the closed form is provided for integer orders nu >= 0")
    p2 = complex(p) ** 2
    z = alpha * beta / (2 * p2)
    term = (z / 2) ** int(nu) / math.factorial(int(nu))
    total = term
    k = 0
    while abs(term) > 1e-18 * abs(total) or k < 5:
        k += 1
        term *= (z / 2) ** 2 / (k * (k + int(nu)))
        total += term
    return complex(cmath.exp(-(alpha ** 2 + beta ** 2) / (4 * p2)) * total / (2 * p2))


def watson_rhs_loop(nu, alpha, beta, p, contour=None):
    """The Gauss-Bessel integral recovered from the Hankel loop.

    The combined Watson identity reads
    loop(-1 - nu, c) = -4 i pi p^2 e^{(alpha^2 + beta^2)/(4 p^2)} * (Gauss-Bessel integral)
    with c = alpha beta / (4 p^2); this returns the loop divided by that
    prefactor.  The loop carries an extra phase e^{i pi nu}, so the two sides
    agree for integer nu only.
    """
    p2 = complex(p) ** 2
    c = alpha * beta / (4 * p2)
    loop = integrate_hankel_loop(-1 - nu, c, contour)
    pref = -4j * math.pi * p2 * cmath.exp((alpha ** 2 + beta ** 2) / (4 * p2))
    return complex(loop / pref)


# ---------------------------------------------------------------------------
# final identity

def _rotated_half(tau, lam, spec):
    """int_1^inf 2 cos(tau log x)/x e^{i lam (x + 1/x)} dx on the ray x = 1 + i sign(lam) y."""
    sgn = 1.0 if lam > 0 else -1.0
    # e^{i lam (x + 1/x)} decays like e^{-|lam| y^3/(1 + y^2)} on the ray
    cut = 45.0 / abs(lam) + 8.0

    def f(y):
        x = 1.0 + 1j * sgn * np.asarray(y, dtype=float)
        return 1j * sgn * 2 * np.cos(tau * np.log(x)) / x * np.exp(1j * lam * (x + 1 / x))

    # split at y = 1 so the slow y^3 onset near the origin gets its own panels
    v1, e1 = integrate_adaptive(f, 0.0, 1.0, spec)
    v2, e2 = integrate_adaptive(f, 1.0, cut, spec)
    return v1 + v2, e1 + e2


def mellin_oscillatory(tau, lam, spec=None):
    """I(tau, lam) = int_R |x|^{-1 + i tau} e^{i lam (x + 1/x)} dx.

    x -> 1/x folds (0, 1) onto (1, inf), turning |x|^{-1 + i tau} into
    2 cos(tau log x)/x; x -> -x turns the negative half line into the same
    integral with -lam.  Each half is then rotated onto the ray on which the
    exponential decays.  I is even in lam.  Returns ``(value, err_est)``.
    """
    if lam == 0:
        raise DomainError("I(tau, 0) diverges")
    spec = spec or QuadratureSpec(abs_tol=1e-13, rel_tol=1e-11)
    v1, e1 = _rotated_half(tau, lam, spec)
    v2, e2 = _rotated_half(tau, -lam, spec)
    return complex(v1 + v2), float(e1 + e2)


def _boundary_p2(p):
    p2 = complex(p) ** 2
    if abs(p2.real) > 1e-12 * abs(p2) or p2.imag == 0:
        raise DomainError("the identity is stated on |Arg p| = pi/4, where p^2 is purely imaginary")
    return p2


def identity_lhs(tau, alpha, beta, p, spec=None, return_family=False):
    """int_0^inf e^{-p^2 s^2} A_tau(alpha, s) A_tau(beta, s) s/(1 + 4 tau^2 s^2) ds at |Arg p| = pi/4.

    On this boundary the Gaussian is a pure phase; the integral is taken
    as the eps -> 0 limit of the e^{-eps s^2} regularized integrals
    (schedule from ``spec``), extrapolated.  Returns ``(value, err_est)``.
    """
    p2 = _boundary_p2(p)
    return spectral_s_integral(tau, alpha, beta, p2.imag, spec, return_family=return_family)


def identity_rhs(tau, alpha, beta, p, spec=None):
    """(1/(4 pi |p^2|)) e^{-(alpha^2 + beta^2)/(4 p^2)} int_R |x|^{-1 + i tau} e^{-(alpha beta/(4 p^2))(x + 1/x)} dx.

    For p^2 = i w the exponent is i (alpha beta/(4 w)) (x + 1/x), so the
    x-integral is :func:`mellin_oscillatory`.  Returns ``(value, err_est)``.
    """
    p2 = _boundary_p2(p)
    lam = alpha * beta / (4 * p2.imag)
    val, err = mellin_oscillatory(tau, lam, spec)
    pref = cmath.exp(-(alpha ** 2 + beta ** 2) / (4 * p2)) / (4 * math.pi * abs(p2))
    return complex(pref * val), float(abs(pref) * err)


# ---------------------------------------------------------------------------
# orthogonality

def _orth_s_nodes(tau, s_max, qmax):
    """Gauss-Legendre nodes on (0, s_max]: geometric panels below 1, uniform above."""
    xs, ws = [], []
    edges = [0.0] + [10.0 ** k for k in range(-7, 1)]
    for lo, hi in zip(edges[:-1], edges[1:]):
        # A_tau oscillates like cos(tau log s) near 0
        x, w = composite_gauss_legendre(lo, hi, 2)
        xs.append(x)
        ws.append(w)
    panels = int(math.ceil((s_max - 1.0) * (qmax + 2 * tau) / 4.0)) + 4
    x, w = composite_gauss_legendre(1.0, s_max, panels)
    xs.append(x)
    ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def orthogonality_kernel(tau, s_max=45.0):
    """K(q, q') = int_0^S A_tau(q, s) A_tau(q', s) s/(1 + 4 tau^2 s^2) ds as a callable.

    The callable takes broadcastable arrays of q and q' (positive) and builds
    the kernel matrix from the outer product of the A_tau samples.
    """
    if tau == 0:
        raise DomainError("the orthogonality kernel needs tau != 0")

    def kernel(q, qp):
        q = np.asarray(q, dtype=float)
        qp = np.asarray(qp, dtype=float)
        qv, qpv = np.unique(q), np.unique(qp)
        if np.any(qv <= 0) or np.any(qpv <= 0):
            raise DomainError("orthogonality kernel needs q, q' > 0")
        s, w = _orth_s_nodes(tau, s_max, max(qv.max(), qpv.max()))
        meas = w * s / (1 + 4 * tau * tau * s * s)
        Aq = spectral_A(tau, qv[:, None], s[None, :])
        Aqp = spectral_A(tau, qpv[:, None], s[None, :])
        K = (Aq * meas) @ Aqp.T
        iq = np.searchsorted(qv, q)
        iqp = np.searchsorted(qpv, qp)
        return K[iq, iqp]

    return kernel


def orthogonality_check(tau=1.0, test_fn=None, support=(1.0, 3.0), s_max=45.0, n=101,
                        pad=0.6, q_panels=12):
    """Mollified reconstruction through the orthogonality relation.

    r(q) = int K(q, q') sqrt(q q') g(q') dq' should reproduce g on the
    support when K is the kernel of the A_tau orthogonality relation.  The
    default test function is e^{-4 (q - 2)^2}.  Returns
    ``(reconstruction GridFunction, relative L2 error)``.
    """
    if test_fn is None:
        def test_fn(q):
            return np.exp(-4 * (q - 2.0) ** 2)
    lo, hi = support
    if lo - pad <= 0:
        raise InvalidConfigError("support minus pad must stay positive")
    nodes = composite_gauss_legendre(lo - pad, hi + pad, q_panels)
    return mollified_delta_test(orthogonality_kernel(tau, s_max), lambda q, qp: np.sqrt(q * qp),
                                test_fn, support, n=n, pad=pad, nodes=nodes)
