"""Complex gamma and Bessel functions of complex order.

The routines are tuned for the orders that occur in the star-exponential of
lambda_F, namely pure imaginary orders i*tau with |tau| <= 5, and for real
arguments 0 < x <= 100.  Everything is vectorized over ``x``; the order is a
scalar.

Three evaluation regimes are used for J:

* power series with compensated summation for x < 8,
* the Schlaefli integral (composite Gauss-Legendre) in the middle range,
* the Hankel large-argument expansion for x >= max(25, 2|nu|^2).

Y is always obtained from J through the connection formula, which keeps the
errors of J and Y correlated (important for Wronskians when tau is large).
"""
import cmath
import math

import numpy as np

from .errors import DomainError, PoleError, SingularOrderError, UnsupportedOrderError

# Lanczos approximation, g = 7, nine coefficients.
_LANCZOS_G = 7.0
_LANCZOS_P = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_SERIES_MAX = 8.0
_GL16 = np.polynomial.legendre.leggauss(16)


def _is_nonpositive_integer(z):
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def gamma_complex(z):
    """Gamma function of a complex argument.

    Lanczos approximation with reflection for Re z < 1/2.  Raises
    :class:`PoleError` at the non-positive integers.
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"gamma has a pole at z = {z.real:g}")
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * gamma_complex(1.0 - z))
    z = z - 1.0
    acc = _LANCZOS_P[0]
    for k in range(1, len(_LANCZOS_P)):
        acc += _LANCZOS_P[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2 * math.pi) * cmath.exp((z + 0.5) * cmath.log(t) - t) * acc


def rgamma_complex(z):
    """Reciprocal gamma function, an entire function (zero at the poles of gamma)."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        return 0j
    return 1.0 / gamma_complex(z)


# ---------------------------------------------------------------------------
# helpers

def _as_positive_array(x):
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError("Bessel functions are evaluated for real x > 0 only")
    return arr


def _restore(shape_src, values):
    if np.ndim(shape_src) == 0:
        return values.reshape(()).item()
    return values


def _neumaier_step(s, c, term):
    """One step of Neumaier's compensated summation on real arrays."""
    t = s + term
    big = np.abs(s) >= np.abs(term)
    c = c + np.where(big, (s - t) + term, (term - t) + s)
    return t, c


def _composite_gl(a, b, panels):
    """Composite 16-point Gauss-Legendre nodes and weights on [a, b]."""
    x16, w16 = _GL16
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x16[None, :]).ravel()
    weights = (half[:, None] * w16[None, :]).ravel()
    return nodes, weights


# ---------------------------------------------------------------------------
# J of complex order: the three regimes

def _power_series(nu, x, sign):
    """(x/2)^nu * sum_k (sign x^2/4)^k / (k! Gamma(k+nu+1)), compensated."""
    if nu.imag == 0 and nu.real < 0 and nu.real == int(nu.real):
        # negative integer order: the first -nu terms vanish; J_{-n} = (-1)^n J_n, I_{-n} = I_n
        n = -int(nu.real)
        return (sign ** n) * _power_series(complex(n), x, sign)
    h = 0.5 * x
    q = sign * h * h
    term = np.full(x.shape, rgamma_complex(nu + 1.0), dtype=complex)
    sr, si = term.real.copy(), term.imag.copy()
    cr, ci = np.zeros_like(sr), np.zeros_like(si)
    k = 1
    while k < 400:
        denom = k * (k + nu)
        term = term * q / denom
        sr, cr = _neumaier_step(sr, cr, term.real)
        si, ci = _neumaier_step(si, ci, term.imag)
        total = np.hypot(sr, si)
        if k > 3 and np.all(np.abs(term) <= 1e-17 * np.maximum(total, 1e-300)):
            break
        k += 1
    return ((sr + cr) + 1j * (si + ci)) * np.exp(nu * np.log(h))


def _j_schlafli(nu, x):
    """Schlaefli's integral, valid for Re x > 0 and every complex order."""
    out = np.empty(x.shape, dtype=complex)
    sin_term = cmath.sin(nu * math.pi) / math.pi
    for start in range(0, x.size, 512):
        xc = x[start:start + 512]
        xmax = float(xc.max())
        panels = int(math.ceil((xmax + abs(nu)) / 3.0)) + 4
        th, wth = _composite_gl(0.0, math.pi, panels)
        first = np.cos(nu * th[None, :] - xc[:, None] * np.sin(th)[None, :]) @ wth / math.pi
        if sin_term != 0:
            span = np.arcsinh((45.0 + 2.0 * max(0.0, -nu.real)) / xc)
            tpan = int(math.ceil(float(span.max()) * (abs(nu.imag) + 2.0))) + 2
            u, wu = _composite_gl(0.0, 1.0, tpan)
            t = span[:, None] * u[None, :]
            integrand = np.exp(-xc[:, None] * np.sinh(t) - nu * t)
            second = (integrand @ wu) * span
            out[start:start + 512] = first - sin_term * second
        else:
            out[start:start + 512] = first
    return out


def _hankel_pq(nu, x):
    """Hankel's asymptotic P and Q series, truncated at the smallest term."""
    mu = 4.0 * nu * nu
    p = np.ones(x.shape, dtype=complex)
    q = np.zeros(x.shape, dtype=complex)
    term = np.ones(x.shape, dtype=complex)
    active = np.ones(x.shape, dtype=bool)
    prev = np.full(x.shape, np.inf)
    for k in range(1, 80):
        term = term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        mag = np.abs(term)
        active &= mag < prev
        prev = mag
        contrib = np.where(active, term, 0.0)
        if k % 2 == 1:
            q += (-1) ** ((k - 1) // 2) * contrib
        else:
            p += (-1) ** (k // 2) * contrib
        active &= mag > 1e-18 * np.abs(p)
        if not active.any():
            break
    return p, q


def _j_hankel(nu, x):
    p, q = _hankel_pq(nu, x)
    chi = x - (0.5 * nu + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * x)) * (p * np.cos(chi) - q * np.sin(chi))


def _hankel_threshold(nu):
    return max(25.0, 2.0 * abs(nu) ** 2)


def _jv(nu, x):
    """J_nu(x) on a positive float array, no validation."""
    nu = complex(nu)
    if nu.imag == 0 and nu.real < 0 and nu.real == math.floor(nu.real):
        n = int(-nu.real)
        return (-1) ** n * _jv(complex(n), x)
    out = np.empty(x.shape, dtype=complex)
    small = x < _SERIES_MAX
    large = x >= _hankel_threshold(nu)
    mid = ~(small | large)
    if small.any():
        out[small] = _power_series(nu, x[small], -1.0)
    if mid.any():
        out[mid] = _j_schlafli(nu, x[mid])
    if large.any():
        out[large] = _j_hankel(nu, x[large])
    return out


def _is_integer(nu):
    return nu.imag == 0 and nu.real == math.floor(nu.real)


def _yv(nu, x):
    nu = complex(nu)
    if _is_integer(nu):
        raise UnsupportedOrderError("Y of integer order is not supported")
    jp = _jv(nu, x)
    if nu.real == 0.0:
        jm = np.conj(jp)
    else:
        jm = _jv(-nu, x)
    return (jp * cmath.cos(nu * math.pi) - jm) / cmath.sin(nu * math.pi)


# ---------------------------------------------------------------------------
# public Bessel API

def bessel_first_kind(order, x):
    """Bessel function of the first kind J_order(x) for complex order and x > 0."""
    arr = _as_positive_array(x)
    vals = _jv(complex(order), np.atleast_1d(arr).ravel()).reshape(np.shape(arr))
    return _restore(x, vals)


def bessel_first_kind_derivative(order, x):
    """d/dx J_order(x) from the recurrence J' = (J_{nu-1} - J_{nu+1}) / 2."""
    arr = np.atleast_1d(_as_positive_array(x)).ravel()
    nu = complex(order)
    vals = 0.5 * (_jv(nu - 1, arr) - _jv(nu + 1, arr))
    return _restore(x, vals.reshape(np.shape(x)))


def bessel_second_kind(order, x):
    """Bessel function of the second kind Y_order(x) via the connection formula.

    Integer orders are rejected (:class:`UnsupportedOrderError`).
    """
    arr = _as_positive_array(x)
    vals = _yv(complex(order), np.atleast_1d(arr).ravel()).reshape(np.shape(arr))
    return _restore(x, vals)


def bessel_second_kind_derivative(order, x):
    """d/dx Y_order(x) from the recurrence Y' = (Y_{nu-1} - Y_{nu+1}) / 2."""
    arr = np.atleast_1d(_as_positive_array(x)).ravel()
    nu = complex(order)
    if _is_integer(nu):
        raise UnsupportedOrderError("Y of integer order is not supported")
    vals = 0.5 * (_yv(nu - 1, arr) - _yv(nu + 1, arr))
    return _restore(x, vals.reshape(np.shape(x)))


def _iv(nu, x):
    return _power_series(complex(nu), x, 1.0)


def _kv_imag(tau, x, derivative=False):
    """K_{i tau}(x) = int_0^inf e^{-x cosh t} cos(tau t) dt (or its x-derivative)."""
    out = np.empty(x.shape)
    for i, xi in enumerate(x):
        # truncate where e^{-x cosh t} has dropped by e^{-42} < 1e-18
        span = math.acosh(1.0 + 42.0 / xi)
        panels = int(math.ceil(span * (abs(tau) + 4.0))) + 2
        t, w = _composite_gl(0.0, span, panels)
        f = np.exp(-xi * np.cosh(t)) * np.cos(tau * t)
        if derivative:
            f = -np.cosh(t) * f
        out[i] = f @ w
    return out


def bessel_modified(kind, tau, x):
    """Modified Bessel functions of imaginary order i*tau.

    ``kind='I'`` returns the complex I_{i tau}(x) (power series);
    ``kind='K_imag'`` returns the real K_{i tau}(x) from its cosh integral.
    """
    arr = np.atleast_1d(_as_positive_array(x)).ravel()
    if kind == "I":
        vals = _iv(1j * float(tau), arr)
    elif kind in ("K", "K_imag"):
        vals = _kv_imag(float(tau), arr)
    else:
        raise ValueError(f"unknown modified Bessel kind {kind!r}")
    return _restore(x, vals.reshape(np.shape(x)))


def bessel_modified_derivative(kind, tau, x):
    """x-derivative of :func:`bessel_modified`."""
    arr = np.atleast_1d(_as_positive_array(x)).ravel()
    nu = 1j * float(tau)
    if kind == "I":
        vals = 0.5 * (_iv(nu - 1, arr) + _iv(nu + 1, arr))
    elif kind in ("K", "K_imag"):
        vals = _kv_imag(float(tau), arr, derivative=True)
    else:
        raise ValueError(f"unknown modified Bessel kind {kind!r}")
    return _restore(x, vals.reshape(np.shape(x)))


# ---------------------------------------------------------------------------
# real combinations

def tilde_family(kind, tau, x):
    """Real Bessel functions of imaginary order, normalized as in the construction.

    J~ = Re J_{i tau} / sinh(pi tau / 2),  Y~ = Re Y_{i tau} / sinh(pi tau / 2),
    I~ = Re I_{i tau},  K~ = K_{i tau}.
    """
    tau = float(tau)
    arr = np.atleast_1d(_as_positive_array(x)).ravel()
    if kind in ("J", "Y"):
        if tau == 0.0:
            raise SingularOrderError("J~ and Y~ are singular at tau = 0")
        nu = 1j * tau
        raw = _jv(nu, arr) if kind == "J" else _yv(nu, arr)
        vals = raw.real / math.sinh(0.5 * math.pi * tau)
    elif kind == "I":
        vals = _iv(1j * tau, arr).real
    elif kind == "K":
        vals = _kv_imag(tau, arr)
    else:
        raise ValueError(f"unknown tilde kind {kind!r}")
    return _restore(x, vals.reshape(np.shape(x)))


def _j_and_y_imag(tau, x):
    nu = 1j * tau
    jp = _jv(nu, x)
    y = (jp * math.cosh(math.pi * tau) - np.conj(jp)) / (1j * math.sinh(math.pi * tau))
    return jp, y


def spectral_A(tau, alpha, s, form="raw"):
    """Spectral eigenfunction A_tau(alpha, s) = Y~(s alpha) - 2 s tau J~(s alpha).

    ``form='raw'`` uses (1/sinh(pi tau/2)) Re(Y_{i tau} - 2 s tau J_{i tau})
    directly; ``form='tilde'`` composes :func:`tilde_family`.  ``alpha`` and
    ``s`` broadcast against each other.
    """
    tau = float(tau)
    if tau == 0.0:
        raise SingularOrderError("A_tau is singular at tau = 0")
    a, sv = np.broadcast_arrays(np.asarray(alpha, dtype=float), np.asarray(s, dtype=float))
    if np.any(a <= 0) or np.any(sv <= 0):
        raise DomainError("spectral_A needs alpha > 0 and s > 0")
    arg = (a * sv).ravel()
    flat_s = sv.ravel()
    if form == "raw":
        j, y = _j_and_y_imag(tau, arg)
        vals = (y - 2.0 * flat_s * tau * j).real / math.sinh(0.5 * math.pi * tau)
    elif form == "tilde":
        vals = tilde_family("Y", tau, arg) - 2.0 * flat_s * tau * tilde_family("J", tau, arg)
    else:
        raise ValueError(f"unknown form {form!r}")
    vals = np.asarray(vals).reshape(a.shape)
    if np.ndim(alpha) == 0 and np.ndim(s) == 0:
        return float(vals)
    return vals
