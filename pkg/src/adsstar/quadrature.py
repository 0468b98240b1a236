"""Quadrature engine: adaptive Gauss-Kronrod, Filon weights for linear phases,
the Hankel loop contour, epsilon-regularized limits and mollified delta tests.
"""
import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, InvalidConfigError
from .grid import GridFunction


@dataclass
class QuadratureSpec:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_panels: int = 2000
    truncation_radius: float = None
    oscillation_mode: str = "none"
    eps_schedule: tuple = (0.2, 0.1, 0.05, 0.025)

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise InvalidConfigError("tolerances must be positive")
        if self.oscillation_mode not in ("none", "filon_quadratic_phase", "filon_linear_phase"):
            raise InvalidConfigError(f"unknown oscillation mode {self.oscillation_mode!r}")
        eps = tuple(float(e) for e in self.eps_schedule)
        if any(e <= 0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
            raise InvalidConfigError("eps_schedule must be positive and strictly decreasing")
        self.eps_schedule = eps


@dataclass
class ContourSpec:
    """Hankel loop geometry: two rays at angles -/+ ray_angle joined by a circle."""

    loop_radius: float = 0.5
    ray_angle: float = math.pi / 8
    outer_cutoff: float = None

    def __post_init__(self):
        if self.loop_radius <= 0:
            raise InvalidConfigError("loop_radius must be positive")
        if not 0 < self.ray_angle < math.pi / 2:
            raise InvalidConfigError("ray_angle must lie in (0, pi/2)")
        if self.outer_cutoff is not None and self.outer_cutoff <= self.loop_radius:
            raise InvalidConfigError("outer_cutoff must exceed loop_radius")


# ---------------------------------------------------------------------------
# Gauss-Legendre helpers

_GL_CACHE = {}


def gauss_legendre(n):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def composite_gauss_legendre(a, b, panels, order=16):
    """Nodes and weights of a composite Gauss-Legendre rule on [a, b]."""
    x, w = gauss_legendre(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def graded_nodes(a, b, panels, order=16, grading=None):
    """Composite Gauss-Legendre rule whose panels are geometrically refined
    toward ``a`` (useful for integrable endpoint singularities)."""
    if grading is None:
        return composite_gauss_legendre(a, b, panels, order)
    x, w = gauss_legendre(order)
    edges = a + (b - a) * np.concatenate([[0.0], np.geomspace(grading, 1.0, panels)])
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    return (mid[:, None] + half[:, None] * x).ravel(), (half[:, None] * w).ravel()


# ---------------------------------------------------------------------------
# adaptive Gauss-Kronrod 7-15

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES15 = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WK15 = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG15 = np.zeros(15)
_WG15[1::2] = np.concatenate([_WG[:-1], _WG[::-1]])


def _gk15(f, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    vals = np.asarray(f(mid + half * _NODES15), dtype=complex)
    if vals.shape != (15,):
        vals = np.broadcast_to(vals, (15,)).astype(complex)
    if not np.all(np.isfinite(vals)):
        raise ConvergenceError(f"integrand returned a non-finite value on [{a}, {b}]")
    kron = half * (vals @ _WK15)
    gauss = half * (vals @ _WG15)
    return kron, abs(kron - gauss)


def integrate_adaptive(f, a, b, spec=None):
    """Adaptive GK15 quadrature of a vectorized integrand.

    ``b = inf`` is handled by the truncation radius of ``spec`` when set
    (integration up to ``a + truncation_radius``), otherwise by the map
    t = a + u / (1 - u).  Returns ``(value, err_est)``.
    """
    spec = spec or QuadratureSpec()
    if math.isinf(b):
        if spec.truncation_radius is not None:
            return integrate_adaptive(f, a, a + spec.truncation_radius, spec)

        def g(u):
            u = np.asarray(u)
            t = a + u / (1.0 - u)
            return np.asarray(f(t)) / (1.0 - u) ** 2

        return integrate_adaptive(g, 0.0, 1.0, spec)
    value, err = _gk15(f, a, b)
    heap = [(-err, a, b, value, err)]
    total, total_err = value, err
    panels = 1
    while total_err > max(spec.abs_tol, spec.rel_tol * abs(total)):
        if panels >= spec.max_panels:
            raise ConvergenceError(
                f"adaptive quadrature did not converge in {spec.max_panels} panels "
                f"(error estimate {total_err:.3g})")
        _, lo, hi, v, e = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        total += v1 + v2 - v
        total_err += e1 + e2 - e
        heapq.heappush(heap, (-e1, lo, mid, v1, e1))
        heapq.heappush(heap, (-e2, mid, hi, v2, e2))
        panels += 1
    # recompute from the leaves to remove accumulated rounding in the update
    total = sum(item[3] for item in heap)
    total_err = sum(item[4] for item in heap)
    return complex(total), float(total_err)


# ---------------------------------------------------------------------------
# Filon rule for e^{i omega x}

def _filon_moments(omega, h):
    """Moments int_{-h}^{h} s^k e^{i omega s} ds for k = 0, 1, 2."""
    omega = np.asarray(omega, dtype=float)
    wh = omega * h
    small = np.abs(wh) < 0.2
    om = np.where(small, 1.0, omega)
    s, c = np.sin(om * h), np.cos(om * h)
    m0 = 2 * s / om
    m1 = 2j * (s / om**2 - h * c / om)
    m2 = 2 * (h * h * s / om + 2 * h * c / om**2 - 2 * s / om**3)
    # Taylor series in omega for small omega h (terms up to omega^8)
    w2 = omega * omega
    t0 = 2 * h * (1 - w2 * h**2 / 6 + w2**2 * h**4 / 120 - w2**3 * h**6 / 5040
                  + w2**4 * h**8 / 362880)
    t1 = 2j * omega * h**3 * (1 / 3 - w2 * h**2 / 30 + w2**2 * h**4 / 840
                              - w2**3 * h**6 / 45360)
    t2 = 2 * h**3 * (1 / 3 - w2 * h**2 / 10 + w2**2 * h**4 / 168
                     - w2**3 * h**6 / 6480 + w2**4 * h**8 / 443520)
    return (np.where(small, t0, m0), np.where(small, t1, m1), np.where(small, t2, m2))


def filon_weights(x0, h, n, omega):
    """Weight matrix ``W`` with ``W @ g ~ int g(x) e^{i omega x} dx``.

    The samples ``g`` sit on the uniform grid ``x0 + h * arange(n)``, ``n``
    odd; each pair of cells is a panel on which ``g`` is interpolated by a
    quadratic and the oscillatory factor is integrated exactly.  ``omega``
    may be an array; the result has shape ``(len(omega), n)``.
    """
    if n < 3 or n % 2 == 0:
        raise InvalidConfigError("Filon rule needs an odd number (>= 3) of samples")
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    m0, m1, m2 = _filon_moments(omega, h)
    # local quadratic through (-h, g0), (0, g1), (h, g2):
    #   q(s) = g1 + (g2 - g0) s / (2h) + (g0 - 2 g1 + g2) s^2 / (2h^2)
    w_left = -m1 / (2 * h) + m2 / (2 * h * h)
    w_mid = m0 - m2 / (h * h)
    w_right = m1 / (2 * h) + m2 / (2 * h * h)
    W = np.zeros((omega.size, n), dtype=complex)
    centers = np.arange(1, n - 1, 2)
    for c in centers:
        phase = np.exp(1j * omega * (x0 + c * h))
        W[:, c - 1] += phase * w_left
        W[:, c] += phase * w_mid
        W[:, c + 1] += phase * w_right
    return W


def filon_linear(g, x0, h, omega):
    """Filon approximation of int g(x) e^{i omega x} dx on a uniform odd grid."""
    g = np.asarray(g)
    W = filon_weights(x0, h, g.shape[0], omega)
    out = W @ g
    return out[0] if np.ndim(omega) == 0 else out


# ---------------------------------------------------------------------------
# Hankel loop

def _default_cutoff(c, angle, radius):
    decay = min(abs(c) * math.cos(cmath_arg(c) + angle), abs(c) * math.cos(cmath_arg(c) - angle))
    return max(radius * 2.0, 50.0 / decay)


def cmath_arg(z):
    return math.atan2(z.imag, z.real)


def integrate_hankel_loop(exponent, c, spec=None, panels=None):
    """Loop integral of u^{exponent} e^{-c (u + 1/u)} around the origin.

    The path comes in from ``outer_cutoff`` along the ray arg u = -phi, goes
    clockwise around the circle |u| = loop_radius and leaves along the ray
    of geometric angle +phi, on which arg u = -2 pi + phi.  The power is
    taken continuously along the path.  For exponent = -1 - nu this equals
    -2 pi i e^{i pi nu} I_nu(2c), which reduces to -2 pi i I_nu(2c) for
    integer nu.
    """
    c = complex(c)
    if c.real <= 0:
        raise DomainError("the Hankel loop needs Re c > 0")
    spec = spec or ContourSpec()
    phi, r = spec.ray_angle, spec.loop_radius
    if math.cos(cmath_arg(c) + phi) <= 0 or math.cos(cmath_arg(c) - phi) <= 0:
        raise DomainError("rays leave the decay region of e^{-c u}; reduce ray_angle")
    big = spec.outer_cutoff or _default_cutoff(c, phi, r)
    p = complex(exponent)

    def power(rho, arg):
        return np.exp(p * (np.log(rho) + 1j * arg))

    def expo(u):
        return np.exp(-c * (u + 1.0 / u))

    span = math.log(big / r)
    npan = panels or int(math.ceil(4 * span + 2 * abs(c) * big / 10)) + 8
    # radial pieces in log variable rho = e^w, du = u dw
    w, ww = composite_gauss_legendre(math.log(r), math.log(big), npan)
    rho = np.exp(w)
    u_in = rho * np.exp(-1j * phi)
    u_out = rho * np.exp(1j * phi)
    incoming = -np.sum(ww * power(rho, -phi) * expo(u_in) * u_in)
    outgoing = np.sum(ww * power(rho, -2 * math.pi + phi) * expo(u_out) * u_out)
    # circle, clockwise from arg -phi to arg -2 pi + phi
    apan = int(math.ceil(8 + 2 * abs(c) / r + 2 * abs(p))) + 4
    th, wth = composite_gauss_legendre(-phi, -2 * math.pi + phi, apan)
    u_c = r * np.exp(1j * th)
    circle = np.sum(wth * power(r, th) * expo(u_c) * 1j * u_c)
    return complex(incoming + circle + outgoing)


# ---------------------------------------------------------------------------
# epsilon-regularized limits

def neville_zero(eps, values):
    """Polynomial extrapolation to eps = 0; returns the Neville tableau diagonal."""
    eps = np.asarray(eps, dtype=float)
    table = [np.asarray(values, dtype=complex).copy()]
    diag = [table[0][0]]
    for k in range(1, len(eps)):
        prev = table[-1]
        nxt = np.empty(len(prev) - 1, dtype=complex)
        for i in range(len(nxt)):
            nxt[i] = (eps[i + k] * prev[i] - eps[i] * prev[i + 1]) / (eps[i + k] - eps[i])
        table.append(nxt)
        diag.append(nxt[-1])
    # diag[k] uses eps[0..k]; the last extrapolant uses all points
    extrapolants = [t[-1] for t in table]
    return extrapolants


def regularized_limit(family, spec=None, strict=False):
    """Richardson (polynomial) extrapolation of ``family(eps)`` to eps -> 0.

    Returns ``(value, err_est)`` with the error estimated from the last two
    extrapolants.  With ``strict=True`` a growing difference between
    successive extrapolants raises :class:`ConvergenceError`.
    """
    spec = spec or QuadratureSpec()
    eps = spec.eps_schedule
    if len(eps) < 3:
        raise InvalidConfigError("eps_schedule needs at least three entries")
    vals = [complex(family(e)) for e in eps]
    ext = neville_zero(eps, vals)
    diffs = [abs(ext[k] - ext[k - 1]) for k in range(1, len(ext))]
    err = diffs[-1]
    if strict and len(diffs) >= 2 and diffs[-1] > diffs[-2] and \
            err > max(spec.abs_tol, spec.rel_tol * abs(ext[-1])):
        raise ConvergenceError(f"extrapolants diverge (last differences {diffs[-2]:.3g}, {diffs[-1]:.3g})")
    return complex(ext[-1]), float(err)


# ---------------------------------------------------------------------------
# mollified delta testing

def mollified_delta_test(kernel, weight, test_fn, support, spec=None, n=201,
                         pad=0.6, nodes=None):
    """Apply a kernel to a test function and compare with the function itself.

    Computes r(q) = int K(q, q') w(q, q') g(q') dq' on ``n`` uniform points of
    ``support`` and returns ``(GridFunction(r), relative L2 error on support)``.
    ``kernel(q, qp)`` and ``weight(q, qp)`` are evaluated on 2D broadcast
    arrays; the q' integral runs over the support widened by ``pad`` using a
    composite Gauss-Legendre rule (or the supplied ``nodes=(x, w)``).
    """
    lo, hi = support
    q = np.linspace(lo, hi, n)
    if nodes is None:
        panels = int(math.ceil((hi - lo + 2 * pad) * 6))
        qp, wq = composite_gauss_legendre(lo - pad, hi + pad, panels)
        qp, wq = qp[qp > 0], wq[qp > 0]
    else:
        qp, wq = nodes
    K = np.asarray(kernel(q[:, None], qp[None, :]))
    W = np.asarray(weight(q[:, None], qp[None, :]))
    r = (K * W) @ (wq * test_fn(qp))
    g = test_fn(q)
    err = _l2_rel(r, g, q)
    out = GridFunction("line", float(lo), float(q[1] - q[0]), 0.0, 1.0, r)
    return out, err


def _l2_rel(r, g, x):
    diff = np.trapezoid(np.abs(r - g) ** 2, x)
    ref = np.trapezoid(np.abs(g) ** 2, x)
    return float(math.sqrt(diff / ref))
