"""Intertwiners between the star-products and between representations.

* W_eps maps Psi-chart functions (sharp product) to Phi-chart functions
  (star1 product with parameter eps theta); W = W+ (+) W- collects both signs.
* J_eps intertwines the induced representations U1_eps of the group
  S = exp(RH) exp(RE) on L^2(R, da) with the representation U on
  L^2(R, dq) coming from the Psi-chart action.
* script_T carries hat-psi kernels to hat-phi kernels.
* multiplier_image gives the closed-form images of the moment maps and of
  the Psi coordinates under W_eps.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError, InvalidConfigError, ShiftOutOfGridError
from .geometry import moment_maps
from .grid import GridFunction, linspace_grid, require_chart
from .identities import mellin_oscillatory
from .quadrature import filon_weights
from .starexp import SubstitutionOperator

__all__ = ["WParams", "w_eps_apply", "w_eps_rows", "w_full", "two_copy_norms", "j_eps_apply",
           "u1_rep", "u_rep", "script_T_apply", "multiplier_image",
           "psi_symbol"]


@dataclass(frozen=True)
class WParams:
    """Sign eps of the copy and the free intertwiner parameter beta (default -1)."""

    eps: int = 1
    beta: float = -1.0

    def __post_init__(self):
        if self.eps not in (1, -1):
            raise InvalidConfigError("eps must be +1 or -1")
        if not math.isfinite(self.beta):
            raise InvalidConfigError("beta must be finite")


# ---------------------------------------------------------------------------
# W_eps

def _trapezoid_weights(n, h):
    w = np.full(n, h)
    w[0] = w[-1] = 0.5 * h
    return w


def w_eps_rows(f, wp, params, a_vals, l_rows, eta_step=None):
    """W_eps(f) at the points (a_vals[i], l_rows[i, j]).

    W_eps(f)(a, l) = (kappa/(2 pi theta)) e^{-2a} int (1 + eta^2)^{-1/4}
        |sqrt(1 + eta^2) + eta|^{i beta sqrt(kappa)/theta}
        e^{i (kappa eps/theta) eta (l - e^{-2a} q)} f(q, (sqrt(kappa) eps/2) e^{-2a} sqrt(1 + eta^2)) d eta dq

    The q-integral is a Fourier sum of f (cubic spline in y) at the
    frequency (kappa eps/theta) eta e^{-2a}; the eta-integral carries the
    linear phase in l and is done with the Filon rule.  eta is truncated
    where the y-argument leaves the grid of f; the size of f on the
    boundary row is returned as the truncation indicator.
    Returns ``(values, truncation)``.
    """
    require_chart(f, "psi")
    eps, th, ka = wp.eps, params.theta, params.kappa
    rk = math.sqrt(ka)
    a_vals = np.atleast_1d(np.asarray(a_vals, dtype=float))
    l_rows = np.asarray(l_rows, dtype=float).reshape(a_vals.size, -1)
    q, y = f.x, f.y
    dq = _trapezoid_weights(f.nx, f.dx)
    spline = CubicSpline(y, f.values, axis=1)
    ymax = y[-1] if eps > 0 else -y[0]
    scale = np.abs(f.values).max()
    edge = np.abs(f.values[:, -1 if eps > 0 else 0]).max()
    truncation = float(edge / scale) if scale > 0 else 0.0
    out = np.zeros(l_rows.shape, dtype=complex)
    if ymax <= 0:
        return out, truncation
    qext = q[-1] - q[0]
    for i, a in enumerate(a_vals):
        s = math.exp(-2 * a)
        r = 2 * ymax / (rk * s)
        if r <= 1:
            continue
        eta_max = math.sqrt(r * r - 1)
        # resolve f in y and its Fourier transform in q along the eta path
        step = min(f.dy / (rk * s), abs(th) * math.pi / (2 * ka * s * qext))
        if eta_step is not None:
            step = min(step, eta_step)
        n = max(65, 2 * int(math.ceil(eta_max / step)) + 1)
        eta = np.linspace(-eta_max, eta_max, n)
        root = np.sqrt(1 + eta * eta)
        yk = 0.5 * rk * eps * s * root
        fy = spline(np.clip(yk, y[0], y[-1]))
        omega = ka * eps / th * eta * s
        G = np.einsum("qk,qk->k", fy * dq[:, None], np.exp(-1j * np.outer(q, omega)))
        amp = root ** -0.5 * np.exp(1j * wp.beta * rk / th * np.arcsinh(eta))
        W = filon_weights(-eta_max, eta[1] - eta[0], n, ka * eps / th * l_rows[i])
        out[i] = ka / (2 * math.pi * th) * s * (W @ (amp * G))
    return out, truncation


def w_eps_apply(f, wp, params, alim=(-2.0, 2.0), na=129, llim=(-16.0, 16.0), nl=128, eta_step=None):
    """W_eps(f) sampled on a Phi-chart grid (see :func:`w_eps_rows`).

    The truncation indicator is stored in ``meta['w_truncation']``.
    """
    g = linspace_grid("phi", lambda A, L: 0 * A, alim, na, llim, nl)
    A, L = g.mesh()
    vals, trunc = w_eps_rows(f, wp, params, g.x, L, eta_step)
    return g.with_values(vals, w_truncation=trunc, eps=wp.eps)


def w_full(f, params, beta=-1.0, **grid):
    """The pair (W+ f, W- f)."""
    return (w_eps_apply(f, WParams(1, beta), params, **grid),
            w_eps_apply(f, WParams(-1, beta), params, **grid))


def two_copy_norms(f, pair, params):
    """(||f||^2, ||W+ f||^2 + ||W- f||^2) with the Liouville measures."""
    nf = math.sqrt(params.kappa) * f.dx * f.dy * float(np.sum(np.abs(f.values) ** 2))
    nw = sum(params.kappa * w.dx * w.dy * float(np.sum(np.abs(w.values) ** 2)) for w in pair)
    return nf, nw


# ---------------------------------------------------------------------------
# J_eps and the representations

def j_eps_apply(psi, eps, params, direction="forward", out=None):
    """J_eps or its adjoint on line functions.

    Forward:  (J psi)(q0) = N int e^{-i (kappa eps/(2 theta)) e^{-2 a0} q0} e^{-a0} psi(a0) d a0,
    adjoint:  (J* phi)(a0) = N e^{-a0} int e^{i (kappa eps/(2 theta)) e^{-2 a0} q0} phi(q0) d q0,
    with N = sqrt(kappa/(2 pi theta)).  ``out = (x0, dx, n)`` sets the output
    grid (default: the input grid).  The integrals are trapezoid sums; the
    size of the integrand at the input edges relative to its maximum is
    stored in ``meta['edge_ratio']``.
    """
    require_chart(psi, "line")
    if eps not in (1, -1):
        raise InvalidConfigError("eps must be +1 or -1")
    th, ka = params.theta, params.kappa
    N = math.sqrt(ka / (2 * math.pi * abs(th)))
    x0, dx, n = out if out is not None else (psi.x0, psi.dx, psi.nx)
    xo = x0 + dx * np.arange(n)
    xi = psi.x
    w = _trapezoid_weights(psi.nx, psi.dx)
    c = ka * eps / (2 * th)
    v = psi.line()
    if direction == "forward":
        integrand = np.exp(-xi) * v
        M = np.exp(-1j * c * np.outer(xo, np.exp(-2 * xi)))
        vals = N * (M @ (w * integrand))
    elif direction == "adjoint":
        integrand = v
        M = np.exp(1j * c * np.outer(np.exp(-2 * xo), xi))
        vals = N * np.exp(-xo) * (M @ (w * integrand))
    else:
        raise InvalidConfigError(f"unknown direction {direction!r}")
    mag = np.abs(integrand)
    ratio = float(max(mag[0], mag[-1]) / mag.max()) if mag.max() > 0 else 0.0
    return GridFunction("line", float(x0), float(dx), 0.0, 1.0, vals, {"edge_ratio": ratio})


def _shifted(phi, points):
    spline = CubicSpline(phi.x, phi.line(), bc_type="clamped", extrapolate=False)
    vals = spline(points)
    return np.where(np.isnan(vals), 0.0, vals)


def u1_rep(eps, a, l, phi, params):
    """U1_eps(a, l) phi(a0) = e^{i (kappa eps/(2 theta)) e^{2 (a - a0)} l} phi(a0 - a).

    Off-node values come from a clamped cubic spline and vanish outside the
    grid.  A shift at least as large as the grid extent is rejected.
    """
    require_chart(phi, "line")
    if abs(a) >= phi.x[-1] - phi.x[0]:
        raise ShiftOutOfGridError(f"shift {a} moves the function off its grid")
    a0 = phi.x
    phase = np.exp(1j * params.kappa * eps / (2 * params.theta) * np.exp(2 * (a - a0)) * l)
    return phi.with_values(phase * _shifted(phi, a0 - a))


def u_rep(a, l, phi):
    """U(a, l) phi(q0) = e^{-a} phi(e^{-2a} q0 - l), the representation of S on L^2(R, dq).

    It is the one induced by the Psi-chart action (x, y) -> ((x + l) e^{2a}, y e^{-2a}),
    and J_eps (U1+ (+) U1-)(a, l) = U(a, l) J_eps.
    """
    require_chart(phi, "line")
    return phi.with_values(math.exp(-a) * _shifted(phi, math.exp(-2 * a) * phi.x - l))


# ---------------------------------------------------------------------------
# script T

def _t_prefactor(params, X, Y):
    nu = math.sqrt(params.kappa) / params.theta
    return np.exp(-X - Y) * np.exp(-1j * nu * (X - Y))


def _script_t_grid(k, params, xh, yh):
    th, ka = params.theta, params.kappa
    c = ka / (2 * th)
    E1 = np.exp(1j * c * np.outer(np.exp(-2 * xh), k.x)) * _trapezoid_weights(k.nx, k.dx)
    E2 = np.exp(-1j * c * np.outer(k.y, np.exp(-2 * yh))) * _trapezoid_weights(k.ny, k.dy)[:, None]
    X, Y = np.meshgrid(xh, yh, indexing="ij")
    pref = math.sqrt(ka) / (2 * math.pi * abs(th))
    return pref * _t_prefactor(params, X, Y) * (E1 @ k.values @ E2)


def _script_t_substitution(op, params, X, Y, width):
    th, ka = params.theta, params.kappa
    g = op.g
    nu = math.sqrt(ka) / th
    if abs(complex(op.exponent) - complex(-1.0, nu)) > 1e-12 * max(1.0, abs(nu)):
        raise DomainError("script T is reduced in closed form for the exponent -1 + i sqrt(kappa)/theta")
    if g.c == 0:
        # (2 pi |theta|/kappa) e^{i kappa b e^{-2 y}/(2 theta a)} delta(x - y - log|a|), mollified
        shift = X - Y - math.log(abs(g.a))
        delta = np.exp(-(shift / width) ** 2) / (width * math.sqrt(math.pi))
        phase = np.exp(1j * ka * g.b * np.exp(-2 * Y) / (2 * th * g.a))
        return 2 * math.pi * abs(th) / ka * phase * delta, np.zeros(X.shape)
    # with w = a - c x and w = e^{x - y} v the x-integral becomes I(nu, lam)
    vals = np.empty(X.shape, dtype=complex)
    errs = np.empty(X.shape)
    for idx in np.ndindex(X.shape):
        x, y = X[idx], Y[idx]
        lam = -ka * math.exp(-x - y) / (2 * th * g.c)
        I, err = mellin_oscillatory(nu, lam)
        pref = (math.exp(-x - y) / abs(g.c)
                * np.exp(1j * ka / (2 * th * g.c) * (g.a * math.exp(-2 * x) + g.d * math.exp(-2 * y))))
        vals[idx] = pref * I
        errs[idx] = abs(pref) * err
    return vals, errs


def script_T_apply(k, params, xlim=(-2.0, 2.0), n=65, points=None, width=None):
    """script T(k)(x, y) = (sqrt(kappa)/(2 pi theta)) e^{-x-y} e^{-i (sqrt(kappa)/theta)(x - y)}
    int e^{i (kappa/(2 theta)) (e^{-2x} xw - e^{-2y} yw)} k(xw, yw) dxw dyw.

    ``k`` is a hat-psi GridFunction (the double integral is a trapezoid
    sum) or a :class:`SubstitutionOperator`, whose delta kernel
    (2 pi theta/sqrt(kappa)) |a - c xw|^{-1 + i nu} delta(yw - (d xw - b)/(a - c xw))
    integrates out; for c != 0 the remaining integral is reduced to
    I(nu, -kappa e^{-x-y}/(2 theta c)) (see :func:`mellin_oscillatory`),
    for c = 0 the image is again a delta, returned mollified by a Gaussian
    of the given ``width``.

    Output: a hat-phi GridFunction on the square grid ``xlim`` x ``xlim``
    with ``n`` points, or, with ``points=(X, Y)``, the array of values (and
    for operator input an error-estimate array in ``meta``-free form: the
    pair ``(values, err)``).
    """
    if points is not None:
        X, Y = np.broadcast_arrays(np.asarray(points[0], dtype=float), np.asarray(points[1], dtype=float))
    else:
        h = (xlim[1] - xlim[0]) / (n - 1)
        xs = xlim[0] + h * np.arange(n)
        X, Y = np.meshgrid(xs, xs, indexing="ij")
    if isinstance(k, SubstitutionOperator):
        if width is None:
            width = 3 * (X.max() - X.min()) / max(X.shape[0] - 1, 1) if X.size > 1 else 0.05
        vals, errs = _script_t_substitution(k, params, X, Y, width)
        if points is not None:
            return vals, errs
        return GridFunction("hat-phi", xlim[0], h, xlim[0], h, vals, {"quad_err": float(errs.max())})
    require_chart(k, "hat-psi")
    if points is not None:
        xu, xi = np.unique(X, return_inverse=True)
        yu, yi = np.unique(Y, return_inverse=True)
        full = _script_t_grid(k, params, xu, yu)
        return full[xi.reshape(X.shape), yi.reshape(Y.shape)]
    vals = _script_t_grid(k, params, xs, xs)
    return GridFunction("hat-phi", xlim[0], h, xlim[0], h, vals)


# ---------------------------------------------------------------------------
# closed-form images

def multiplier_image(X, wp, params):
    """Closed-form W_eps image of a moment map or Psi coordinate, as a function of (a, l).

    W(lambda_H) = kappa eps l + sqrt(kappa)(1 + beta)
    W(lambda_E) = (kappa/2) eps e^{-2a}
    W(lambda_F) = (1/2) e^{2a} ((theta^2/(2 kappa) - 2 beta - beta^2) eps - 2 sqrt(kappa)(1 + beta) l - kappa eps l^2)
    and, for beta = -1, W(x) = e^{2a}(l - eps/sqrt(kappa)), W(y) = (sqrt(kappa)/2) eps e^{-2a}.
    """
    eps, beta = wp.eps, wp.beta
    th, ka = params.theta, params.kappa
    rk = math.sqrt(ka)
    if X == "H":
        return lambda A, L: ka * eps * np.asarray(L) + rk * (1 + beta) + 0 * np.asarray(A)
    if X == "E":
        return lambda A, L: 0.5 * ka * eps * np.exp(-2 * np.asarray(A)) + 0 * np.asarray(L)
    if X == "F":
        const = (th * th / (2 * ka) - 2 * beta - beta * beta) * eps
        return lambda A, L: 0.5 * np.exp(2 * np.asarray(A)) * (
            const - 2 * rk * (1 + beta) * np.asarray(L) - ka * eps * np.asarray(L) ** 2)
    if X in ("x", "y"):
        if beta != -1:
            raise DomainError("coordinate images are closed-form only for beta = -1")
        if X == "x":
            return lambda A, L: np.exp(2 * np.asarray(A)) * (np.asarray(L) - eps / rk)
        return lambda A, L: 0.5 * rk * eps * np.exp(-2 * np.asarray(A)) + 0 * np.asarray(L)
    raise DomainError(f"unknown multiplier {X!r}")


def psi_symbol(X, kappa):
    """The Psi-chart function whose W-image :func:`multiplier_image` describes."""
    if X in ("H", "E", "F"):
        i = "HEF".index(X)
        return lambda x, y: moment_maps("psi", kappa, x, y)[i]
    if X == "x":
        return lambda x, y: np.asarray(x, dtype=float) + 0 * np.asarray(y)
    if X == "y":
        return lambda x, y: np.asarray(y, dtype=float) + 0 * np.asarray(x)
    raise DomainError(f"unknown multiplier {X!r}")
