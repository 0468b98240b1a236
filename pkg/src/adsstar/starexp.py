"""Star-exponentials: closed forms for lambda_H, lambda_E and the coordinate
symbols, the spectral Bessel form for lambda_F, and the group-level form
through the principal series of SL(2, R).

Left star-multiplication by the moment maps becomes a first-order operator
in the first hat variable xw of the Phi chart:

    lambda_H *  ->  i theta d/dxw,        lambda_E *  ->  (kappa/2) e^{-2 xw},

which is how the closed forms below are obtained and checked.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError, GridMismatchError, InvalidConfigError, PoleError
from .geometry import GroupElement, bch_pair, moment_maps, sigma
from .grid import linspace_grid, require_chart
from .quadrature import QuadratureSpec, composite_gauss_legendre, neville_zero
from .specfun import spectral_A
from .starprod import smooth_window, star_direct

__all__ = ["starexp_H", "starexp_E", "starexp_affine", "starexp_coord", "coord_hat_factor",
           "coord_compose_check", "spectral_s_integral", "starexp_F_bessel",
           "SubstitutionOperator", "principal_series_apply", "half_cell_line",
           "group_starexp_apply", "group_starexp_kernel", "ode_residual", "bch_windowed_error"]

def _phi_grid(func, alim, llim, n):
    """Phi-chart grid with n points per axis, or n = (na, nl)."""
    na, nl = (n, n) if np.isscalar(n) else n
    return linspace_grid("phi", func, alim, na, llim, nl)


# ---------------------------------------------------------------------------
# closed forms on the Phi chart

def starexp_H(t, params, alim=(-3.0, 3.0), llim=(-3.0, 3.0), n=256):
    """E((i/theta) t lambda_H)(a, l) = exp(i (kappa/theta) t l)."""
    w = params.kappa / params.theta * t
    return _phi_grid(lambda A, L: np.exp(1j * w * L) + 0 * A, alim, llim, n)


def starexp_E(t, params, alim=(-3.0, 3.0), llim=(-3.0, 3.0), n=256):
    """E((i/theta) t lambda_E)(a, l) = exp(i (kappa/(2 theta)) t e^{-2a})."""
    w = 0.5 * params.kappa / params.theta * t
    return _phi_grid(lambda A, L: np.exp(1j * w * np.exp(-2 * A)) + 0 * L, alim, llim, n)


def _sinhc(x):
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    xs = np.where(small, 1.0, x)
    return np.where(small, 1 + x * x / 6, np.sinh(xs) / xs)


def starexp_affine(t, alpha, beta, params, alim=(-3.0, 3.0), llim=(-3.0, 3.0), n=256):
    """E((i/theta) t (alpha lambda_H + beta lambda_E)) in closed form.

    In the hat picture the generator is -alpha d/dxw + (i beta kappa/(2 theta))
    e^{-2 xw}; integrating along its characteristics from the unit gives

        exp(i (kappa/theta) alpha t l + i (beta kappa/(2 theta)) t e^{-2a} sinh(alpha t)/(alpha t)).

    It reduces to :func:`starexp_H` and :func:`starexp_E` for beta = 0 or
    alpha = 0 and is the oracle for the BCH property of the (H, E) pair.
    """
    k, th = params.kappa, params.theta
    ph = float(beta * k / (2 * th) * t * _sinhc(alpha * t))
    return _phi_grid(lambda A, L: np.exp(1j * (k / th) * alpha * t * L + 1j * ph * np.exp(-2 * A)),
                     alim, llim, n)


def _coord_root(z):
    """z + sqrt(1 + z^2) computed without cancellation for z < 0."""
    z = np.asarray(z, dtype=float)
    r = np.sqrt(1 + z * z)
    return np.where(z >= 0, z + r, 1.0 / (r - z))


def starexp_coord(t, p, q, beta_prime, params, alim=(-3.0, 3.0), llim=(-3.0, 3.0), n=256):
    """E(t p (l + beta') e^{2a} + t (sqrt(kappa)/2) q e^{-2a}) for star0.

    With z = (p t/kappa) e^{2a} and R = z + sqrt(1 + z^2) the printed closed
    form is

        (1 + 2 z R)/(1 + z R) * exp(i (kappa/theta) l log R) * R^{-1 + i beta' kappa/theta}
            * exp(i q sqrt(kappa)/(2 theta) (t e^{-2a}/R + p t^2/kappa)).
    """
    k, th = params.kappa, params.theta

    def f(A, L):
        z = p * t / k * np.exp(2 * A)
        R = _coord_root(z)
        amp = (1 + 2 * z * R) / (1 + z * R)
        logR = np.log(R)
        return (amp * np.exp(1j * (k / th) * L * logR)
                * np.exp((-1 + 1j * beta_prime * k / th) * logR)
                * np.exp(1j * q * math.sqrt(k) / (2 * th) * (t * np.exp(-2 * A) / R + p * t * t / k)))

    return _phi_grid(f, alim, llim, n)


def coord_hat_factor(t, p, q, beta_prime, params, xw):
    """Left multiplier of the coordinate star-exponential in the hat picture.

    Returns ``(rho, xw_flow)`` with (E * f^)(xw, yw) = rho(xw) f^(xw_flow, yw),
    where, with Z = e^{2 xw},

        xw_flow = (1/2) log(Z / (1 + 2 p t Z/kappa)),
        rho = (1 + 2 p t Z/kappa)^{-(1 - i beta' kappa/theta)/2}
              exp(i q sqrt(kappa)/(2 theta) (t/Z + p t^2/kappa)).

    Points where 1 + 2 p t Z/kappa <= 0 have left the chart along the flow
    and raise :class:`DomainError`.
    """
    k, th = params.kappa, params.theta
    xw = np.asarray(xw, dtype=float)
    Z = np.exp(2 * xw)
    den = 1 + 2 * p * t * Z / k
    if np.any(den <= 0):
        raise DomainError("the coordinate flow leaves the chart before time t")
    flow = xw - 0.5 * np.log(den)
    rho = np.exp(-0.5 * (1 - 1j * beta_prime * k / th) * np.log(den)
                 + 1j * q * math.sqrt(k) / (2 * th) * (t / Z + p * t * t / k))
    return rho, flow


def coord_compose_check(pq1, pq2, beta_prime, params, xw):
    """Both sides of the BCH phase relation for coordinate star-exponentials.

    Left: the composition of the two hat multipliers (value at t = 1).
    Right: the multiplier of (p + p', q + q') times
    exp(i (p q' - p' q)/(2 theta sqrt(kappa))).  Returns ``(lhs_rho, rhs_rho,
    lhs_flow, rhs_flow)`` as arrays over ``xw``.
    """
    (p1, q1), (p2, q2) = pq1, pq2
    r1, x1 = coord_hat_factor(1.0, p1, q1, beta_prime, params, xw)
    r2, x2 = coord_hat_factor(1.0, p2, q2, beta_prime, params, x1)
    r12, x12 = coord_hat_factor(1.0, p1 + p2, q1 + q2, beta_prime, params, xw)
    phase = np.exp(1j * (p1 * q2 - p2 * q1) / (2 * params.theta * math.sqrt(params.kappa)))
    return r1 * r2, r12 * phase, x2, x12


# ---------------------------------------------------------------------------
# spectral form

def _s_nodes(s_max, freq):
    """Gauss-Legendre nodes on (0, s_max]: geometric panels near 0, then uniform."""
    edges = [0.0] + [10.0 ** k for k in range(-6, 1)]
    xs, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        x, w = composite_gauss_legendre(lo, hi, 1)
        xs.append(x)
        ws.append(w)
    panels = int(math.ceil((s_max - 1.0) * max(freq, 1.0) / 2.0)) + 4
    x, w = composite_gauss_legendre(1.0, s_max, panels)
    xs.append(x)
    ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def spectral_s_integral(tau, alpha, beta, omega, spec=None, return_family=False):
    """int_0^inf e^{-i omega s^2} A_tau(alpha, s) A_tau(beta, s) s/(1 + 4 tau^2 s^2) ds.

    The integrand does not decay, so the integral is defined as the limit
    eps -> 0 of the same integral with e^{-(eps + i omega) s^2}, computed for
    the eps in ``spec.eps_schedule`` and extrapolated by Neville's scheme.
    Returns ``(value, err_est)``; with ``return_family=True`` also the list of
    regularized values.
    """
    spec = spec or QuadratureSpec()
    eps = spec.eps_schedule
    s_max = math.sqrt(38.0 / min(eps))
    freq = 2 * abs(omega) * s_max + alpha + beta + 2 * tau
    s, w = _s_nodes(s_max, freq)
    base = spectral_A(tau, alpha, s) * spectral_A(tau, beta, s) * s / (1 + 4 * tau * tau * s * s)
    base = base * w * np.exp(-1j * omega * s * s)
    vals = [complex(np.sum(base * np.exp(-e * s * s))) for e in eps]
    ext = neville_zero(eps, vals)
    value, err = complex(ext[-1]), float(abs(ext[-1] - ext[-2]))
    if return_family:
        return value, err, vals
    return value, err


def starexp_F_bessel(t, params, xw, yw, spec=None):
    """Kernel of E((i/theta) t lambda_F) in the Phi hat picture (spectral form).

    (4 pi/|theta|) e^{-xw-yw} int_0^inf e^{-i s^2 t/theta} A_nu(q(xw), s) A_nu(q(yw), s)
    s/(1 + 4 kappa s^2/theta^2) ds with nu = sqrt(kappa)/theta and
    q(x) = (sqrt(2 kappa)/theta) e^{-x}; the s-integral is eps-regularized.
    The spectral resolution is stated for theta > 0 (the arguments q must be
    positive), so negative theta raises :class:`DomainError`.
    Returns ``(value, err_est)``.
    """
    th = params.theta
    if th <= 0:
        raise DomainError("the spectral form of the lambda_F star-exponential needs theta > 0")
    c = math.sqrt(2 * params.kappa) / th
    val, err = spectral_s_integral(params.nu, c * math.exp(-xw), c * math.exp(-yw), t / th, spec)
    pref = 4 * math.pi / abs(th) * math.exp(-xw - yw)
    return pref * val, pref * err


# ---------------------------------------------------------------------------
# principal series and the group star-exponential

def half_cell_line(lo, hi, n):
    """(x0, dx) of an n-point grid on [lo, hi] with nodes at cell centres."""
    dx = (hi - lo) / n
    return lo + 0.5 * dx, dx


def _check_pole(den, scale):
    if np.any(np.abs(den) <= 1e-12 * scale):
        raise PoleError("Moebius pole on a grid node; offset the grid by half a cell")


def _substitute(values, x, g, exponent):
    """w(x) values(g.x) along axis 0, w = |-b x + d|^{exponent}, cubic interpolation."""
    den = -g.b * x + g.d
    _check_pole(den, abs(g.b) * np.abs(x).max() + abs(g.d))
    y = (g.a * x - g.c) / den
    spline = CubicSpline(x, values, axis=0, bc_type="clamped", extrapolate=False)
    sub = spline(y)
    sub = np.where(np.isnan(sub), 0.0, sub)
    weight = np.exp(exponent * np.log(np.abs(den)))
    return weight.reshape((-1,) + (1,) * (values.ndim - 1)) * sub


def principal_series_apply(g, mu, f):
    """(P^{+, i mu}(g) f)(x) = |-b x + d|^{-1 - i mu} f((a x - c)/(-b x + d)).

    ``f`` is a line GridFunction; values at off-grid Moebius images come
    from a clamped cubic spline and vanish outside the grid.
    """
    x = f.x
    vals = _substitute(f.values, x, g, -1 - 1j * mu)
    return f.with_values(vals)


@dataclass(frozen=True)
class SubstitutionOperator:
    """P^{+, i mu}(sigma(g)) (x) id, acting on the first hat variable.

    ``exponent`` is -1 - i mu = -1 + i sqrt(kappa)/theta.  The operator is
    the left star-multiplication by the group star-exponential E(g) on
    hat-psi kernels; its kernel is the distribution
    (2 pi theta/sqrt(kappa)) |a - c x|^{exponent} delta(y - (d x - b)/(a - c x)).
    """

    g: GroupElement
    exponent: complex
    side: str = "left"

    def __post_init__(self):
        if self.side != "left":
            raise DomainError("only left substitution operators are supported")

    @classmethod
    def for_group(cls, g, params):
        return cls(g, complex(-1.0, params.nu))

    def apply(self, k):
        require_chart(k, "hat-psi")
        return k.with_values(_substitute(k.values, k.x, sigma(self.g), self.exponent))

    def image(self, x):
        """(weight, target) of the delta kernel at first-variable points ``x``."""
        a, b, c, d = self.g.a, self.g.b, self.g.c, self.g.d
        x = np.asarray(x, dtype=float)
        den = a - c * x
        return np.exp(self.exponent * np.log(np.abs(den))), (d * x - b) / den

    def mollified(self, k_like, params, width=None):
        """Kernel sampled on the grid of ``k_like`` with the delta replaced by a Gaussian."""
        require_chart(k_like, "hat-psi")
        width = 3 * k_like.dy if width is None else width
        X, Y = k_like.mesh()
        w, target = self.image(X)
        c = 2 * math.pi * abs(params.theta) / math.sqrt(params.kappa)
        vals = c * w * np.exp(-((Y - target) / width) ** 2) / (width * math.sqrt(math.pi))
        return k_like.with_values(vals)

    def describe(self):
        g = self.g
        return {"g": [[g.a, g.b], [g.c, g.d]], "exponent": [self.exponent.real, self.exponent.imag],
                "kernel": "(2 pi theta/sqrt(kappa)) |a - c x|^exponent delta(y - (d x - b)/(a - c x))"}


def group_starexp_apply(g, k, params):
    """E(g) *^ k for a hat-psi kernel k, as the principal series in the first variable."""
    return SubstitutionOperator.for_group(g, params).apply(k)


def group_starexp_kernel(g, params):
    """Descriptor of the group star-exponential E(g) (a distributional kernel)."""
    return SubstitutionOperator.for_group(g, params)


# ---------------------------------------------------------------------------
# defining-equation residuals

def _generator(generator, params, A, L):
    if isinstance(generator, str):
        lh, le, lf = moment_maps("phi", params.kappa, A, L)
        try:
            return {"H": lh, "E": le, "F": lf}[generator]
        except KeyError:
            raise DomainError(f"unknown generator {generator!r}") from None
    kind, p, q, beta_prime = generator
    if kind != "coord":
        raise DomainError(f"unknown generator {generator!r}")
    return p * (L + beta_prime) * np.exp(2 * A) + 0.5 * math.sqrt(params.kappa) * q * np.exp(-2 * A)


def _a_margin(params, edge):
    return max(5 * abs(params.theta) / (params.kappa * edge), 1.5)


def ode_residual(candidates, times, generator, params, edge=None):
    """Windowed max-norm residual of d/dt u = (i/theta) lambda *0 u.

    ``candidates`` are three Phi-chart GridFunctions sampled at the equally
    spaced ``times``; the time derivative is a central difference at the
    middle time.  The generator and the candidate are multiplied by a window
    in the second variable (erf ramps of width ``edge``, default 1/10 of the
    extent) and the product is :func:`star_direct`.  In the first variable
    no window is used: the l-window confines the product to first-variable
    offsets below m = 5 |theta|/(kappa edge), so the grid edges in a do not
    reach the comparison region (m is kept at least 1.5: the generators grow
    like e^{2 |a|}, which amplifies the window tails near the a-edges).  The residual is the max over the region
    where the window is flat (8 edges inside in l) and at least m away from
    the a-edges.  ``generator`` is 'H', 'E', 'F' or ('coord', p, q, beta').
    """
    if len(candidates) != 3 or len(times) != 3:
        raise GridMismatchError("ode_residual needs candidates at three times")
    t0, t1, t2 = times
    if abs((t2 - t1) - (t1 - t0)) > 1e-12 * max(1.0, abs(t2 - t0)):
        raise GridMismatchError("times must be equally spaced")
    u0, u1, u2 = candidates
    for u in candidates:
        require_chart(u, "phi")
        if not u.same_grid(u1):
            raise GridMismatchError("candidates live on different grids")
    A, L = u1.mesh()
    alo, ahi = u1.x[0], u1.x[-1]
    llo, lhi = u1.y[0], u1.y[-1]
    el = (lhi - llo) / 10 if edge is None else edge
    margin = _a_margin(params, el)
    mask = ((A >= alo + margin) & (A <= ahi - margin)
            & (L >= llo + 8 * el) & (L <= lhi - 8 * el))
    if not mask.any():
        raise InvalidConfigError("grid too small for the window: no comparison region left")
    win = smooth_window(L, llo, lhi, el)
    lam = u1.with_values(_generator(generator, params, A, L) * win)
    prod = star_direct("star0", lam, u1.with_values(u1.values * win), params)
    dudt = (u2.values - u0.values) / (t2 - t0) * win
    res = dudt - 1j / params.theta * prod.values
    return float(np.abs(res[mask]).max())


def bch_windowed_error(alpha, ell, params, alim=(-2.5, 2.5), na=161, llim=(-30.0, 30.0), nl=256,
                       edge=3.0):
    """Max deviation of E(alpha H) *0 E(ell E) from E(BCH(alpha H, ell E)).

    Both factors are windowed in l as in :func:`ode_residual` and compared
    on the same region; the right-hand side is :func:`starexp_affine` with
    the closed BCH coefficients.
    """
    X = bch_pair("HE", alpha, ell)
    f1 = linspace_grid("phi", lambda A, L: np.exp(1j * params.kappa / params.theta * alpha * L) + 0 * A,
                       alim, na, llim, nl)
    f2 = linspace_grid("phi", lambda A, L: np.exp(0.5j * params.kappa / params.theta * ell * np.exp(-2 * A))
                       + 0 * L, alim, na, llim, nl)
    A, L = f1.mesh()
    k, th = params.kappa, params.theta
    ph = X.e * k / (2 * th) * float(_sinhc(X.h))
    rhs = np.exp(1j * (k / th) * X.h * L + 1j * ph * np.exp(-2 * A))
    win = smooth_window(L, llim[0], llim[1], edge)
    prod = star_direct("star0", f1.with_values(f1.values * win), f2.with_values(f2.values * win), params)
    margin = _a_margin(params, edge)
    mask = ((A >= alim[0] + margin) & (A <= alim[1] - margin)
            & (L >= llim[0] + 8 * edge) & (L <= llim[1] - 8 * edge))
    return float(np.abs(prod.values - rhs * win)[mask].max())
