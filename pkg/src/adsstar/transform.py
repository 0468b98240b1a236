"""Hat transform (partial Fourier transform + shear) and the intertwiner T01.

Hat grids.  For a position grid with spacing ``dx`` in the first variable the
hatted kernel lives on the square grid x_i = x0 + 2 i dx.  Then the midpoint
(x_i + y_j)/2 = x0 + (i + j) dx is a node of the position grid, so the shear
is exact and no interpolation is needed.  The forward transform is a direct
Fourier sum at the required frequencies; the inverse sums along
anti-diagonals, where x - y steps by twice the hat spacing.  Round trips are
therefore accurate wherever the anti-diagonal through a point covers the
decay of the kernel in x - y, i.e. away from the corners of the grid.
"""
import math

import numpy as np

from .errors import AliasingError, ChartMismatchError
from .grid import GridFunction, require_chart

_HAT_OF = {"phi": "hat-phi", "psi": "hat-psi"}
_POS_OF = {"hat-phi": "phi", "hat-psi": "psi"}


def fourier_second(values, y, omega, dy):
    """F(x_i, omega_k) = sum_j values[i, j] e^{-i omega_k y_j} dy (direct sum)."""
    kern = np.exp(-1j * np.outer(y, omega)) * dy
    return values @ kern


def _check_decay(f, tol):
    v = np.abs(f.values)
    scale = v.max()
    if scale == 0:
        return
    edge = max(v[:, 0].max(), v[:, -1].max())
    if edge > tol * scale:
        raise AliasingError(
            f"function does not decay in the second variable (edge/max = {edge / scale:.2e})")


def hat_forward(f, params, check=True, decay_tol=1e-8):
    """Kernel f^(x, y) = int f((x + y)/2, l) e^{-i w (x - y) l} dl.

    ``w`` is kappa/theta in the Phi chart and sqrt(kappa)/theta in the Psi
    chart.  Continuous normalization: no discrete convention factors.
    """
    require_chart(f, "phi", "psi")
    if check:
        _check_decay(f, decay_tol)
    freq = params.frequency(f.chart)
    m = (f.nx + 1) // 2
    h = 2.0 * f.dx
    diffs = np.arange(-(m - 1), m)
    omega = freq * diffs * h
    if check and np.abs(omega).max() > math.pi / f.dy * (1 + 1e-12):
        raise AliasingError("hat grid frequencies exceed the Nyquist band of the l-grid; "
                            "refine the second variable or shrink the first")
    F = fourier_second(f.values, f.y, omega, f.dy)
    i = np.arange(m)
    I, J = np.meshgrid(i, i, indexing="ij")
    vals = F[I + J, I - J + (m - 1)]
    meta = dict(f.meta)
    meta.update(l0=f.y0, dl=f.dy, nl=f.ny)
    return GridFunction(_HAT_OF[f.chart], f.x0, h, f.x0, h, vals, meta)


def hat_inverse(k, params, l0=None, dl=None, nl=None):
    """Inverse of :func:`hat_forward` onto the position grid.

    The second-variable grid defaults to the one recorded by the forward
    transform.  The first variable has spacing half the hat spacing and
    2 m - 1 points for an m x m kernel.  The result is periodic in the
    second variable with period pi / (h |w|) (recorded as ``meta['l_period']``),
    so it is only meaningful where the true function is supported inside
    one period.
    """
    require_chart(k, "hat-phi", "hat-psi")
    chart = _POS_OF[k.chart]
    l0 = k.meta.get("l0") if l0 is None else l0
    dl = k.meta.get("dl") if dl is None else dl
    nl = k.meta.get("nl") if nl is None else nl
    if l0 is None or dl is None or nl is None:
        raise ChartMismatchError("hat_inverse needs the target l-grid (l0, dl, nl)")
    freq = params.frequency(chart)
    m = k.nx
    h = k.dx
    ell = l0 + dl * np.arange(nl)
    G = np.zeros((2 * m - 1, 2 * m - 1), dtype=complex)
    i = np.arange(m)
    I, J = np.meshgrid(i, i, indexing="ij")
    G[I + J, I - J + (m - 1)] = k.values
    omega = freq * np.arange(-(m - 1), m) * h
    kern = np.exp(1j * np.outer(omega, ell)) * (abs(freq) * 2 * h / (2 * math.pi))
    vals = G @ kern
    meta = {key: val for key, val in k.meta.items() if key not in ("l0", "dl", "nl")}
    meta["l_period"] = math.pi / (h * abs(freq))
    return GridFunction(chart, k.x0, 0.5 * h, float(l0), float(dl), vals, meta)


def hat_unit(k_like, params, width=None, discrete=False):
    """Unit of the hat product on the grid of ``k_like``.

    The continuous unit is (2 pi |theta| / w) delta(x - y).  ``discrete=True``
    returns the exact grid unit (identity matrix over the spacing);
    otherwise the delta is mollified by a Gaussian of the given width
    (default three grid spacings).
    """
    require_chart(k_like, "hat-phi", "hat-psi")
    c = 1.0 / params.hat_prefactor(k_like.chart)
    if discrete:
        vals = np.eye(k_like.nx) / k_like.dx * c
    else:
        width = 3 * k_like.dx if width is None else width
        X, Y = k_like.mesh()
        vals = c * np.exp(-((X - Y) / width) ** 2) / (width * math.sqrt(math.pi))
    return k_like.with_values(vals)


# ---------------------------------------------------------------------------
# T01

def _t01_frequency_grid(f, oversample):
    band = math.pi / f.dy
    n = int(oversample * f.ny)
    du = 2 * band / n
    u = -band + du * (np.arange(n) + 0.5)
    return u, du


def t01_apply(f, params, direction="forward", oversample=2):
    """Apply T01 (``direction='forward'``) or its inverse in the l variable.

    Forward:  T01 f(a, l) = (1/2pi) int F(a, t(u)) cosh(c t(u))^{-1/2} e^{i u l} du
    with c = theta/kappa, t(u) = asinh(c u)/c and F the Fourier transform in l.
    Inverse:  (1/2pi) int cosh(c t)^{1/2} F(a, sinh(c t)/c) e^{i t l} dt.
    The frequency band is |u| <= pi/dl.  Going forward, input frequencies
    beyond asinh(c pi/dl)/c cannot reach the band; their share of the input
    energy is recorded in ``meta['t01_truncation']``.  Going backward,
    frequencies sinh(c t)/c outside the band carry no grid content and are
    set to zero.
    """
    require_chart(f, "phi")
    c = params.theta / params.kappa
    u, du = _t01_frequency_grid(f, oversample)
    band = math.pi / f.dy
    if direction == "forward":
        t = np.arcsinh(c * u) / c
        weight = np.cosh(c * t) ** -0.5
        spec = fourier_second(f.values, f.y, t, f.dy) * weight
        # input frequencies above |asinh(c band)/c| never reach the output band
        full = fourier_second(f.values, f.y, u, f.dy)
        tot = np.sum(np.abs(full) ** 2)
        lost = np.sum(np.abs(full[:, np.abs(u) > abs(np.arcsinh(c * band) / c)]) ** 2)
        dropped = float(lost / tot) if tot > 0 else 0.0
    elif direction == "inverse":
        xi = np.sinh(c * u) / c
        keep = np.abs(xi) <= band
        weight = np.where(keep, np.sqrt(np.cosh(c * u)), 0.0)
        spec = fourier_second(f.values, f.y, np.where(keep, xi, 0.0), f.dy) * weight
        dropped = 0.0
    else:
        raise ValueError(f"unknown direction {direction!r}")
    kern = np.exp(1j * np.outer(u, f.y)) * (du / (2 * math.pi))
    return f.with_values(spec @ kern, t01_truncation=dropped)


def _cauchy_derivatives(g, kmax, radius, npts=64):
    """Taylor coefficients g^(k)(0)/k! for k <= kmax by the trapezoid rule on a circle."""
    phi = 2 * math.pi * np.arange(npts) / npts
    z = radius * np.exp(1j * phi)
    vals = g(z)
    k = np.arange(kmax + 1)
    return (np.exp(-1j * np.outer(k, phi)) @ vals) / npts / radius ** k


def t01_polynomial(coeffs, params, direction="forward"):
    """Apply T01 to a polynomial sum_k coeffs[k] l^k (coefficients may be arrays).

    Uses T01 e^{i p l} = cosh(c p)^{1/2} exp(i sinh(c p) l / c) and, for the
    inverse, (1 + c^2 p^2)^{-1/4} exp(i asinh(c p) l / c), with c = theta/kappa;
    l^k = (-i d/dp)^k e^{i p l} at p = 0, and the p-derivatives are taken by
    Cauchy integrals.  Returns the coefficient list of the image polynomial.
    """
    c = params.theta / params.kappa
    deg = len(coeffs) - 1
    if direction == "forward":
        amp = lambda p: np.sqrt(np.cosh(c * p))
        phase = lambda p: np.sinh(c * p) / c
        radius = 0.5 * (math.pi / 2) / abs(c)
    elif direction == "inverse":
        amp = lambda p: (1 + (c * p) ** 2) ** -0.25
        phase = lambda p: np.arcsinh(c * p) / c
        radius = 0.5 / abs(c)
    else:
        raise ValueError(f"unknown direction {direction!r}")
    out = [0] * (deg + 1)
    for k, ck in enumerate(coeffs):
        if np.all(np.asarray(ck) == 0):
            continue
        # image of l^k = sum_j l^j (-i)^k d^k/dp^k [amp(p) (i phase(p))^j / j!] at p = 0
        for j in range(k + 1):
            taylor = _cauchy_derivatives(
                lambda p: amp(p) * (1j * phase(p)) ** j / math.factorial(j), k, radius)
            coef = (-1j) ** k * taylor[k] * math.factorial(k)
            if abs(coef) < 1e-13:
                continue
            coef = coef.real if abs(coef.imag) < 1e-13 else coef
            out[j] = out[j] + coef * np.asarray(ck)
    return out
