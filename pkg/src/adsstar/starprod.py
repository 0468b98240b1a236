"""The star-products star0 (Moyal, Phi chart), sharp (Moyal, Psi chart) and
star1 (the S-invariant product), with their Hilbert-algebra structure.

Two realizations are provided: :func:`star_direct` evaluates the printed
four-dimensional oscillatory integrals after integrating out the two
``l``-variables exactly as Fourier transforms (slow, for small grids), and
:func:`hat_star` composes hatted kernels as continuous matrices (fast).
"""
import math

import numpy as np

from .errors import ChartMismatchError
from .grid import require_chart, require_same_grid
from .params import DeformParams
from .transform import fourier_second, hat_forward, hat_inverse

__all__ = ["DeformParams", "hat_star", "star_direct", "star_via_hat", "involution",
           "scalar_product", "star_commutator", "smooth_window"]


def hat_star(k1, k2, params):
    """(k1 * k2)(x, y) = C int k1(x, eta) k2(eta, y) d eta.

    C = kappa/(2 pi |theta|) on hat-phi kernels and sqrt(kappa)/(2 pi |theta|)
    on hat-psi kernels.
    """
    require_chart(k1, "hat-phi", "hat-psi")
    require_same_grid(k1, k2)
    pref = params.hat_prefactor(k1.chart)
    return k1.with_values(pref * k1.dx * (k1.values @ k2.values))


def _direct_setup(kind, params):
    th, ka = params.theta, params.kappa
    if kind == "star0":
        c = 2 * ka / th
        return dict(chart="phi", pref=ka * ka / (math.pi * th) ** 2,
                    w1=lambda d: -c * d, w2=lambda d: c * d, big=lambda d: c * d, amp=None)
    if kind == "sharp":
        c = 2 * math.sqrt(ka) / th
        return dict(chart="psi", pref=ka / (math.pi * th) ** 2,
                    w1=lambda d: -c * d, w2=lambda d: c * d, big=lambda d: c * d, amp=None)
    if kind == "star1":
        k = ka / th
        return dict(chart="phi", pref=ka * ka / (math.pi * th) ** 2,
                    w1=lambda d: -k * np.sinh(2 * d), w2=lambda d: k * np.sinh(2 * d),
                    big=lambda d: k * np.sinh(2 * d),
                    amp=lambda d1, d2, d12: np.sqrt(np.cosh(2 * d1) * np.cosh(2 * d2) * np.cosh(2 * d12)))
    raise ValueError(f"unknown star-product {kind!r}")


def star_direct(kind, f1, f2, params):
    """Direct evaluation of star0, sharp or star1 on a common grid.

    With F the Fourier transform in the second variable, the two
    second-variable integrals are done exactly, leaving

        C sum_{a1, a2} amp * F1(a1, w1(a2 - a)) F2(a2, w2(a1 - a)) e^{i W(a1 - a2) l}

    (for star1 the arguments are w1 = -(kappa/theta) sinh 2(a2 - a),
    w2 = (kappa/theta) sinh 2(a1 - a), W = (kappa/theta) sinh 2(a1 - a2)).
    Frequencies beyond the Nyquist band of the second variable are dropped
    and the dropped count is recorded in ``meta['band_dropped']``.  Cost is
    O(n^3) in the first variable, so this is meant for grids up to ~64-128
    points in that direction.
    """
    cfg = _direct_setup(kind, params)
    require_chart(f1, cfg["chart"])
    require_same_grid(f1, f2)
    n = f1.nx
    d = f1.dx * np.arange(-(n - 1), n)
    band = math.pi / f1.dy
    w1, w2 = cfg["w1"](d), cfg["w2"](d)
    keep1, keep2 = np.abs(w1) <= band, np.abs(w2) <= band
    F1 = fourier_second(f1.values, f1.y, np.where(keep1, w1, 0), f1.dy) * keep1
    F2 = fourier_second(f2.values, f2.y, np.where(keep2, w2, 0), f2.dy) * keep2
    idx = np.arange(n)
    p = idx[:, None, None]
    i1 = idx[None, :, None]
    i2 = idx[None, None, :]
    # M[p, a1, a2] = F1[a1, a2 - p] F2[a2, a1 - p]
    M = F1[i1, i2 - p + n - 1] * F2[i2, i1 - p + n - 1]
    if cfg["amp"] is not None:
        h = f1.dx
        M = M * cfg["amp"]((i1 - i2) * h, (i2 - p) * h, (p - i1) * h)
    # collapse to the difference a1 - a2, the only combination in the last phase
    delta = np.broadcast_to(i1 - i2 + n - 1, M.shape)
    flat = (np.arange(n)[:, None, None] * (2 * n - 1) + delta).ravel()
    S = (np.bincount(flat, M.real.ravel(), n * (2 * n - 1))
         + 1j * np.bincount(flat, M.imag.ravel(), n * (2 * n - 1))).reshape(n, 2 * n - 1)
    E = np.exp(1j * np.outer(cfg["big"](d), f1.y))
    vals = cfg["pref"] * f1.dx ** 2 * (S @ E)
    dropped = int((~keep1).sum() + (~keep2).sum())
    return f1.with_values(vals, band_dropped=dropped)


def star_via_hat(f1, f2, params, **kw):
    """Product of two position-space functions computed through the hat picture."""
    k = hat_star(hat_forward(f1, params, **kw), hat_forward(f2, params, **kw), params)
    return hat_inverse(k, params)


def involution(f):
    """Complex conjugation (position) or transpose-conjugation (hat kernels)."""
    if f.chart in ("hat-phi", "hat-psi"):
        return f.with_values(np.conj(f.values.T))
    return f.with_values(np.conj(f.values))


def scalar_product(f1, f2, params, rep="position"):
    """<f1, f2>, antilinear in f1.

    Position picture: Liouville measure kappa da dl (Phi) or sqrt(kappa) dx dy
    (Psi).  Hat picture: weight kappa^2/(2 pi |theta|) (hat-phi) or
    kappa/(2 pi |theta|) (hat-psi); these make the hat transform isometric.
    """
    require_same_grid(f1, f2)
    if rep == "position":
        require_chart(f1, "phi", "psi")
        w = params.symplectic_density(f1.chart)
    elif rep == "hat":
        require_chart(f1, "hat-phi", "hat-psi")
        freq = abs(params.frequency(f1.chart))
        w = params.symplectic_density(f1.chart) * freq / (2 * math.pi)
    else:
        raise ChartMismatchError(f"unknown representation {rep!r}")
    return complex(w * f1.dx * f1.dy * np.vdot(f1.values, f2.values))


def star_commutator(f1, f2, kind, params):
    """[f1, f2] = f1 * f2 - f2 * f1 for the chosen product."""
    a = star_direct(kind, f1, f2, params)
    b = star_direct(kind, f2, f1, params)
    return a.with_values(a.values - b.values)


def smooth_window(x, lo, hi, edge):
    """Flat-top window on [lo, hi] with erf ramps of width ``edge``.

    The ramps are centred 4 edges inside the interval, so the window is
    below 1e-8 at the endpoints and equal to 1 within 1e-12 on
    [lo + 9 edge, hi - 9 edge].
    """
    verf = np.vectorize(math.erf)
    x = np.asarray(x, dtype=float)
    return 0.25 * (1 + verf((x - lo - 4 * edge) / edge)) * (1 + verf((hi - 4 * edge - x) / edge))
