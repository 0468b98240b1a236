"""sl(2,R) algebra, adjoint-orbit charts, moment maps, flows and the
curvature contraction of AdS2.

Basis conventions: H = diag(1, -1), E = [[0, 1], [0, 0]], F = [[0, 0], [1, 0]],
with [H, E] = 2E, [H, F] = -2F, [E, F] = H.  Group elements are real 2x2
matrices of determinant one, stored as :class:`GroupElement`.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PoleError


@dataclass(frozen=True)
class LieAlgebraElement:
    """X = h H + e E + f F."""

    h: float = 0.0
    e: float = 0.0
    f: float = 0.0

    def __add__(self, other):
        return LieAlgebraElement(self.h + other.h, self.e + other.e, self.f + other.f)

    def __sub__(self, other):
        return LieAlgebraElement(self.h - other.h, self.e - other.e, self.f - other.f)

    def __mul__(self, s):
        return LieAlgebraElement(s * self.h, s * self.e, s * self.f)

    __rmul__ = __mul__

    def as_array(self):
        return np.array([self.h, self.e, self.f], dtype=float)

    def matrix(self):
        return np.array([[self.h, self.e], [self.f, -self.h]], dtype=float)

    def isclose(self, other, tol=1e-12):
        return bool(np.allclose(self.as_array(), other.as_array(), rtol=0, atol=tol))


H = LieAlgebraElement(1.0, 0.0, 0.0)
E = LieAlgebraElement(0.0, 1.0, 0.0)
F = LieAlgebraElement(0.0, 0.0, 1.0)


@dataclass(frozen=True)
class GroupElement:
    """Matrix ((a, b), (c, d)) with ad - bc = 1."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if abs(det - 1.0) > 1e-12 * max(1.0, abs(self.a * self.d), abs(self.b * self.c)):
            raise DomainError(f"group element has determinant {det!r}, expected 1")

    @classmethod
    def from_matrix(cls, m):
        m = np.asarray(m, dtype=float)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @classmethod
    def identity(cls):
        return cls(1.0, 0.0, 0.0, 1.0)

    def matrix(self):
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=float)

    def __matmul__(self, other):
        return GroupElement.from_matrix(self.matrix() @ other.matrix())

    def inverse(self):
        return GroupElement(self.d, -self.b, -self.c, self.a)

    @property
    def det(self):
        return self.a * self.d - self.b * self.c


@dataclass(frozen=True)
class ChartPoint:
    """Point of a Darboux chart: Phi uses (a, l), Psi uses (x, y)."""

    chart: str
    u: float
    v: float


@dataclass(frozen=True)
class ContractionPoint:
    """xi = hstar H* + estar E* + fstar F* in the dual of the contracted algebra."""

    hstar: float
    estar: float
    fstar: float
    t: float = 0.0


# ---------------------------------------------------------------------------
# algebra

def bracket(X, Y):
    """Lie bracket in sl(2, R)."""
    return LieAlgebraElement(
        X.e * Y.f - X.f * Y.e,
        2.0 * (X.h * Y.e - X.e * Y.h),
        -2.0 * (X.h * Y.f - X.f * Y.h),
    )


def killing(X, Y):
    """Killing form normalized as (1/8) tr(ad_X ad_Y), so beta(H, H) = 1."""
    return X.h * Y.h + 0.5 * (X.e * Y.f + X.f * Y.e)


def sigma(g):
    """Group automorphism ((a, b), (c, d)) -> ((d, c), (b, a))."""
    return GroupElement(g.d, g.c, g.b, g.a)


# ---------------------------------------------------------------------------
# charts and moment maps

def chart_embed(p, kappa):
    """Image of a chart point in the adjoint orbit of level kappa."""
    if p.chart.lower() == "phi":
        a, l = p.u, p.v
        return LieAlgebraElement(kappa * l, (1.0 - kappa * l * l) * math.exp(2 * a),
                                 kappa * math.exp(-2 * a))
    if p.chart.lower() == "psi":
        x, y = p.u, p.v
        s = math.sqrt(kappa)
        return LieAlgebraElement(s * (1 + 2 * x * y), -2 * s * x * (1 + x * y), 2 * s * y)
    raise DomainError(f"unknown chart {p.chart!r}")


def chart_change_j(kappa, a, l):
    """Change of coordinates from the Phi chart to the Psi chart."""
    x = (l - 1.0 / np.sqrt(kappa)) * np.exp(2 * a)
    y = 0.5 * np.sqrt(kappa) * np.exp(-2 * a)
    return x, y


def moment_maps(chart, kappa, u, v):
    """(lambda_H, lambda_E, lambda_F) at chart coordinates (vectorized)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if chart.lower() == "phi":
        lh = kappa * v
        le = 0.5 * kappa * np.exp(-2 * u)
        lf = 0.5 * (1 - kappa * v * v) * np.exp(2 * u)
    elif chart.lower() == "psi":
        s = math.sqrt(kappa)
        lh = s * (1 + 2 * u * v)
        le = s * v
        lf = -s * u * (1 + u * v)
    else:
        raise DomainError(f"unknown chart {chart!r}")
    return lh, le, lf


def moment_map(chart, kappa, X, u, v):
    """lambda_X = h lambda_H + e lambda_E + f lambda_F, linear in X."""
    lh, le, lf = moment_maps(chart, kappa, u, v)
    return X.h * lh + X.e * le + X.f * lf


# ---------------------------------------------------------------------------
# flows and actions

def _sinhc(z):
    """sinh(z)/z with its removable singularity (z may be imaginary)."""
    if abs(z) < 1e-4:
        z2 = z * z
        return 1 + z2 / 6 + z2 * z2 / 120 + z2 ** 3 / 5040
    return np.sinh(z) / z


def _cosh_series(z):
    if abs(z) < 1e-4:
        z2 = z * z
        return 1 + z2 / 2 + z2 * z2 / 24 + z2 ** 3 / 720
    return np.cosh(z)


def flow_matrix(X, t):
    """M(t) = exp(t(-h H + f E + e F)) = sigma(exp(t X)) in closed form.

    With tau^2 = h^2 + e f the exponential is cosh(tau t) + sinh(tau t)/tau * A
    (trigonometric when tau^2 < 0), where A = [[-h, f], [e, h]].
    """
    A = np.array([[-X.h, X.f], [X.e, X.h]], dtype=float)
    disc = X.h * X.h + X.e * X.f
    if disc >= 0:
        z = math.sqrt(disc) * t
        c = float(_cosh_series(z))
        s = float(_sinhc(z)) * t
    else:
        w = math.sqrt(-disc) * t
        c = math.cos(w)
        s = (1 - w * w / 6 + w ** 4 / 120 - w ** 6 / 5040) * t if abs(w) < 1e-4 else math.sin(w) / math.sqrt(-disc)
    m = c * np.eye(2) + s * A
    return GroupElement.from_matrix(m)


def moebius(g, x):
    """Stereographic action g.x = (a x - c) / (-b x + d).

    The map g -> (x -> g.x) reverses products: moebius(g1, moebius(g2, x))
    = moebius(g2 @ g1, x), which is what makes the principal series a
    representation.
    """
    x = np.asarray(x, dtype=float)
    den = -g.b * x + g.d
    if np.any(den == 0):
        raise PoleError("Moebius pole: -b x + d = 0")
    out = (g.a * x - g.c) / den
    return out if out.ndim else float(out)


def s_group_mul(g1, g2):
    """Product in S = exp(RH) exp(RE): (a1, l1)(a2, l2) = (a1 + a2, e^{-2 a2} l1 + l2)."""
    (a1, l1), (a2, l2) = g1, g2
    return a1 + a2, math.exp(-2 * a2) * l1 + l2


def s_action(a, l, p):
    """Action of (a, l) in S on the Psi chart: (x, y) -> ((x + l) e^{2a}, y e^{-2a})."""
    x, y = p
    return (np.asarray(x) + l) * np.exp(2 * a), np.asarray(y) * np.exp(-2 * a)


def bch_pair(kind, s1, s2):
    """Closed BCH forms for the pairs (aH, lE), (aH, mF) and (lE, mF)."""
    if kind == "HE":
        a, l = s1, s2
        return LieAlgebraElement(a, _x_over_sinh(a) * math.exp(a) * l, 0.0)
    if kind == "HF":
        a, m = s1, s2
        return LieAlgebraElement(a, 0.0, _x_over_sinh(a) * math.exp(-a) * m)
    if kind == "EF":
        l, m = s1, s2
        if l * m <= 0:
            raise DomainError("BCH(lE, mF) needs l m > 0")
        # Arccosh(1 + lm/2)/sqrt(lm + (lm)^2/4) = w/sinh(w) with cosh w = 1 + lm/2
        w = math.acosh(1.0 + 0.5 * l * m)
        k = _x_over_sinh(w)
        return LieAlgebraElement(0.5 * k * l * m, k * l, k * m)
    raise DomainError(f"unknown BCH kind {kind!r}")


def _x_over_sinh(a):
    if abs(a) < 1e-4:
        a2 = a * a
        return 1 - a2 / 6 + 7 * a2 * a2 / 360
    return a / math.sinh(a)


def geodesic_symmetry(center, p):
    """Global geodesic symmetry of the contracted space at ``center``."""
    a, l = center
    a1, l1 = p
    return 2 * a - a1, 2 * np.cosh(2 * (a - a1)) * l - l1


# ---------------------------------------------------------------------------
# curvature contraction

def contraction_metric(xi):
    """beta_t(xi, xi) with beta_t = 4 t beta*, i.e. (t/2) h*^2 + 2 e* f*."""
    return 0.5 * xi.t * xi.hstar ** 2 + 2.0 * xi.estar * xi.fstar


def classify(xi, tol=1e-10):
    """Component of the contracted orbit (t = 0) containing ``xi``.

    Returns ``'plus'`` or ``'minus'`` according to the sign of the E*
    coefficient, or ``'off_orbit'`` when beta_0(xi, xi) differs from 2.
    """
    if xi.t != 0:
        raise DomainError("classification is defined at t = 0")
    if abs(contraction_metric(xi) - 2.0) > tol or xi.estar == 0:
        return "off_orbit"
    return "plus" if xi.estar > 0 else "minus"
