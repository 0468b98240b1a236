"""Uniformly sampled complex functions on rectangular grids.

A :class:`GridFunction` carries its chart tag, so that operations can refuse
inputs living in the wrong picture (position vs. hatted kernel).  One
dimensional functions use ``ny = 1``.

The text file format is::

    # adsstar-grid v1
    chart=<phi|psi|hat-phi|hat-psi|line> nx=<int> ny=<int> x0=<float> dx=<float> y0=<float> dy=<float>
    re im          (nx*ny lines, row-major: x index slow, y index fast)
"""
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ChartMismatchError, GridMismatchError, InvalidConfigError

CHARTS = ("phi", "psi", "hat-phi", "hat-psi", "line")
HEADER = "# adsstar-grid v1"


@dataclass
class GridFunction:
    """Samples ``values[i, j] = f(x0 + i dx, y0 + j dy)``."""

    chart: str
    x0: float
    dx: float
    y0: float
    dy: float
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.chart not in CHARTS:
            raise InvalidConfigError(f"unknown chart {self.chart!r}")
        vals = np.asarray(self.values, dtype=complex)
        if vals.ndim == 1:
            vals = vals[:, None]
        if vals.ndim != 2:
            raise InvalidConfigError("grid values must be one or two dimensional")
        if self.dx <= 0 or (vals.shape[1] > 1 and self.dy <= 0):
            raise InvalidConfigError("grid spacings must be positive")
        self.values = vals

    @property
    def nx(self):
        return self.values.shape[0]

    @property
    def ny(self):
        return self.values.shape[1]

    @property
    def x(self):
        return self.x0 + self.dx * np.arange(self.nx)

    @property
    def y(self):
        return self.y0 + self.dy * np.arange(self.ny)

    def mesh(self):
        """(X, Y) coordinate arrays with ``indexing='ij'``."""
        return np.meshgrid(self.x, self.y, indexing="ij")

    def with_values(self, values, chart=None, **meta):
        m = dict(self.meta)
        m.update(meta)
        return replace(self, values=np.asarray(values, dtype=complex),
                       chart=chart or self.chart, meta=m)

    def same_grid(self, other, rtol=1e-12):
        return (self.values.shape == other.values.shape
                and np.allclose([self.x0, self.dx, self.y0, self.dy],
                                [other.x0, other.dx, other.y0, other.dy],
                                rtol=rtol, atol=1e-14))

    def line(self):
        """1D samples of a ``ny = 1`` function."""
        return self.values[:, 0]


def grid_from_function(chart, func, x0, dx, nx, y0=0.0, dy=1.0, ny=1):
    """Sample ``func(X, Y)`` (vectorized) on a fresh grid."""
    x = x0 + dx * np.arange(nx)
    y = y0 + dy * np.arange(ny)
    X, Y = np.meshgrid(x, y, indexing="ij")
    return GridFunction(chart, float(x0), float(dx), float(y0), float(dy), func(X, Y))


def linspace_grid(chart, func, xlim, nx, ylim=None, ny=1):
    """Sample ``func`` on ``nx`` x ``ny`` points spanning the closed limits."""
    dx = (xlim[1] - xlim[0]) / (nx - 1)
    if ylim is None:
        return grid_from_function(chart, func, xlim[0], dx, nx)
    dy = (ylim[1] - ylim[0]) / (ny - 1)
    return grid_from_function(chart, func, xlim[0], dx, nx, ylim[0], dy, ny)


def line_function(func, x0, dx, nx):
    """Convenience constructor for a 1D function of one variable."""
    return grid_from_function("line", lambda X, Y: func(X), x0, dx, nx)


def require_chart(f, *charts):
    if f.chart not in charts:
        raise ChartMismatchError(f"expected chart in {charts}, got {f.chart!r}")


def require_same_grid(f, g):
    if f.chart != g.chart:
        raise ChartMismatchError(f"chart mismatch: {f.chart!r} vs {g.chart!r}")
    if not f.same_grid(g):
        raise GridMismatchError("grid geometry mismatch")


def write_grid(f, path):
    """Write ``f`` in the shared text format."""
    with open(path, "w") as fh:
        fh.write(HEADER + "\n")
        fh.write(f"chart={f.chart} nx={f.nx} ny={f.ny} x0={f.x0!r} dx={f.dx!r} "
                 f"y0={f.y0!r} dy={f.dy!r}\n")
        flat = f.values.ravel()
        np.savetxt(fh, np.column_stack([flat.real, flat.imag]), fmt="%.17g")


def read_grid(path):
    """Read a grid file written by :func:`write_grid`."""
    with open(path) as fh:
        head = fh.readline().strip()
        if head != HEADER:
            raise InvalidConfigError(f"not an adsstar grid file: {head!r}")
        fields = dict(tok.split("=", 1) for tok in fh.readline().split())
        data = np.loadtxt(fh, ndmin=2)
    try:
        nx, ny = int(fields["nx"]), int(fields["ny"])
        geom = [float(fields[k]) for k in ("x0", "dx", "y0", "dy")]
        chart = fields["chart"]
    except KeyError as exc:
        raise InvalidConfigError(f"missing grid header field {exc}") from None
    if data.shape != (nx * ny, 2):
        raise InvalidConfigError("grid file sample count does not match header")
    values = (data[:, 0] + 1j * data[:, 1]).reshape(nx, ny)
    return GridFunction(chart, *geom, values)
