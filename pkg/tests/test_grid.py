import numpy as np
import pytest

from adsstar.errors import ChartMismatchError, GridMismatchError, InvalidConfigError
from adsstar.grid import (GridFunction, linspace_grid, line_function, read_grid, require_chart,
                          require_same_grid, write_grid)


def test_file_round_trip(tmp_path):
    f = linspace_grid("hat-psi", lambda X, Y: np.exp(-X ** 2 - Y ** 2) * (1 + 0.1j * X * Y) / 3, (-1, 1), 7, (0, 2), 5)
    path = tmp_path / "g.txt"
    write_grid(f, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "# adsstar-grid v1"
    assert lines[1].startswith("chart=hat-psi nx=7 ny=5 ")
    assert len(lines) == 2 + 35
    g = read_grid(path)
    assert g.chart == f.chart and g.same_grid(f)
    assert np.array_equal(g.values, f.values)


def test_bad_header(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("hello\n")
    with pytest.raises(InvalidConfigError):
        read_grid(p)


def test_validation():
    with pytest.raises(InvalidConfigError):
        GridFunction("torus", 0, 1, 0, 1, np.zeros((2, 2)))
    with pytest.raises(InvalidConfigError):
        GridFunction("phi", 0, -1, 0, 1, np.zeros((2, 2)))
    f = line_function(np.sin, 0.0, 0.1, 11)
    assert f.ny == 1 and np.allclose(f.line(), np.sin(f.x))
    with pytest.raises(ChartMismatchError):
        require_chart(f, "phi")
    with pytest.raises(GridMismatchError):
        require_same_grid(f, line_function(np.sin, 0.0, 0.2, 11))
