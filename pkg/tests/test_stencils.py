import numpy as np
import pytest

from bivelocity.state import Grid1D
from bivelocity.stencils import EVEN, ODD, ddx, div, pad


def test_periodic_derivative_second_order():
    errs = []
    for n in (32, 64, 128):
        g = Grid1D(n, 1.0)
        f = np.sin(2 * np.pi * g.x) + 0.3 * np.cos(4 * np.pi * g.x)
        exact = 2 * np.pi * np.cos(2 * np.pi * g.x) - 1.2 * np.pi * np.sin(4 * np.pi * g.x)
        errs.append(np.max(np.abs(ddx(f, g) - exact)))
    order = np.log2(errs[0] / errs[1]), np.log2(errs[1] / errs[2])
    assert all(abs(o - 2) < 0.05 for o in order)


def test_discrete_symbol():
    # central difference of a Fourier mode multiplies by i sin(kh)/h
    g = Grid1D(16, 1.0)
    k = 2 * np.pi * 3
    d = ddx(np.exp(1j * k * g.x).real, g)
    assert np.allclose(d, -np.sin(k * g.dx) / g.dx * np.sin(k * g.x))


def test_divergence_telescopes():
    rng = np.random.default_rng(1)
    g = Grid1D(50, 2.0)
    f = rng.normal(size=50)
    assert abs(np.sum(div(f, g))) < 1e-13


def test_reflective_ghosts():
    g = Grid1D(8, 1.0, "reflective")
    f = np.arange(1.0, 9.0)
    assert pad(f, g, EVEN)[0] == 1.0 and pad(f, g, EVEN)[-1] == 8.0
    assert pad(f, g, ODD)[0] == -1.0 and pad(f, g, ODD)[-1] == -8.0


def test_reflective_even_field_slope_vanishes_at_wall():
    g = Grid1D(64, 1.0, "reflective")
    f = np.cos(np.pi * g.x)  # zero slope at both walls
    d = ddx(f, g, EVEN)
    assert d[0] == pytest.approx(-np.pi * np.sin(np.pi * g.x[0]), abs=2e-3)


def test_reflective_divergence_of_odd_flux_conserves():
    g = Grid1D(40, 1.0, "reflective")
    flux = np.sin(np.pi * g.x) * (1 + g.x)  # vanishes at the walls
    # the mirrored boundary contributions cancel, leaving round-off
    assert abs(np.sum(div(flux, g, ODD)) * g.dx) < 1e-13
